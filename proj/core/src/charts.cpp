#include "hemi/charts.hpp"

#include <cmath>
#include <stdexcept>

namespace hemi {

Poly2 pullback_x(const Poly2& p, int m) {
    Poly2 out;
    for (int i = 0; i <= p.xdeg(); ++i)
        for (int j = 0; j <= p.ydeg(); ++j) {
            real c = p.coeff(i, j);
            if (c == 0.0) continue;
            if (i + j > m) throw std::domain_error("pullback_x: degree above bound");
            out.add_coeff(m - i - j, j, c);
        }
    return out;
}

Poly2 pullback_y(const Poly2& p, int m) {
    Poly2 out;
    for (int i = 0; i <= p.xdeg(); ++i)
        for (int j = 0; j <= p.ydeg(); ++j) {
            real c = p.coeff(i, j);
            if (c == 0.0) continue;
            if (i + j > m) throw std::domain_error("pullback_y: degree above bound");
            out.add_coeff(i, m - i - j, c);
        }
    return out;
}

ProjectiveChart projectivize(const DSystem& d) {
    const int n = d.n();
    Poly2 P1;
    // -x2 * x1^n f(1/x1, x2/x1)
    for (int i = 0; i <= d.f().xdeg(); ++i)
        for (int j = 0; j <= d.f().ydeg(); ++j) {
            real c = d.f().coeff(i, j);
            if (c != 0.0) P1.add_coeff(n - i - j, j + 1, -c);
        }
    // -x1^(n+1) g(1/x1)
    for (int i = 0; i <= d.g().degree(); ++i) {
        real c = d.g().coeff(i);
        if (c != 0.0) P1.add_coeff(n + 1 - i, 0, -c);
    }
    Poly2 P2 = P1;
    // + x1^n q(1/x1, x2/x1)
    for (int i = 0; i <= d.q().xdeg(); ++i)
        for (int j = 0; j <= d.q().ydeg(); ++j) {
            real c = d.q().coeff(i, j);
            if (c != 0.0) P2.add_coeff(n - i - j, j, c);
        }

    real lambda = -1.0 + d.q().coeff(n, 0) / d.g_top();
    if (!(lambda > 0.0))
        throw std::domain_error("projectivize: lambda <= 0, saddle not of the required type");
    ProjectiveChart c;
    c.P1 = P1;
    c.P2 = P2;
    c.K = RationalFn2{P2, P1};
    c.lambda = lambda;
    return c;
}

KPartials k_partials(const ProjectiveChart& c) {
    const Poly2& N = c.P2;
    const Poly2& D = c.P1;
    Poly2 Nx = N.dx(), Ny = N.dy(), Dx = D.dx(), Dy = D.dy();

    real n0 = N.eval(0, 0), d0 = D.eval(0, 0);
    real nx = Nx.eval(0, 0), ny = Ny.eval(0, 0);
    real dxv = Dx.eval(0, 0), dyv = Dy.eval(0, 0);
    real nxy = Nx.dy().eval(0, 0), dxy = Dx.dy().eval(0, 0);

    KPartials kp;
    kp.d1K = (nx * d0 - n0 * dxv) / (d0 * d0);
    kp.d2K = (ny * d0 - n0 * dyv) / (d0 * d0);
    kp.d12K = (nxy * d0 + nx * dyv - ny * dxv - n0 * dxy) / (d0 * d0) -
              2.0 * dyv * (nx * d0 - n0 * dxv) / (d0 * d0 * d0);

    kp.d2K_line = RationalFn1{(Ny * D - N * Dy).slice_y0(), (D * D).slice_y0()};
    kp.d1invK_line = RationalFn1{(Dx * N - D * Nx).slice_x0(), (N * N).slice_x0()};
    return kp;
}

Vec2 ChartAtlas::field(ChartId chart, Vec2 p) const {
    switch (chart) {
        case ChartId::Affine:
            return {P.eval(p.x, p.y), Q.eval(p.x, p.y)};
        case ChartId::InfX: {
            // sign(x1) * (-x1 Pstar, Qstar - x2 Pstar): positively rescaled
            // pushforward, valid for odd m-1.
            real s = p.x < 0 ? -1.0 : 1.0;
            real ps = Pstar.eval(p.x, p.y);
            real qs = Qstar.eval(p.x, p.y);
            return {s * (-p.x * ps), s * (qs - p.y * ps)};
        }
        case ChartId::InfY: {
            real s = p.y < 0 ? -1.0 : 1.0;
            real pr = Pring.eval(p.x, p.y);
            real qr = Qring.eval(p.x, p.y);
            return {s * (pr - p.x * qr), s * (-p.y * qr)};
        }
    }
    return {};
}

Vec2 ChartAtlas::affine_to_x(Vec2 p) { return {1.0 / p.x, p.y / p.x}; }
Vec2 ChartAtlas::x_to_affine(Vec2 p) { return {1.0 / p.x, p.y / p.x}; }
Vec2 ChartAtlas::affine_to_y(Vec2 p) { return {p.x / p.y, 1.0 / p.y}; }
Vec2 ChartAtlas::y_to_affine(Vec2 p) { return {p.x / p.y, 1.0 / p.y}; }
Vec2 ChartAtlas::x_to_y(Vec2 p) { return {1.0 / p.y, p.x / p.y}; }
Vec2 ChartAtlas::y_to_x(Vec2 p) { return {p.y / p.x, 1.0 / p.x}; }

Vec2 ChartAtlas::to_chart(ChartId chart, Vec2 affine) const {
    switch (chart) {
        case ChartId::Affine: return affine;
        case ChartId::InfX: return affine_to_x(affine);
        case ChartId::InfY: return affine_to_y(affine);
    }
    return affine;
}

Vec2 ChartAtlas::to_affine(ChartId chart, Vec2 p) const {
    switch (chart) {
        case ChartId::Affine: return p;
        case ChartId::InfX: return x_to_affine(p);
        case ChartId::InfY: return y_to_affine(p);
    }
    return p;
}

ChartId ChartAtlas::pick_chart(Vec2 affine) const {
    real ax = std::fabs(affine.x), ay = std::fabs(affine.y);
    if (std::max(ax, ay) <= radius_in) return ChartId::Affine;
    return ax >= ay ? ChartId::InfX : ChartId::InfY;
}

ChartAtlas make_atlas(Poly2 P, Poly2 Q, int m) {
    if (P.total_degree() > m || Q.total_degree() > m)
        throw std::invalid_argument("make_atlas: degree bound too small");
    ChartAtlas a;
    a.m = m;
    a.Pstar = pullback_x(P, m);
    a.Qstar = pullback_x(Q, m);
    a.Pring = pullback_y(P, m);
    a.Qring = pullback_y(Q, m);
    a.P = std::move(P);
    a.Q = std::move(Q);
    return a;
}

ChartAtlas poincare_charts(const DSystem& d) {
    Poly2 y = Poly2::from_poly1_y(Poly1::monomial(1));
    Poly2 P = y * d.f() + Poly2::from_poly1_x(d.g());
    Poly2 Q = y * d.q();
    return make_atlas(std::move(P), std::move(Q), d.n() + 1);
}

}  // namespace hemi
