#include <doctest.h>

#include <cmath>

#include "hemi/charts.hpp"
#include "hemi/quadratic.hpp"
#include "test_util.hpp"

using namespace hemi;
using testutil::rel_err;

namespace {

DSystem family(real a, real b, real e1 = 0, real e2 = 0) {
    return make_quadratic({a, b, 0, e1, e2});
}

}  // namespace

TEST_CASE("lambda of the projective chart") {
    // family: lambda = -(a+2)/a; independently, -1 + q1(1,0)/g2 with
    // q1(1,0) = -2 and g2 = a.
    for (real a : {-1.5, -0.5, -0.25, -1.9})
        for (real b : {0.5, 1.0, 1.4}) {
            ProjectiveChart c = projectivize(family(a, b));
            CHECK(rel_err(c.lambda, -(a + 2.0) / a) < 1e-14);
            CHECK(rel_err(c.lambda, -1.0 - 2.0 / a) < 1e-14);
        }

    // a = -1 gives lambda = 1 (built directly: the chart is regular there even
    // though the closed forms are not)
    Poly2 f;
    f.set_coeff(0, 1, 1.0);  // f = y
    Poly2 q;
    q.set_coeff(1, 0, -2.0);
    DSystem d(1, f, Poly1({-1.0, 0.0, -1.0}), q);
    CHECK(projectivize(d).lambda == doctest::Approx(1.0));

    // lambda <= 0 rejected: q1(1,0) = 0 makes lambda = -1
    DSystem bad(1, f, Poly1({-1.0, 0.0, -1.0}), Poly2());
    CHECK_THROWS_AS(projectivize(bad), std::domain_error);
}

TEST_CASE("K(0,0) = -lambda and P2 - P1 identity") {
    for (real a : {-1.5, -0.5})
        for (real e2 : {0.0, -0.3}) {
            DSystem d = family(a, 0.8, 0.1, e2);
            ProjectiveChart c = projectivize(d);
            CHECK(std::fabs(c.K.eval(0.0, 0.0) + c.lambda) < 1e-14 * (1.0 + c.lambda));

            // P2 - P1 is the cleared form of q: x1^n q(1/x1, x2/x1)
            Poly2 diff = c.P2 - c.P1;
            Poly2 cleared = pullback_x(d.q(), d.n());
            for (int i = 0; i <= 2; ++i)
                for (int j = 0; j <= 2; ++j) CHECK(diff.coeff(i, j) == cleared.coeff(i, j));
        }
}

TEST_CASE("pullback coefficient maps") {
    Poly2 p;
    p.set_coeff(1, 1, 2.0);  // 2 x y
    p.set_coeff(0, 0, 3.0);
    Poly2 px = pullback_x(p, 3);  // x1^3 p(1/x1, x2/x1) = 2 x1 x2 + 3 x1^3
    CHECK(px.coeff(1, 1) == 2.0);
    CHECK(px.coeff(3, 0) == 3.0);
    Poly2 py = pullback_y(p, 3);  // y2^3 p(y1/y2, 1/y2) = 2 y1 y2 + 3 y2^3
    CHECK(py.coeff(1, 1) == 2.0);
    CHECK(py.coeff(0, 3) == 3.0);
    Poly2 over;
    over.set_coeff(2, 2, 1.0);
    CHECK_THROWS_AS(pullback_x(over, 3), std::domain_error);
}

TEST_CASE("K partials: closed forms of the family") {
    const real a = -1.5, b = 0.8, e1 = 0.02, e2 = -0.05;
    DSystem d = family(a, b, e1, e2);
    KPartials kp = k_partials(projectivize(d));
    const real eta1 = b / (a + 2.0), eta2 = (b - 2.0) / (4.0 * a);

    for (real u : {0.0, 0.2, 0.7, 1.5, -0.4}) {
        real den2 = 1.0 + (e1 / a) * u + eta2 * u * u;
        real want2 = (2.0 / (a * a)) * ((b - 1.0) * u - e2) / (den2 * den2);
        CHECK(rel_err(kp.d2K_line.eval(u), want2, 1e-14) < 1e-11);

        real den1 = 1.0 + (e2 / (a + 2.0)) * u + eta1 * u * u;
        real want1 = (2.0 / ((a + 2.0) * (a + 2.0))) * ((1.0 - b) * u + e1) / (den1 * den1);
        CHECK(rel_err(kp.d1invK_line.eval(u), want1, 1e-14) < 1e-11);
    }

    // scalar values match the line evaluators at 0
    CHECK(rel_err(kp.d2K, kp.d2K_line.eval(0.0), 1e-14) < 1e-12);
    CHECK(rel_err(kp.d1invK_line.eval(0.0), e1 * 2.0 / ((a + 2.0) * (a + 2.0)), 1e-14) < 1e-12);
}

TEST_CASE("K partials agree with centered finite differences") {
    DSystem d = family(-0.5, 0.5, 0.01, -0.02);
    ProjectiveChart c = projectivize(d);
    KPartials kp = k_partials(c);
    const real h = 1e-5;

    auto K = [&](real u, real v) { return c.K.eval(u, v); };
    real fd1 = (K(h, 0) - K(-h, 0)) / (2 * h);
    real fd2 = (K(0, h) - K(0, -h)) / (2 * h);
    real fd12 = (K(h, h) - K(h, -h) - K(-h, h) + K(-h, -h)) / (4 * h * h);
    CHECK(rel_err(kp.d1K, fd1, 1e-8) < 1e-6);
    CHECK(rel_err(kp.d2K, fd2, 1e-8) < 1e-6);
    CHECK(rel_err(kp.d12K, fd12, 1e-8) < 1e-5);

    // the d2K line away from 0, against FD in the second slot
    for (real u : {0.3, 1.1}) {
        real fd = (K(u, h) - K(u, -h)) / (2 * h);
        CHECK(rel_err(kp.d2K_line.eval(u), fd, 1e-8) < 1e-6);
    }
    // the d1(1/K) line, against FD of 1/K in the first slot
    for (real u : {0.3, 1.1}) {
        real fd = (1.0 / K(h, u) - 1.0 / K(-h, u)) / (2 * h);
        CHECK(rel_err(kp.d1invK_line.eval(u), fd, 1e-8) < 1e-6);
    }
}

TEST_CASE("atlas transitions round-trip") {
    ChartAtlas atlas = quadratic_atlas({-0.5, 0.5, 0, 0, 0});
    Vec2 p{2.0, 3.0};

    Vec2 back_x = ChartAtlas::x_to_affine(ChartAtlas::affine_to_x(p));
    CHECK(std::fabs(back_x.x - 2.0) < 1e-12);
    CHECK(std::fabs(back_x.y - 3.0) < 1e-12);
    Vec2 back_y = ChartAtlas::y_to_affine(ChartAtlas::affine_to_y(p));
    CHECK(std::fabs(back_y.x - 2.0) < 1e-12);
    CHECK(std::fabs(back_y.y - 3.0) < 1e-12);
    Vec2 via_both = ChartAtlas::y_to_x(ChartAtlas::x_to_y(ChartAtlas::affine_to_x(p)));
    Vec2 back = ChartAtlas::x_to_affine(via_both);
    CHECK(std::fabs(back.x - 2.0) < 1e-12);
    CHECK(std::fabs(back.y - 3.0) < 1e-12);

    for (ChartId id : {ChartId::Affine, ChartId::InfX, ChartId::InfY}) {
        Vec2 r = atlas.to_affine(id, atlas.to_chart(id, p));
        CHECK(std::fabs(r.x - 2.0) < 1e-12);
        CHECK(std::fabs(r.y - 3.0) < 1e-12);
    }

    CHECK(atlas.pick_chart({1.0, 2.0}) == ChartId::Affine);
    CHECK(atlas.pick_chart({20.0, 2.0}) == ChartId::InfX);
    CHECK(atlas.pick_chart({2.0, -20.0}) == ChartId::InfY);
}

TEST_CASE("chart fields keep y = 0 invariant when eps0 = 0") {
    ChartAtlas atlas = quadratic_atlas({-0.5, 0.5, 0, 0.01, -0.02});
    // affine: second component vanishes on y = 0
    for (real x : {-3.0, 0.0, 1.7}) CHECK(atlas.field(ChartId::Affine, {x, 0.0}).y == 0.0);
    // InfX image of y = 0 is x2 = 0
    for (real x1 : {-0.4, 0.08, 0.3}) CHECK(atlas.field(ChartId::InfX, {x1, 0.0}).y == 0.0);
    // equator x1 = 0 is invariant in InfX as well
    for (real x2 : {-0.5, 0.2}) CHECK(atlas.field(ChartId::InfX, {0.0, x2}).x == 0.0);
    // InfY equator y2 = 0 invariant
    for (real y1 : {-0.5, 0.2}) CHECK(atlas.field(ChartId::InfY, {y1, 0.0}).y == 0.0);

    // with eps0 != 0 the affine invariance is broken (sanity of the check)
    ChartAtlas pert = quadratic_atlas({-0.5, 0.5, 0.01, 0, 0});
    CHECK(pert.field(ChartId::Affine, {1.0, 0.0}).y != 0.0);
}

TEST_CASE("saddle at the InfX origin has eigenvalue ratio -lambda") {
    for (real a : {-0.5, -1.5}) {
        QuadParams mu{a, 0.8, 0, 0.01, -0.02};
        ChartAtlas atlas = quadratic_atlas(mu);
        const real h = 1e-6;
        auto F = [&](real x1, real x2) { return atlas.field(ChartId::InfX, {x1, x2}); };
        // the field carries a sign(x1) orientation factor, so x1-derivatives
        // must be one-sided (second order, f(0) = 0 at the equilibrium)
        real j11 = (4.0 * F(h, 0).x - F(2 * h, 0).x) / (2 * h);
        real j21 = (4.0 * F(h, 0).y - F(2 * h, 0).y) / (2 * h);
        real j12 = (F(0, h).x - F(0, -h).x) / (2 * h);
        real j22 = (F(0, h).y - F(0, -h).y) / (2 * h);
        // triangular structure: the x1 direction decouples
        CHECK(std::fabs(j12) < 1e-9);
        CHECK(std::fabs(j21) < 1e-6);
        // eigenvalues proportional to (-g2, q1(1,0) - g2) = (-a, -2-a)
        CHECK(j11 > 0.0);
        CHECK(j22 < 0.0);
        CHECK(rel_err(j22 / j11, -mu.lambda()) < 1e-5);
    }
}

TEST_CASE("make_atlas degree guard") {
    Poly2 P;
    P.set_coeff(2, 1, 1.0);
    CHECK_THROWS_AS(make_atlas(P, Poly2(), 2), std::invalid_argument);
}
