#include "hemi/quadratic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "hemi/asymptotics.hpp"
#include "hemi/saddle_coeffs.hpp"

namespace hemi {

namespace {

constexpr real kABand = 1e-3;  // exclusion band around a = -1

void require_admissible(const QuadParams& p, const char* who) {
    if (!p.admissible())
        throw std::invalid_argument(std::string(who) + ": (a, b) outside (-2,0)x(0,2)");
}

}  // namespace

DSystem make_quadratic(const QuadParams& p) {
    require_admissible(p, "make_quadratic");
    if (p.eps0 != 0.0)
        throw std::invalid_argument("make_quadratic: eps0 must be 0 for the D-system form");
    Poly2 f;
    f.set_coeff(0, 0, 1.0 - p.b);
    f.set_coeff(1, 0, p.eps2);
    f.set_coeff(0, 1, p.b);
    Poly1 g({(p.b - 2.0) / 4.0, p.eps1, p.a});
    Poly2 q;
    q.set_coeff(1, 0, -2.0);
    return DSystem(1, f, g, q,
                   {{"a", p.a}, {"b", p.b}, {"eps0", p.eps0}, {"eps1", p.eps1}, {"eps2", p.eps2}});
}

Vec2 quadratic_field(const QuadParams& p, Vec2 xy) {
    real x = xy.x, y = xy.y;
    return {(p.b - 2.0) / 4.0 + p.eps1 * x + (1.0 - p.b) * y + p.a * x * x + p.eps2 * x * y +
                p.b * y * y,
            p.eps0 - 2.0 * x * y};
}

ChartAtlas quadratic_atlas(const QuadParams& p) {
    require_admissible(p, "quadratic_atlas");
    Poly2 P;
    P.set_coeff(0, 0, (p.b - 2.0) / 4.0);
    P.set_coeff(1, 0, p.eps1);
    P.set_coeff(0, 1, 1.0 - p.b);
    P.set_coeff(2, 0, p.a);
    P.set_coeff(1, 1, p.eps2);
    P.set_coeff(0, 2, p.b);
    Poly2 Q;
    Q.set_coeff(0, 0, p.eps0);
    Q.set_coeff(1, 1, -2.0);
    return make_atlas(P, Q, 2);
}

NuParams phi_params(const QuadParams& p) {
    real arg = p.b * (p.a + 2.0) / (p.a * (p.b - 2.0));
    if (arg <= 0.0) throw std::domain_error("phi_params: square-root argument nonpositive");
    real r = std::sqrt(arg);
    NuParams nu;
    nu.nu1 = p.eps0;
    nu.nu2 = -p.eps2 - 2.0 * r * p.eps1;
    nu.nu3 = -p.eps2 + 2.0 * r * p.eps1;
    nu.nu4 = p.a + 2.0 - p.b;
    nu.nu5 = p.a + p.b;
    return nu;
}

QuadParams phi_inverse(const NuParams& nu) {
    QuadParams p;
    p.a = 0.5 * (nu.nu4 + nu.nu5) - 1.0;
    p.b = 0.5 * (nu.nu5 - nu.nu4) + 1.0;
    real arg = p.b * (p.a + 2.0) / (p.a * (p.b - 2.0));
    if (arg <= 0.0) throw std::domain_error("phi_inverse: square-root argument nonpositive");
    real r = std::sqrt(arg);
    p.eps0 = nu.nu1;
    p.eps2 = -0.5 * (nu.nu2 + nu.nu3);
    p.eps1 = (nu.nu3 - nu.nu2) / (4.0 * r);
    return p;
}

QuadParams involution(const QuadParams& p) {
    if (!(p.b > 0.0 && p.b < 2.0)) throw std::domain_error("involution: b outside (0,2)");
    real e = p.eta_b();
    return {p.a, 2.0 - p.b, -e * e * e * p.eps0, e * p.eps1, -p.eps2 / e};
}

Vec2 involution_point(const QuadParams& p, Vec2 xy) {
    real e = p.eta_b();
    return {e * xy.x, -e * e * xy.y};
}

CenterVerdict center_variety(const QuadParams& p, real tol) {
    CenterVerdict v;
    v.z0_residual = {std::fabs(p.eps0), std::fabs(p.eps1), std::fabs(p.eps2)};
    v.z1_residual = {std::fabs(p.a + p.b), std::fabs(p.eps0),
                     std::fabs(2.0 * p.eps1 + p.eps2)};
    auto all_le = [tol](const std::array<real, 3>& r) {
        return r[0] <= tol && r[1] <= tol && r[2] <= tol;
    };
    bool in0 = all_le(v.z0_residual), in1 = all_le(v.z1_residual);
    v.membership = in0 && in1 ? CenterClass::both
                 : in0        ? CenterClass::Z0
                 : in1        ? CenterClass::Z1
                              : CenterClass::none;
    return v;
}

real first_integral(const QuadParams& p, real x, real y, FirstIntegral variant) {
    if (y == 0.0) throw std::domain_error("first_integral: y = 0");
    CenterVerdict v = center_variety(p);
    if (variant == FirstIntegral::H0) {
        if (v.membership != CenterClass::Z0 && v.membership != CenterClass::both)
            throw std::domain_error("first_integral: H0 needs mu in Z0");
        if (std::fabs(p.a + 1.0) < kABand)
            throw std::domain_error("first_integral: H0 undefined at a = -1");
        real l = p.b / (p.a + 2.0);
        real m = -(p.b - 1.0) / (p.a + 1.0);
        real n = (p.b - 2.0) / (4.0 * p.a);
        return std::pow(std::fabs(y), p.a) * (x * x + l * y * y + m * y + n);
    }
    if (v.membership != CenterClass::Z1 && v.membership != CenterClass::both)
        throw std::domain_error("first_integral: H1 needs mu in Z1");
    real a1sq = 4.0 * p.b * (2.0 - p.b) - p.eps2 * p.eps2;
    if (a1sq <= 0.0) throw std::domain_error("first_integral: 4b(2-b) <= eps2^2");
    real a1 = std::sqrt(a1sq);
    real r1 = 2.0 * p.b * y + (2.0 - p.b) + p.eps2 * x;
    // exponent sign: -2 eps2/alpha1 is the combination the field conserves
    return std::pow(std::fabs(y), p.a) * (r1 * r1 + a1sq * x * x) *
           std::exp((-2.0 * p.eps2 / a1) * std::atan2(a1 * x, r1));
}

ClosedForms closed_forms(const QuadParams& p) {
    require_admissible(p, "closed_forms");
    if (std::fabs(p.a + 1.0) < kABand)
        throw std::domain_error("closed_forms: inside the a = -1 exclusion band");
    const real a = p.a, b = p.b;
    const real pi = std::numbers::pi_v<real>;
    real A1 = (b - 2.0) * a - p.eps1 * p.eps1;
    real A2 = 4.0 * b * (a + 2.0) - p.eps2 * p.eps2;
    if (A1 <= 0.0 || A2 <= 0.0)
        throw std::domain_error("closed_forms: square-root argument nonpositive");

    ClosedForms c;
    c.lambda = p.lambda();
    c.lambda_prime = p.lambda_prime();
    c.eta1 = p.eta1();
    c.eta2 = p.eta2();
    c.d0 = (2.0 * pi / a) * (p.eps1 / std::sqrt(A1) + p.eps2 / std::sqrt(A2));
    c.G2 = -2.0 * pi * p.eps1 / (a * std::sqrt(A1));
    c.G1 = 2.0 * pi * p.eps2 / ((a + 2.0) * std::sqrt(A2));
    c.delta0_dir_x = 2.0 * std::sqrt(b * (a + 2.0) / (a * (b - 2.0)));

    const real spi = std::sqrt(pi);
    c.m_branch = a < -1.0;
    if (c.m_branch) {
        c.m0p = (b - 1.0) * std::pow(c.eta2, -1.0 - 1.0 / a) / (a * (a + 1.0));
        c.m2p = -(spi / (2.0 * a * a)) * gamma_fn((a + 2.0) / (2.0 * a)) /
                gamma_fn((2.0 * a + 1.0) / a) * std::pow(c.eta2, -(a + 2.0) / (2.0 * a));
        c.m1p = -(spi * (b - 1.0) / (2.0 * a * a * (a + 1.0))) *
                (gamma_fn((3.0 * a + 2.0) / (2.0 * a)) / gamma_fn((2.0 * a + 1.0) / a) + spi / a) *
                std::pow(c.eta2, -(3.0 * a + 2.0) / (2.0 * a));
        c.m0m = -c.m0p;
        c.m1m = c.m1p;
        c.m2m = c.m2p;
        c.branch_ratio = 2.0 * (a + 2.0) * (b - 1.0) / ((a + 1.0) * (b - 2.0));
    } else {
        c.n0p = (1.0 - b) / ((a + 1.0) * (a + 2.0)) * std::pow(c.eta1, -(a + 1.0) / (a + 2.0));
        c.n1p = (spi / (2.0 * (a + 2.0) * (a + 2.0))) * gamma_fn(a / (2.0 * (a + 2.0))) /
                gamma_fn((2.0 * a + 3.0) / (a + 2.0)) * std::pow(c.eta1, -a / (2.0 * (a + 2.0)));
        c.branch_ratio = a * (b - 1.0) / (2.0 * (a + 1.0) * b);
        c.n2p = c.branch_ratio * c.n1p +
                pi * c.n0p / (2.0 * std::sqrt(b * (a + 2.0) * (a + 2.0) * (a + 2.0)));
    }
    return c;
}

namespace {

// int_0^inf f, split at 1 with the tail mapped by u = 1/w. beta0 is the power
// of f at the origin, tail_beta the power of the mapped integrand at w = 0
// (f ~ u^-s at infinity gives tail_beta = s - 2); negative values are routed
// through the power-absorbing rule.
real quad_half_line(const Integrand& f, real beta0, real tail_beta, const QuadOptions& opt) {
    QuadResult head =
        beta0 < 0.0 ? quad_pow0(f, 1.0, beta0, opt) : quad_finite(f, 0.0, 1.0, opt);
    auto g = [&f](real w) { return f(1.0 / w) / (w * w); };
    QuadResult tail =
        tail_beta < 0.0 ? quad_pow0(g, 1.0, tail_beta, opt) : quad_finite(g, 0.0, 1.0, opt);
    QuadResult total = head + tail;
    if (!total.converged || !std::isfinite(total.value))
        throw std::runtime_error("closed_forms_quadrature: integral did not converge");
    return total.value;
}

}  // namespace

ClosedForms closed_forms_quadrature(const QuadParams& p, QuadOptions opt) {
    ClosedForms c = closed_forms(p);  // reuse the trivial fields and branch flag
    QuadParams bar = p;
    bar.eps0 = 0.0;
    DSystem d = make_quadratic(bar);
    c.d0 = compute_d0(d, opt).value;
    GSet g = compute_G(d, opt);
    c.G1 = g.G1.value;
    c.G2 = g.G2.value;

    const real a = p.a, b = p.b;
    if (c.m_branch) {
        const real e2 = p.eta2(), se2 = std::sqrt(e2);
        c.m0p = (2.0 * (b - 1.0) / (a * a)) *
                quad_half_line(
                    [=](real u) {
                        return std::pow(1.0 + e2 * u * u, -2.0 - 1.0 / a) * std::pow(u, 2.0 / a + 1.0);
                    },
                    2.0 / a + 1.0, 1.0, opt);
        c.m2p = -(2.0 / (a * a)) *
                quad_half_line(
                    [=](real u) {
                        return (std::pow(1.0 + e2 * u * u, -2.0 - 1.0 / a) - 1.0) *
                               std::pow(u, 2.0 / a);
                    },
                    0.0, -2.0 / a - 2.0, opt);
        real t1 = quad_half_line(
            [=](real u) {
                return std::pow(1.0 + e2 * u * u, -2.0 - 1.0 / a) * std::atan(se2 * u) *
                       std::pow(u, 1.0 + 2.0 / a);
            },
            0.0, 1.0, opt);
        real t2 = quad_half_line(
            [=](real u) {
                return std::pow(1.0 + e2 * u * u, -3.0 - 1.0 / a) * std::pow(u, 2.0 + 2.0 / a);
            },
            0.0, 2.0, opt);
        c.m1p = -(2.0 * (b - 1.0) / (a * a * a * a)) * (t1 / se2 + (1.0 + 2.0 * a) * t2);
        c.m0m = -c.m0p;
        c.m1m = c.m1p;
        c.m2m = c.m2p;
    } else {
        const real e1 = p.eta1(), se1 = std::sqrt(e1);
        const real pw = -(2.0 * a + 3.0) / (a + 2.0);
        const real invlam = 1.0 / p.lambda();
        c.n0p = (2.0 * (1.0 - b) / ((a + 2.0) * (a + 2.0))) *
                quad_half_line(
                    [=](real u) {
                        return std::pow(1.0 + e1 * u * u, pw) * std::pow(u, -invlam);
                    },
                    -invlam, 1.0, opt);
        c.n1p = (2.0 / ((a + 2.0) * (a + 2.0))) *
                quad_half_line(
                    [=](real u) {
                        return (std::pow(1.0 + e1 * u * u, pw) - 1.0) *
                               std::pow(u, -1.0 - invlam);
                    },
                    0.0, invlam - 1.0, opt);
        c.n2p = (2.0 * (1.0 - b) / (std::pow(a + 2.0, 3) * std::sqrt(b * (a + 2.0)))) *
                quad_half_line(
                    [=](real u) {
                        real w = 1.0 + e1 * u * u;
                        return std::pow(w, pw) * std::pow(u, -invlam) *
                               (std::atan(se1 * u) - (2.0 * a + 3.0) * se1 * u / w);
                    },
                    -invlam, 1.0, opt);
    }
    return c;
}

real lemma_delta_constant(const QuadParams& p, QuadOptions opt) {
    require_admissible(p, "lemma_delta_constant");
    if (std::fabs(p.a + 1.0) < kABand)
        throw std::domain_error("lemma_delta_constant: inside the a = -1 exclusion band");
    if (std::fabs(p.eps0) > 1e-12 || std::fabs(p.eps1) > 1e-12 || std::fabs(p.eps2) > 1e-12)
        throw std::domain_error("lemma_delta_constant: needs eps = 0");
    const real a = p.a;
    const real n = p.eta2();
    auto h = [a, n](real u) {
        if (u <= 0.0) return 0.0;
        return std::pow(1.0 + n * u * u, (1.0 - a) / a) * std::pow(u, -2.0 / a);
    };
    QuadResult r = quad_a_inf(h, 0.0, opt);
    if (!r.converged || !std::isfinite(r.value))
        throw std::runtime_error("lemma_delta_constant: quadrature failed");
    real pint = -r.value;
    return 2.0 * pint * std::pow(n, -1.0 / a) / a;
}

std::string closed_forms_to_json(const ClosedForms& c) {
    nlohmann::ordered_json j;
    j["lambda"] = c.lambda;
    j["lambda_prime"] = c.lambda_prime;
    j["eta1"] = c.eta1;
    j["eta2"] = c.eta2;
    j["d0"] = c.d0;
    j["G1"] = c.G1;
    j["G2"] = c.G2;
    if (c.m_branch) {
        j["m0plus"] = c.m0p;
        j["m1plus"] = c.m1p;
        j["m2plus"] = c.m2p;
        j["m0minus"] = c.m0m;
        j["m1minus"] = c.m1m;
        j["m2minus"] = c.m2m;
    } else {
        j["n0plus"] = c.n0p;
        j["n1plus"] = c.n1p;
        j["n2plus"] = c.n2p;
    }
    j["delta0_dir"] = {c.delta0_dir_x, 1.0};
    j["branch_ratio"] = c.branch_ratio;
    return j.dump(2);
}

}  // namespace hemi
