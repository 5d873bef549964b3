#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "hemi/quad.hpp"
#include "hemi/quadratic.hpp"
#include "test_util.hpp"

using namespace hemi;
using testutil::rel_err;

namespace {

// FD gradient of a first integral dotted with the field, normalized
real conservation_defect(const QuadParams& mu, FirstIntegral which, Vec2 p) {
    const real h = 1e-6;
    auto H = [&](real x, real y) { return first_integral(mu, x, y, which); };
    real gx = (H(p.x + h, p.y) - H(p.x - h, p.y)) / (2 * h);
    real gy = (H(p.x, p.y + h) - H(p.x, p.y - h)) / (2 * h);
    Vec2 X = quadratic_field(mu, p);
    real dot = gx * X.x + gy * X.y;
    real scale = std::fabs(gx * X.x) + std::fabs(gy * X.y) + 1e-12;
    return std::fabs(dot) / scale;
}

}  // namespace

TEST_CASE("field vanishes at the two centers") {
    for (QuadParams mu : {QuadParams{-0.5, 0.5, 0, 0, 0}, QuadParams{-1.2, 0.8, 0, 0, 0}}) {
        Vec2 up = quadratic_field(mu, {0.0, 0.5});
        CHECK(std::fabs(up.x) < 1e-15);
        CHECK(std::fabs(up.y) < 1e-15);
        Vec2 low = quadratic_field(mu, {0.0, (mu.b - 2.0) / (2.0 * mu.b)});
        CHECK(std::fabs(low.x) < 1e-14);
        CHECK(std::fabs(low.y) < 1e-14);
    }
}

TEST_CASE("y axis line y = 0 is invariant exactly when eps0 = 0") {
    QuadParams mu{-0.5, 0.5, 0, 0.01, -0.02};
    for (real x : {-1.0, 0.3, 2.0}) CHECK(quadratic_field(mu, {x, 0.0}).y == 0.0);
    mu.eps0 = 1e-3;
    CHECK(quadratic_field(mu, {0.3, 0.0}).y == doctest::Approx(1e-3));
}

TEST_CASE("family D-system satisfies both hypotheses at eps = 0") {
    for (QuadParams mu : {QuadParams{-0.5, 0.5, 0, 0, 0}, QuadParams{-1.5, 1.0, 0, 0, 0},
                          QuadParams{-1.9, 0.1, 0, 0, 0}}) {
        DSystem d = make_quadratic(mu);
        CHECK(check_H1(d).holds);
        CHECK(check_H2(d).holds);
        CHECK(rel_err(projectivize(d).lambda, mu.lambda()) < 1e-12);
    }
    CHECK_THROWS_AS(make_quadratic({-2.0, 0.5, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make_quadratic({-0.5, 2.0, 0, 0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(make_quadratic({-0.5, 0.5, 0.01, 0, 0}), std::invalid_argument);
}

TEST_CASE("exponent helpers") {
    QuadParams g{-0.5, 0.5, 0, 0, 0};
    CHECK(g.lambda() == doctest::Approx(3.0));
    CHECK(g.lambda_prime() == doctest::Approx(4.0));
    QuadParams l{-1.5, 1.0, 0, 0, 0};
    CHECK(l.lambda() == doctest::Approx(1.0 / 3.0));
    CHECK(l.lambda_prime() == doctest::Approx(2.0 / 3.0));
    CHECK(l.eta_b() == doctest::Approx(1.0));
    CHECK(g.eta1() == doctest::Approx(1.0 / 3.0));
    CHECK(g.eta2() == doctest::Approx(0.75));
}

TEST_CASE("parameter change phi: base point, round trip, image") {
    NuParams nu0 = phi_params({-0.5, 0.5, 0, 0, 0});
    CHECK(std::fabs(nu0.nu1) < 1e-15);
    CHECK(std::fabs(nu0.nu2) < 1e-15);
    CHECK(std::fabs(nu0.nu3) < 1e-15);
    CHECK(nu0.nu4 == doctest::Approx(1.0));  // c+ = a + 2 - b
    CHECK(std::fabs(nu0.nu5) < 1e-15);       // c- = a + b

    NuParams nug = phi_params({-1.2, 0.8, 0, 0, 0});
    CHECK(nug.nu4 == doctest::Approx(-1.2 + 2.0 - 0.8));
    CHECK(nug.nu5 == doctest::Approx(-1.2 + 0.8));

    for (QuadParams mu : {QuadParams{-0.5, 0.5, 0.003, 0.01, -0.02},
                          QuadParams{-1.5, 1.0, -0.002, 0.005, 0.004},
                          QuadParams{-0.8, 1.7, 0.0, -0.01, 0.02},
                          QuadParams{-1.9, 0.1, 0.001, 0.002, -0.003}}) {
        QuadParams back = phi_inverse(phi_params(mu));
        CHECK(std::fabs(back.a - mu.a) < 1e-12);
        CHECK(std::fabs(back.b - mu.b) < 1e-12);
        CHECK(std::fabs(back.eps0 - mu.eps0) < 1e-12);
        CHECK(std::fabs(back.eps1 - mu.eps1) < 1e-12);
        CHECK(std::fabs(back.eps2 - mu.eps2) < 1e-12);
    }

    // the center variety lands in {nu1 = nu2 = nu3 nu5 = 0}
    for (QuadParams mu : {QuadParams{-0.7, 0.9, 0, 0, 0},
                          QuadParams{-0.6, 0.6, 0, 0.007, -0.014},
                          QuadParams{-1.3, 1.3, 0, -0.004, 0.008}}) {
        NuParams nu = phi_params(mu);
        CHECK(std::fabs(nu.nu1) < 1e-15);
        CHECK(std::fabs(nu.nu2) < 1e-14);
        CHECK(std::fabs(nu.nu3 * nu.nu5) < 1e-14);
    }
}

TEST_CASE("involution: b = 1 fixed slice, self-inverse, field conjugation") {
    QuadParams mu{-1.5, 1.0, 0.01, 0.02, -0.03};
    QuadParams s = involution(mu);
    CHECK(s.a == mu.a);
    CHECK(s.b == doctest::Approx(1.0));
    CHECK(s.eps0 == doctest::Approx(-0.01));
    CHECK(s.eps1 == doctest::Approx(0.02));
    CHECK(s.eps2 == doctest::Approx(0.03));

    for (QuadParams m : {QuadParams{-0.7, 0.6, 0.01, -0.02, 0.03},
                         QuadParams{-1.4, 1.7, -0.005, 0.004, 0.002}}) {
        QuadParams ss = involution(involution(m));
        CHECK(std::fabs(ss.a - m.a) < 1e-14);
        CHECK(std::fabs(ss.b - m.b) < 1e-14);
        CHECK(std::fabs(ss.eps0 - m.eps0) < 1e-14);
        CHECK(std::fabs(ss.eps1 - m.eps1) < 1e-14);
        CHECK(std::fabs(ss.eps2 - m.eps2) < 1e-14);
    }
    CHECK_THROWS_AS(involution({-0.5, 2.0, 0, 0, 0}), std::domain_error);

    // D phi X_mu(p) = eta_b^-1 X_{sigma mu}(phi(p)) with phi = (eta x, -eta^2 y)
    QuadParams m{-0.7, 0.6, 0.01, -0.02, 0.03};
    QuadParams sm = involution(m);
    real eta = m.eta_b();
    for (int i = 0; i < 20; ++i) {
        Vec2 p{testutil::uniform(-2.0, 2.0), testutil::uniform(-2.0, 2.0)};
        Vec2 X = quadratic_field(m, p);
        Vec2 q = involution_point(m, p);
        CHECK(std::fabs(q.x - eta * p.x) < 1e-14);
        CHECK(std::fabs(q.y + eta * eta * p.y) < 1e-14);
        Vec2 Y = quadratic_field(sm, q);
        CHECK(std::fabs(eta * X.x - Y.x / eta) < 1e-10);
        CHECK(std::fabs(-eta * eta * X.y - Y.y / eta) < 1e-10);
    }
}

TEST_CASE("center variety membership") {
    CHECK(center_variety({-0.5, 0.5, 0, 0.01, -0.02}).membership == CenterClass::Z1);
    CHECK(center_variety({-0.5, 0.5, 0, 0, 0}).membership == CenterClass::both);
    CHECK(center_variety({-0.5, 0.5, 0, 0.01, 0}).membership == CenterClass::none);
    CHECK(center_variety({-0.7, 0.5, 0, 0, 0}).membership == CenterClass::Z0);
    CenterVerdict v = center_variety({-0.5, 0.5, 0.003, 0.01, -0.02});
    CHECK(v.membership == CenterClass::none);
    CHECK(v.z0_residual[0] == doctest::Approx(0.003));
    CHECK(v.z1_residual[0] == doctest::Approx(0.0));
    CHECK(v.z1_residual[1] == doctest::Approx(0.003));
    CHECK(v.z1_residual[2] == doctest::Approx(0.0));
}

TEST_CASE("first integrals: explicit coefficients and conservation") {
    QuadParams mu0{-0.5, 0.5, 0, 0, 0};
    // l = 1/3, m = 1, n = 3/4 at the base point
    for (Vec2 p : {Vec2{0.4, 0.7}, Vec2{-0.6, -0.9}}) {
        real want = std::pow(std::fabs(p.y), -0.5) *
                    (p.x * p.x + p.y * p.y / 3.0 + p.y + 0.75);
        CHECK(rel_err(first_integral(mu0, p.x, p.y, FirstIntegral::H0), want) < 1e-12);
    }
    for (Vec2 p : {Vec2{0.3, 0.8}, Vec2{-0.7, 1.2}, Vec2{0.5, -0.4}, Vec2{-0.2, -2.0}})
        CHECK(conservation_defect(mu0, FirstIntegral::H0, p) < 1e-5);

    QuadParams mu1{-0.5, 0.5, 0, 0.01, -0.02};
    REQUIRE(center_variety(mu1).membership == CenterClass::Z1);
    for (Vec2 p : {Vec2{0.4, 0.6}, Vec2{-0.5, 1.0}, Vec2{0.6, -0.5}, Vec2{-0.3, -0.8}})
        CHECK(conservation_defect(mu1, FirstIntegral::H1, p) < 1e-5);

    CHECK_THROWS_AS(first_integral(mu0, 0.5, 0.0, FirstIntegral::H0), std::domain_error);
    CHECK_THROWS_AS(first_integral(mu1, 0.5, 0.5, FirstIntegral::H0), std::domain_error);
    CHECK_THROWS_AS(first_integral({-0.5, 0.5, 0, 0.01, 0}, 0.5, 0.5, FirstIntegral::H1),
                    std::domain_error);
    CHECK_THROWS_AS(first_integral({-1.0005, 0.5, 0, 0, 0}, 0.5, 0.5, FirstIntegral::H0),
                    std::domain_error);
}

TEST_CASE("closed forms: saddle quantities and branch structure") {
    ClosedForms c = closed_forms({-1.5, 0.5, 0, 0.02, -0.05});
    real A1 = -1.5 * -1.5 - 0.02 * 0.02;
    real A2 = 4.0 * 0.5 * 0.5 - 0.05 * 0.05;
    real d0 = (2.0 * M_PI / -1.5) * (0.02 / std::sqrt(A1) - 0.05 / std::sqrt(A2));
    CHECK(rel_err(c.d0, d0) < 1e-14);
    CHECK(rel_err(c.G1, 2.0 * M_PI * -0.05 / (0.5 * std::sqrt(A2))) < 1e-14);
    CHECK(rel_err(c.G2, -2.0 * M_PI * 0.02 / (-1.5 * std::sqrt(A1))) < 1e-14);
    CHECK(c.m_branch);
    CHECK(rel_err(c.branch_ratio,
                  2.0 * (-1.5 + 2.0) * (0.5 - 1.0) / ((-1.5 + 1.0) * (0.5 - 2.0))) < 1e-14);
    CHECK(c.m0m == -c.m0p);
    CHECK(c.m1m == c.m1p);
    CHECK(c.m2m == c.m2p);

    ClosedForms cn = closed_forms({-0.5, 0.5, 0, 0, 0});
    CHECK_FALSE(cn.m_branch);
    CHECK(rel_err(cn.branch_ratio, -0.5 * (0.5 - 1.0) / (2.0 * 0.5 * 0.5)) < 1e-14);
    CHECK(cn.d0 == 0.0);

    // delta0 direction: 2 sqrt(b(a+2)/(a(b-2)))
    CHECK(rel_err(cn.delta0_dir_x, 2.0 * std::sqrt(0.5 * 1.5 / (0.5 * 1.5))) < 1e-14);

    // b = 1 kills the (b-1) prefactors
    ClosedForms cb = closed_forms({-1.5, 1.0, 0, 0, 0});
    CHECK(cb.m0p == 0.0);
    CHECK(cb.m1p == 0.0);
    CHECK(closed_forms({-0.5, 1.0, 0, 0, 0}).n0p == 0.0);

    CHECK_THROWS_AS(closed_forms({-1.0004, 0.5, 0, 0, 0}), std::domain_error);
}

TEST_CASE("m2+ and n0+ against their defining integrals") {
    // a = -3/2, b = 1: m2+ = -(2/a^2) int_0^inf ((1+eta2 u^2)^(-2-1/a) - 1) u^(2/a) du
    {
        const real a = -1.5, eta2 = (1.0 - 2.0) / (4.0 * a);
        auto f = [&](real u) {
            return (std::pow(1.0 + eta2 * u * u, -2.0 - 1.0 / a) - 1.0) * std::pow(u, 2.0 / a);
        };
        QuadOptions opt;
        QuadResult head = quad_finite(f, 0.0, 1.0, opt);
        auto tail_f = [&](real w) { return f(1.0 / w) / (w * w); };
        QuadResult tail = quad_pow0(tail_f, 1.0, -2.0 / a - 2.0, opt);
        REQUIRE(head.converged);
        REQUIRE(tail.converged);
        real m2p = -(2.0 / (a * a)) * (head.value + tail.value);
        CHECK(rel_err(closed_forms({a, 1.0, 0, 0, 0}).m2p, m2p) < 1e-6);
    }
    // a = -1/2, b = 1/2: n0+ = 2(1-b)/(a+2)^2 int_0^inf (1+eta1 u^2)^pw u^(-1/3) du
    {
        const real a = -0.5, b = 0.5;
        const real eta1 = b / (a + 2.0), pw = -(2.0 * a + 3.0) / (a + 2.0);
        auto f = [&](real u) { return std::pow(1.0 + eta1 * u * u, pw) * std::pow(u, -1.0 / 3.0); };
        QuadOptions opt;
        QuadResult head = quad_pow0(f, 1.0, -1.0 / 3.0, opt);
        auto tail_f = [&](real w) { return f(1.0 / w) / (w * w); };
        QuadResult tail = quad_finite(tail_f, 0.0, 1.0, opt);
        REQUIRE(head.converged);
        REQUIRE(tail.converged);
        real n0p = 2.0 * (1.0 - b) / ((a + 2.0) * (a + 2.0)) * (head.value + tail.value);
        CHECK(rel_err(closed_forms({a, b, 0, 0, 0}).n0p, n0p) < 1e-6);
    }
}

TEST_CASE("gamma route agrees with the quadrature route") {
    {
        QuadParams mu{-1.5, 0.6, 0, 0.01, -0.02};
        ClosedForms g = closed_forms(mu);
        ClosedForms q = closed_forms_quadrature(mu);
        CHECK(rel_err(q.d0, g.d0) < 1e-6);
        CHECK(rel_err(q.G1, g.G1) < 1e-6);
        CHECK(rel_err(q.G2, g.G2) < 1e-6);
        CHECK(rel_err(q.m0p, g.m0p) < 1e-6);
        CHECK(rel_err(q.m1p, g.m1p) < 1e-6);
        CHECK(rel_err(q.m2p, g.m2p) < 1e-6);
    }
    {
        // note: eps with eps2 = -2 eps1 would sit on the d0 kernel line
        QuadParams mu{-0.5, 0.5, 0, 0.013, 0.02};
        ClosedForms g = closed_forms(mu);
        ClosedForms q = closed_forms_quadrature(mu);
        CHECK(rel_err(q.d0, g.d0) < 1e-6);
        CHECK(rel_err(q.n0p, g.n0p) < 1e-6);
        CHECK(rel_err(q.n1p, g.n1p) < 1e-6);
        CHECK(rel_err(q.n2p, g.n2p) < 1e-6);
    }
}

TEST_CASE("asymptote-gap derivative constant") {
    for (QuadParams mu : {QuadParams{-0.5, 0.5, 0, 0, 0}, QuadParams{-1.5, 1.0, 0, 0, 0}}) {
        real v = lemma_delta_constant(mu);
        CHECK(v > 0.0);
        // recompute from the definition
        const real a = mu.a, n = mu.eta2();
        auto h = [&](real u) {
            return std::pow(1.0 + n * u * u, (1.0 - a) / a) * std::pow(u, -2.0 / a);
        };
        QuadResult r = quad_a_inf(h, 0.0, {});
        REQUIRE(r.converged);
        real want = 2.0 * -r.value * std::pow(n, -1.0 / a) / a;
        CHECK(rel_err(v, want) < 1e-6);
        CHECK(want > 0.0);
    }
    CHECK_THROWS_AS(lemma_delta_constant({-0.5, 0.5, 0, 0.01, 0}), std::domain_error);
    CHECK_THROWS_AS(lemma_delta_constant({-1.0002, 0.5, 0, 0, 0}), std::domain_error);
}

TEST_CASE("closed forms serialization") {
    auto j = nlohmann::json::parse(closed_forms_to_json(closed_forms({-1.5, 0.5, 0, 0.01, 0})));
    CHECK(j["lambda"].get<real>() == doctest::Approx(1.0 / 3.0));
    CHECK(j.contains("d0"));
    CHECK(j.contains("G1"));
    CHECK(j.contains("m0plus"));
    CHECK(j.contains("branch_ratio"));
}
