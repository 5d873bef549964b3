#pragma once

#include <array>
#include <cmath>
#include <string>

#include "hemi/charts.hpp"
#include "hemi/dsystem.hpp"
#include "hemi/quad.hpp"

namespace hemi {

// Parameters mu = (a, b, eps0, eps1, eps2) of the two-center quadratic family
//   x' = (b-2)/4 + eps1 x + (1-b) y + a x^2 + eps2 xy + b y^2
//   y' = eps0 - 2xy
struct QuadParams {
    real a = -0.5;
    real b = 0.5;
    real eps0 = 0;
    real eps1 = 0;
    real eps2 = 0;

    real lambda() const { return -(a + 2.0) / a; }
    real lambda_prime() const { return lambda() + std::min(lambda(), 1.0); }
    real eta_b() const { return std::sqrt(b / (2.0 - b)); }
    real eta1() const { return b / (a + 2.0); }
    real eta2() const { return (b - 2.0) / (4.0 * a); }
    bool admissible() const { return a > -2.0 && a < 0.0 && b > 0.0 && b < 2.0; }
};

// Image coordinates nu = (eps0, eps+, eps-, c+, c-) of the parameter change.
struct NuParams {
    real nu1 = 0, nu2 = 0, nu3 = 0, nu4 = 0, nu5 = 0;
};

enum class CenterClass { Z0, Z1, both, none };

// Residual-based membership in the center variety Z0 u Z1 with
// Z0 = {eps0 = eps1 = eps2 = 0} and Z1 = {a+b = eps0 = 2 eps1 + eps2 = 0}.
struct CenterVerdict {
    CenterClass membership = CenterClass::none;
    std::array<real, 3> z0_residual{};  // |eps0|, |eps1|, |eps2|
    std::array<real, 3> z1_residual{};  // |a+b|, |eps0|, |2 eps1 + eps2|
};

// D-system form (needs eps0 = 0): f = (1-b)+eps2 x+b y, g = (b-2)/4+eps1 x+a x^2,
// q = -2x, n = 1. The parameter map of the result carries a, b, eps1, eps2.
DSystem make_quadratic(const QuadParams& p);

// Raw vector field, valid for any eps0.
Vec2 quadratic_field(const QuadParams& p, Vec2 xy);

// Poincare compactification of the raw field (degree bound 2), any eps0.
ChartAtlas quadratic_atlas(const QuadParams& p);

// nu = (eps0, eps+, eps-, c+, c-) with eps+- = -eps2 -+ 2 sqrt(b(a+2)/(a(b-2))) eps1
// and c+- = (a+1) +- (1-b).
NuParams phi_params(const QuadParams& p);
QuadParams phi_inverse(const NuParams& nu);

// sigma(a, b, eps0, eps1, eps2) = (a, 2-b, -eta_b^3 eps0, eta_b eps1, -eps2/eta_b).
QuadParams involution(const QuadParams& p);
// The conjugating plane map phi(x, y) = (eta_b x, -eta_b^2 y).
Vec2 involution_point(const QuadParams& p, Vec2 xy);

CenterVerdict center_variety(const QuadParams& p, real tol = 1e-9);

enum class FirstIntegral { H0, H1 };

// H0 (mu in Z0, a != -1): |y|^a (x^2 + l y^2 + m y + n) with l = b/(a+2),
// m = -(b-1)/(a+1), n = (b-2)/(4a).
// H1 (mu in Z1, 4b(2-b) > eps2^2): |y|^a (r1^2 + a1^2 x^2) exp((2 eps2/a1)
// atan2(a1 x, r1)), r1 = 2by + (2-b) + eps2 x, a1 = sqrt(4b(2-b) - eps2^2).
// The angle is the principal branch; its cut is the downward ray from the
// lower center, so it is single-valued off that ray.
real first_integral(const QuadParams& p, real x, real y, FirstIntegral variant);

// Closed forms of the saddle quantities and the one-sided expansion
// coefficients. The m block applies for a in (-2,-1) (lambda < 1), the n
// block for a in (-1,0) (lambda > 1); both exclude |a+1| < 1e-3.
struct ClosedForms {
    real lambda = 0, lambda_prime = 0, eta1 = 0, eta2 = 0;
    real d0 = 0, G1 = 0, G2 = 0;
    bool m_branch = false;
    real m0p = 0, m1p = 0, m2p = 0;
    real m0m = 0, m1m = 0, m2m = 0;  // parity: m0- = -m0+, m1- = m1+, m2- = m2+
    real n0p = 0, n1p = 0, n2p = 0;  // n2+ reconstructed from the ratio identity
    real delta0_dir_x = 0;  // Delta0 gradient direction (delta0_dir_x, 1) in (eps1, eps2)
    real branch_ratio = 0;  // a(b-1)/(2(a+1)b) if a > -1, else 2(a+2)(b-1)/((a+1)(b-2))
};

ClosedForms closed_forms(const QuadParams& p);

// The same constants computed from their defining integrals by adaptive
// quadrature: d0, G1, G2 through the saddle-coefficient engine and the m/n
// block through the explicit u-integrals, with no Gamma function anywhere.
// Slower; exists so the two routes can be compared.
ClosedForms closed_forms_quadrature(const QuadParams& p, QuadOptions opt = {});

// d/d eps0 of the asymptote gap at eps = 0: 2 p n^(-1/a)/a with n = (b-2)/(4a)
// and p = -int_0^inf (1 + n u^2)^((1-a)/a) u^(-2/a) du; strictly positive.
real lemma_delta_constant(const QuadParams& p, QuadOptions opt = {});

std::string closed_forms_to_json(const ClosedForms& c);

}  // namespace hemi
