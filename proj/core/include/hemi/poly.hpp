#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hemi {

using real = double;

// Default degree cap for system polynomials; guards against malformed input,
// not a storage limit.
inline constexpr int kDefaultDegreeCap = 8;

// Dense univariate polynomial, coeffs[k] multiplies x^k.
class Poly1 {
public:
    Poly1() = default;
    explicit Poly1(std::vector<real> coeffs) : c_(std::move(coeffs)) {}
    static Poly1 constant(real v) { return Poly1({v}); }
    static Poly1 monomial(int k, real v = 1.0);

    const std::vector<real>& coeffs() const { return c_; }
    std::vector<real>& coeffs() { return c_; }
    real coeff(int k) const { return k >= 0 && k < (int)c_.size() ? c_[k] : 0.0; }
    void set_coeff(int k, real v);

    // Degree of the trimmed polynomial; -1 for the zero polynomial.
    int degree() const;
    real leading() const;
    bool is_zero() const { return degree() < 0; }
    real max_abs_coeff() const;

    real eval(real x) const;
    Poly1 derivative() const;
    Poly1 reflected() const;          // p(-x)
    Poly1 reversed(int m) const;      // z^m p(1/z); requires degree() <= m
    Poly1 shifted_down(int k) const;  // p / x^k; low-order coeffs must vanish
    void zero_coeff_checked(int k, real rel_tol = 1e-8, real scale_floor = 0.0);

    // Cauchy bound: all real roots lie in [-B, B].
    real root_bound() const;

    Poly1 operator+(const Poly1& o) const;
    Poly1 operator-(const Poly1& o) const;
    Poly1 operator*(const Poly1& o) const;
    Poly1 operator*(real s) const;
    Poly1 trimmed(real rel_eps = 1e-13) const;

private:
    std::vector<real> c_;
};

// Quotient and remainder of a/b over doubles.
void poly_divmod(const Poly1& a, const Poly1& b, Poly1& q, Poly1& r);

// Sturm chain of p (canonical: p, p', then negated remainders).
std::vector<Poly1> sturm_chain(const Poly1& p);

// Number of distinct real roots in (a, b]; pass infinities via the _all form.
int sturm_count(const std::vector<Poly1>& chain, real a, real b);
int sturm_count_all(const std::vector<Poly1>& chain);

// Distinct real roots, isolated then bisected to width <= tol.
std::vector<real> real_roots(const Poly1& p, real tol = 1e-12);

// Dense bivariate polynomial, coeff(i, j) multiplies x^i y^j.
class Poly2 {
public:
    Poly2() : nx_(1), ny_(1), c_(1, 0.0) {}
    Poly2(int dx, int dy) : nx_(dx + 1), ny_(dy + 1), c_(nx_ * ny_, 0.0) {}
    static Poly2 constant(real v);
    static Poly2 from_poly1_x(const Poly1& p);  // p(x) as a bivariate poly
    static Poly2 from_poly1_y(const Poly1& p);

    real coeff(int i, int j) const;
    void set_coeff(int i, int j, real v);
    void add_coeff(int i, int j, real v);
    int xdeg() const { return nx_ - 1; }
    int ydeg() const { return ny_ - 1; }
    int total_degree() const;  // -1 for zero
    real max_abs_coeff() const;
    bool is_zero() const { return total_degree() < 0; }

    real eval(real x, real y) const;
    Poly2 dx() const;
    Poly2 dy() const;
    Poly2 reflected_x() const;        // p(-x, y)
    Poly2 homogeneous_part(int k) const;
    Poly1 slice_y0() const;           // p(x, 0)
    Poly1 slice_x0() const;           // p(0, y)
    Poly1 slice_x1() const;           // p(1, y)
    Poly1 slice_y1() const;           // p(x, 1)

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator-(const Poly2& o) const;
    Poly2 operator*(const Poly2& o) const;
    Poly2 operator*(real s) const;

private:
    int nx_, ny_;
    std::vector<real> c_;
};

// Ratio of univariate polynomials.
struct RationalFn1 {
    Poly1 num, den;
    real eval(real x) const { return num.eval(x) / den.eval(x); }
};

// Ratio of bivariate polynomials.
struct RationalFn2 {
    Poly2 num, den;
    real eval(real x, real y) const { return num.eval(x, y) / den.eval(x, y); }
    RationalFn2 dx() const { return {num.dx() * den - num * den.dx(), den * den}; }
    RationalFn2 dy() const { return {num.dy() * den - num * den.dy(), den * den}; }
};

struct PositivityWitness {
    bool holds = false;
    real where = 0.0;   // a point violating the claim when holds == false
    real value = 0.0;   // polynomial value there
};

// Checks p(x) > 0 for all real x (strict); witness reports a violation point.
PositivityWitness poly_positive_everywhere(const Poly1& p);

}  // namespace hemi
