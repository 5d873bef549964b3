#pragma once

#include <map>
#include <string>

#include "hemi/poly.hpp"

namespace hemi {

// Planar system x' = y f(x,y) + g(x), y' = y q(x,y) with deg f = deg q = n
// (odd) and deg g = n + 1. The y-axis-crossing maps and saddle quantities
// assume the leading coefficient of g is nonzero.
class DSystem {
public:
    DSystem(int n, Poly2 f, Poly1 g, Poly2 q,
            std::map<std::string, real> params = {}, int degree_cap = kDefaultDegreeCap);

    int n() const { return n_; }
    const Poly2& f() const { return f_; }
    const Poly1& g() const { return g_; }
    const Poly2& q() const { return q_; }
    const std::map<std::string, real>& params() const { return params_; }

    real g_top() const { return g_.coeff(n_ + 1); }

    // Image under (x, y) -> (-x, y): f(-x,y), g(-x), -q(-x,y).
    DSystem reflected() const;

private:
    int n_;
    Poly2 f_;
    Poly1 g_;
    Poly2 q_;
    std::map<std::string, real> params_;
};

// Leading homogeneous data: f_n, q_n, g_{n+1} and
// ell(x, y) = y f_n - x q_n + g_{n+1} x^{n+1}.
struct HomogeneousData {
    Poly2 fn, qn;
    real g_top;
    Poly2 ell;
    Poly1 ell_1z;  // ell(1, z)
    Poly1 ell_z1;  // ell(z, 1)
    Poly1 qn_1z;   // q_n(1, z)
    Poly1 qn_z1;   // q_n(z, 1)
};

HomogeneousData homogeneous_data(const DSystem& d);

struct H1Result {
    bool holds = false;
    real witness_x = 0.0;  // point with g(x) >= 0 when holds == false
};

struct H2Result {
    bool holds = false;
    real witness_x = 0.0, witness_y = 0.0;  // ell(x,y) <= 0 there when false
};

// H1: g(x) < 0 for all real x.
H1Result check_H1(const DSystem& d);

// H2: ell(x, y) > 0 for all (x, y) != 0; checked on both slices
// z -> ell(1, z) and z -> ell(z, 1).
H2Result check_H2(const DSystem& d);

// Strict JSON form: {n, f: [[...]], g: [...], q: [[...]], params: {...}}
// with f[i][j] the coefficient of x^i y^j.
std::string dsystem_to_json(const DSystem& d);
DSystem dsystem_from_json(const std::string& text);

}  // namespace hemi
