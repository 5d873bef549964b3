#pragma once

#include <functional>

#include "hemi/poly.hpp"

namespace hemi {

struct QuadOptions {
    real abs_tol = 1e-10;
    real rel_tol = 1e-10;
    int max_evals = 200000;
};

struct QuadResult {
    real value = 0.0;
    real error = 0.0;
    int evals = 0;
    bool converged = false;

    QuadResult operator+(const QuadResult& o) const {
        return {value + o.value, error + o.error, evals + o.evals, converged && o.converged};
    }
};

using Integrand = std::function<real(real)>;

// Globally adaptive Gauss-Kronrod 7/15 on [a, b]: the interval with the
// largest error estimate is bisected until the summed error meets the target.
QuadResult quad_finite(const Integrand& f, real a, real b, const QuadOptions& opt = {});

// Integral over [a, +inf); the tail beyond max(1, 2|a|, a) is mapped by z = S/w.
QuadResult quad_a_inf(const Integrand& f, real a, const QuadOptions& opt = {});

// Integral over the whole line, split at +-S with 1/w tail maps.
QuadResult quad_line(const Integrand& f, const QuadOptions& opt = {}, real S = 1.0);

// Integral over (0, b] of f ~ c z^beta near 0 with beta in (-1, 0]; applies
// the substitution z = t^p, p = 1/(1+beta), so the transformed integrand is
// bounded at the origin.
QuadResult quad_pow0(const Integrand& f, real b, real beta, const QuadOptions& opt = {});

// Single non-adaptive G7K15 panel on [a, b]; building block for dense
// cumulative-integral grids.
QuadResult gk15_panel(const Integrand& f, real a, real b);

}  // namespace hemi
