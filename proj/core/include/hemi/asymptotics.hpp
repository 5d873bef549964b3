#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hemi/samples.hpp"

namespace hemi {

// omega(s; alpha) = (s^-alpha - 1)/alpha, continued by -log s at alpha = 0.
// Evaluated through expm1 so the limit is seamless. Throws on s <= 0.
real compensator(real s, real alpha);

// Gamma with domain check (poles at nonpositive integers rejected).
real gamma_fn(real x);

// Smooth germ at 0: point evaluator plus Taylor coefficients
// taylor(i) = f^(i)(0)/i!.
struct TaylorFn {
    std::function<real(real)> eval;
    std::function<real(int)> taylor;
};

inline constexpr real kMellinPoleGuard = 1e-8;

// Incomplete Mellin transform: the unique solution of x f_x - alpha f_hat = f
// smooth in the germ sense. k is the Taylor subtraction order (k > alpha);
// pass k < 0 for the default floor(alpha)+1. When alpha sits on a nonnegative
// integer i0 (within the guard band), the plain transform has a pole; with
// regularized = true the limit of (i0-alpha)*f_hat is returned instead.
real mellin_hat(const TaylorFn& f, real alpha, real x, int k = -1,
                bool regularized = false);

enum class ModelId { M0, M1, M2, M3 };

// M0: delta + D0 s^lambda
// M1: M0 + D1 s^(lambda+1)          (lambda > 1)
// M2: M0 + D2 s^(2 lambda)          (lambda < 1)
// M3: M0 + D3 s^(lambda+1) omega(s; 1-lambda) + D4 s^(lambda+1)  (lambda ~ 1)
struct FitModel {
    ModelId id = ModelId::M0;
    real lambda = 1.0;       // fixed value, or search hint when free
    bool lambda_free = false;
};

// Branch rule: guard band |lambda-1| < 1e-3 selects M3.
FitModel select_model(real lambda);

struct FitResult {
    ModelId model = ModelId::M0;
    real lambda = 0;
    std::vector<real> coeffs;
    std::vector<real> stderrs;
    real resid_max = 0;
    real condition = 0;
};

// Least squares against the model basis; golden-section search over lambda in
// [hint/2, 2 hint] when the model is lambda-free. Throws std::runtime_error on
// a rank-deficient design matrix.
FitResult fit_expansion(const MapSamples& samples, const FitModel& model);

std::string fit_result_to_json(const FitResult& r);

}  // namespace hemi
