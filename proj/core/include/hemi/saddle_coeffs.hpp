#pragma once

#include <memory>
#include <optional>
#include <string>

#include "hemi/charts.hpp"
#include "hemi/dsystem.hpp"
#include "hemi/quad.hpp"

namespace hemi {

// Value with an accumulated numerical error bound (quadrature estimates
// propagated to first order).
struct Scalar {
    real value = 0;
    real err = 0;
};

enum class Branch { gt1, lt1, eq1 };
enum class Stability { stable, unstable, undetermined };

// Guard band around lambda = 1 selecting the eq1 branch.
inline constexpr real kLambdaGuard = 1e-3;

struct CoefficientReport {
    real lambda = 0;
    Branch branch = Branch::gt1;
    Scalar d0;
    Scalar d1;  // F1, F2 or F3 per branch
    Scalar G1, G2, G1plus, G1minus, G2plus, G2minus;
    Scalar Delta0plus, Delta0minus, Delta0;
    // Delta1 (gt1), Delta2 (lt1) or Delta3 (eq1):
    Scalar Delta_branch_plus, Delta_branch_minus, Delta_branch;
    Stability stability = Stability::undetermined;
};

namespace detail {
struct LGrid;
}

// One saddle-quantity computation per system: caches the projective chart,
// the combined rational integrands (assembled so that the cancelling leading
// and constant coefficients are removed exactly), the cumulative integral
// grids behind L1/L2, and the reflected-system engine for minus-side values.
class SaddleEngine {
public:
    explicit SaddleEngine(const DSystem& d, QuadOptions opt = {});
    ~SaddleEngine();
    SaddleEngine(SaddleEngine&&) noexcept;
    SaddleEngine& operator=(SaddleEngine&&) noexcept;

    const DSystem& system() const { return d_; }
    const ProjectiveChart& chart() const { return chart_; }
    const KPartials& partials() const { return kp_; }
    real lambda() const { return chart_.lambda; }
    Branch branch() const;

    Scalar d0();
    Scalar log_delta0_plus();
    Scalar G1();
    Scalar G2();
    Scalar G1plus();
    Scalar G2plus();
    Scalar G1minus();  // = G1plus of the reflected system
    Scalar G2minus();

    // L1(u), L2(u); M1(u) = L1(u) d1(1/K)(0,u), M2(u) = L2(u) d2K(u,0).
    real L(int side, real u);
    real M(int side, real u);
    real M_at0(int side) const;
    real M2prime0() const;  // (d1K d2K + d12K)(0,0)
    // M(side, u) - M(side, 0) without subtractive cancellation near u = 0.
    real M_diff(int side, real u);

    // S1 = int_0^inf (M1(u)-M1(0)) u^(-1-1/lambda) du  (needs lambda > 1)
    // S2 = int_0^inf (M2(u)-M2(0)) u^(-1-lambda) du    (needs lambda < 1)
    Scalar S(int side);

    Scalar F();  // branch value F1 / F2 / F3
    Scalar Delta0plus();
    Scalar Delta0minus();
    // Branch Delta pair: Delta1+/- (gt1), Delta2+/- (lt1), Delta3+/- (eq1).
    Scalar Delta_branch_plus();
    Scalar Delta_branch_minus();

    CoefficientReport report();

    SaddleEngine& reflected_engine();

    // Internal consistency: the [0,1] quadrature value of G1+/G2+ must match
    // the grid-tail limit exp(Gi+) = lim u^(1+beta) Li(u); exposed for tests.
    real G_plus_from_tail(int side);

private:
    struct Cache;
    DSystem d_;
    QuadOptions opt_;
    HomogeneousData h_;
    ProjectiveChart chart_;
    KPartials kp_;
    std::unique_ptr<Cache> cache_;

    detail::LGrid& ensure_grid(int side);
    Scalar S_head_mid_tail(int side, real beta);
};

// Convenience wrappers over a one-shot engine.
Scalar compute_d0(const DSystem& d, QuadOptions opt = {});

struct GSet {
    Scalar G1, G2, G1plus, G1minus, G2plus, G2minus;
};
GSet compute_G(const DSystem& d, QuadOptions opt = {});

struct FValue {
    Scalar value;
    Branch branch = Branch::gt1;
};
FValue compute_F(const DSystem& d, QuadOptions opt = {});

struct DeltaSet {
    Scalar Delta0plus, Delta0minus, Delta0;
    Branch branch = Branch::gt1;
    Scalar branch_plus, branch_minus, branch_diff;
};
DeltaSet compute_Delta(const DSystem& d, QuadOptions opt = {});

// L factor from a chart alone (builds a throwaway grid; use SaddleEngine when
// evaluating many points).
real L_factor(const ProjectiveChart& c, int side, real u);

CoefficientReport compute_coefficients(const DSystem& d, QuadOptions opt = {});

// stable if d0 < -tol; unstable if d0 > tol; otherwise branch on d1 the same
// way; undetermined when both sit inside their tolerance (widened by the
// reported error estimates).
Stability classify_stability(const CoefficientReport& r, real tol = 1e-9);

std::string report_to_json(const CoefficientReport& r);

}  // namespace hemi
