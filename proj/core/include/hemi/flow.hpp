#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "hemi/charts.hpp"
#include "hemi/quadratic.hpp"
#include "hemi/samples.hpp"

namespace hemi {

enum class SectionKind { upper_far, near, lower_far };

// Sections on the y-axis: upper_far s -> (0, 1/s), near s -> (0, s),
// lower_far s -> (0, -1/s); s ranges over positive reals. The y gate accepts
// a crossing of {x = 0} as a hit on this section.
struct SectionSpec {
    SectionKind kind = SectionKind::near;
    real s_lo = 0.0;
    real s_hi = 1.0;

    Vec2 point(real s) const;
    bool admits(real y) const;
};

enum class TimeDir { forward, backward };
enum class CrossDir { any, pos_to_neg, neg_to_pos };
enum class Side { upper, lower };

struct FlowOptions {
    real t_max = 1e5;          // rescaled-time budget
    long max_steps = 4000000;
    CrossDir cross = CrossDir::any;
    real t_min_cross = 0.0;    // ignore crossings earlier than this
    real restart_dt = 1e-4;    // trial step after a chart switch
};

struct Crossing {
    Vec2 point;  // affine coordinates
    real t = 0;  // rescaled time (chart-dependent parametrization)
    long steps = 0;
};

// Propagates across the atlas with chart-switch hysteresis until the orbit
// crosses {x = 0} inside the section gate; the crossing is located by sign
// change plus bisection on the dense output. Throws on budget exhaustion,
// non-finite state or a tangential crossing.
Crossing integrate_to_section(const ChartAtlas& atlas, Vec2 start, TimeDir dir,
                              const SectionSpec& target, real tol,
                              const FlowOptions& opt = {});

struct MapValue {
    real value = 0;
    real err = 0;
};

// One Dulac passage: from (0, +-1/s) to the first gated crossing of x = 0,
// forward (right saddle) or backward (left saddle); the value is the signed
// landing y. Every map value is computed at tol and tol/10; the reported
// value is the tighter run and err their difference.
MapValue dulac_passage(const ChartAtlas& atlas, Side side, TimeDir dir, real s, real tol);

// D+ (forward) or D- (backward) samples on the upper side.
MapSamples dulac_map(const ChartAtlas& atlas, std::string label, TimeDir dir,
                     const std::vector<real>& s_grid, real tol);
MapSamples dulac_map(const QuadParams& mu, TimeDir dir, const std::vector<real>& s_grid,
                     real tol = 1e-12);

// Difference map D(s) = D+(s) - D-(s) on the chosen side.
MapSamples dulac_difference(const ChartAtlas& atlas, std::string label, Side side,
                            const std::vector<real>& s_grid, real tol);
MapSamples dulac_difference(const QuadParams& mu, Side side, const std::vector<real>& s_grid,
                            real tol = 1e-12);
MapValue dulac_difference_at(const QuadParams& mu, Side side, real s, real tol = 1e-12);

// Full circuit from (0, s) back to the section, reported as R(s) - s; the
// invariant line must be intact (quadratic overload requires eps0 = 0).
MapSamples return_map(const ChartAtlas& atlas, std::string label,
                      const std::vector<real>& s_grid, real tol);
MapSamples return_map(const QuadParams& mu, const std::vector<real>& s_grid, real tol = 1e-12);

// Plain-plane orbit sampler (no compactification) for conservation checks.
std::vector<std::pair<real, Vec2>> integrate_orbit(const std::function<Vec2(Vec2)>& field,
                                                   Vec2 start, real tspan, real tol,
                                                   int samples = 200);

struct ZeroBracket {
    real s_left = 0, s_right = 0;
    real s_star = 0;     // refined location
    real residual = 0;   // |map| at s_star (or at the better endpoint)
};

struct ZeroReport {
    std::vector<ZeroBracket> zeros;
    std::vector<std::array<real, 2>> ambiguous;  // sign changes not exceeding the error bars
    int count() const { return static_cast<int>(zeros.size()); }
};

// Certified sign changes only: |value| > err on both ends. With a re-evaluator
// the bracket is narrowed by bisection; otherwise s_star is the secant point.
ZeroReport count_zeros(const MapSamples& m, real refine_tol,
                       const std::function<real(real)>& re_eval = {});

std::string zero_report_to_json(const ZeroReport& r);

struct HuntScales {
    real t3 = 0.02;       // initial |nu3| offset
    real s1 = 0.18;       // largest certification point
    real spacing = 12.0;  // ratio between successive certification points
    real rho = 1.8;       // stage-2 overshoot factor
    real tol = 1e-12;     // map tolerance
    int max_shrinks = 4;  // global scale shrinks (factor 1/4) before giving up
};

struct HuntResult {
    bool success = false;
    bool mirrored = false;  // construction ran on sigma(mu) and was pulled back
    QuadParams mu_star;
    NuParams nu_star;
    real s1 = 0, s2 = 0, s3 = 0;  // certification points of the final stage
    ZeroReport upper, lower;
    long map_evals = 0;
    std::vector<std::string> log;  // staged sign diagnostics
};

// Staged two-plus-one zero construction near (a0, b0): nu3 alone fixes the
// signs at s1, then nu2 (nu2 nu3 > 0) flips the sign at s2 < s1, then nu1
// (nu1 nu2 < 0) flips the signs at s3 < s2; scales shrink by 1/4 whenever a
// certification fails. Needs a0 + b0 < 0; for a0 + 2 - b0 < 0 the run is
// mirrored through the involution. Budget exhaustion is a soft failure with
// the diagnostics kept in `log`.
HuntResult hunt_simultaneous(real a0, real b0, HuntScales scales = {}, long budget = 10000);

}  // namespace hemi
