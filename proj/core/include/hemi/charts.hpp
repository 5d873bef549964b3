#pragma once

#include "hemi/dsystem.hpp"
#include "hemi/poly.hpp"

namespace hemi {

// Chart at infinity intersecting {y=0, x>0}, coordinates (x1,x2) = (1/x, y/x).
// P1, P2 are the denominator-cleared components; the saddle sits at the origin
// with eigenvalue ratio -lambda.
struct ProjectiveChart {
    Poly2 P1;
    Poly2 P2;
    RationalFn2 K;  // K = P2/P1
    real lambda = 0;
};

// Builds the chart; throws std::domain_error if lambda <= 0 (hypothesis
// violation) or the degree data is inconsistent.
ProjectiveChart projectivize(const DSystem& d);

// Derivatives of K used by the coefficient formulas. Scalars are values at the
// origin; the two rational lines are u -> d2K(u,0) and u -> d1(1/K)(0,u).
struct KPartials {
    real d1K = 0;
    real d2K = 0;
    real d12K = 0;
    RationalFn1 d2K_line;
    RationalFn1 d1invK_line;
};

KPartials k_partials(const ProjectiveChart& c);

// x1^m * p(1/x1, x2/x1): sends coefficient (i,j) to slot (m-i-j, j).
Poly2 pullback_x(const Poly2& p, int m);
// y2^m * p(y1/y2, 1/y2): sends coefficient (i,j) to slot (i, m-i-j).
Poly2 pullback_y(const Poly2& p, int m);

struct Vec2 {
    real x = 0;
    real y = 0;
};

enum class ChartId { Affine, InfX, InfY };

// Poincare compactification atlas: affine chart plus the two infinity charts
// with positively rescaled fields (orbits only, time parametrization differs
// per chart).
struct ChartAtlas {
    int m = 0;  // common degree bound of (P, Q)
    Poly2 P, Q;
    Poly2 Pstar, Qstar;  // x-infinity chart pullbacks
    Poly2 Pring, Qring;  // y-infinity chart pullbacks
    real radius_out = 10.0;  // leave affine chart beyond this radius
    real radius_in = 9.0;    // re-enter affine chart inside this radius

    Vec2 field(ChartId chart, Vec2 p) const;

    static Vec2 affine_to_x(Vec2 p);  // (1/x, y/x)
    static Vec2 x_to_affine(Vec2 p);
    static Vec2 affine_to_y(Vec2 p);  // (x/y, 1/y)
    static Vec2 y_to_affine(Vec2 p);
    static Vec2 x_to_y(Vec2 p);
    static Vec2 y_to_x(Vec2 p);

    Vec2 to_chart(ChartId chart, Vec2 affine) const;
    Vec2 to_affine(ChartId chart, Vec2 p) const;

    // Chart placement policy (hysteresis handled by the caller via
    // radius_out/radius_in).
    ChartId pick_chart(Vec2 affine) const;
};

ChartAtlas make_atlas(Poly2 P, Poly2 Q, int m);

// Atlas of the phase field (y f + g, y q) with m = n + 1.
ChartAtlas poincare_charts(const DSystem& d);

}  // namespace hemi
