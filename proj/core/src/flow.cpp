#include "hemi/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>
#include <json.hpp>

namespace ode = boost::numeric::odeint;

namespace hemi {

namespace {

using State = std::array<real, 2>;

constexpr real kChartRatio = 1.25;  // dominance factor for InfX <-> InfY handoff

ChartId pick_switch(const ChartAtlas& a, ChartId c, Vec2 u) {
    const real Ro = a.radius_out, Ri = a.radius_in;
    switch (c) {
        case ChartId::Affine: {
            real ax = std::fabs(u.x), ay = std::fabs(u.y);
            if (std::max(ax, ay) >= Ro) return ax >= ay ? ChartId::InfX : ChartId::InfY;
            return c;
        }
        case ChartId::InfX: {
            real x1 = std::fabs(u.x), x2 = std::fabs(u.y);
            if (x1 * Ri >= 1.0 && x2 <= Ri * x1) return ChartId::Affine;
            if (x2 >= kChartRatio && x2 >= Ro * x1) return ChartId::InfY;
            return c;
        }
        case ChartId::InfY: {
            real y1 = std::fabs(u.x), y2 = std::fabs(u.y);
            if (y2 * Ri >= 1.0 && y1 <= Ri * y2) return ChartId::Affine;
            if (y1 >= kChartRatio && y1 >= Ro * y2) return ChartId::InfX;
            return c;
        }
    }
    return c;
}

Vec2 chart_transform(ChartId from, ChartId to, Vec2 u) {
    using CA = ChartAtlas;
    if (from == to) return u;
    switch (from) {
        case ChartId::Affine:
            return to == ChartId::InfX ? CA::affine_to_x(u) : CA::affine_to_y(u);
        case ChartId::InfX:
            return to == ChartId::Affine ? CA::x_to_affine(u) : CA::x_to_y(u);
        case ChartId::InfY:
            return to == ChartId::Affine ? CA::y_to_affine(u) : CA::y_to_x(u);
    }
    return u;
}

std::string quad_label(const QuadParams& p) {
    char buf[192];
    std::snprintf(buf, sizeof buf, "quad(a=%.17g,b=%.17g,eps=%.17g,%.17g,%.17g)", p.a, p.b,
                  p.eps0, p.eps1, p.eps2);
    return buf;
}

void logf(std::vector<std::string>& log, const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    log.emplace_back(buf);
}

std::vector<real> log_grid(real lo, real hi, int n) {
    std::vector<real> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<real>(i) / (n - 1));
    return g;
}

}  // namespace

Vec2 SectionSpec::point(real s) const {
    if (!(s > 0.0)) throw std::domain_error("SectionSpec: s must be positive");
    switch (kind) {
        case SectionKind::upper_far: return {0.0, 1.0 / s};
        case SectionKind::near: return {0.0, s};
        case SectionKind::lower_far: return {0.0, -1.0 / s};
    }
    return {};
}

bool SectionSpec::admits(real y) const {
    switch (kind) {
        case SectionKind::near: {
            real ay = std::fabs(y);
            return ay >= s_lo && ay <= s_hi;
        }
        case SectionKind::upper_far: {
            if (!(y > 0.0)) return false;
            real s = 1.0 / y;
            return s >= s_lo && s <= s_hi;
        }
        case SectionKind::lower_far: {
            if (!(y < 0.0)) return false;
            real s = -1.0 / y;
            return s >= s_lo && s <= s_hi;
        }
    }
    return false;
}

Crossing integrate_to_section(const ChartAtlas& atlas, Vec2 start, TimeDir dir,
                              const SectionSpec& target, real tol, const FlowOptions& opt) {
    ChartId chart = atlas.pick_chart(start);
    Vec2 u0 = atlas.to_chart(chart, start);
    const real sgn = dir == TimeDir::forward ? 1.0 : -1.0;

    auto rhs = [&atlas, &chart, sgn](const State& x, State& dxdt, real) {
        Vec2 f = atlas.field(chart, {x[0], x[1]});
        dxdt[0] = sgn * f.x;
        dxdt[1] = sgn * f.y;
    };

    auto stepper = ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>());
    State x{u0.x, u0.y};
    stepper.initialize(x, 0.0, opt.restart_dt);

    auto bisect = [&](real ta, real tb, real fa) {
        State xm;
        for (int i = 0; i < 200 && tb - ta > 1e-15 * (1.0 + std::fabs(tb)); ++i) {
            real tm = 0.5 * (ta + tb);
            stepper.calc_state(tm, xm);
            real fm = xm[0];
            if (fm == 0.0) return tm;
            if ((fa < 0.0) != (fm < 0.0)) tb = tm;
            else {
                ta = tm;
                fa = fm;
            }
        }
        return 0.5 * (ta + tb);
    };

    long steps = 0;
    while (true) {
        if (steps >= opt.max_steps)
            throw std::runtime_error("integrate_to_section: step budget exhausted");
        auto iv = stepper.do_step(rhs);
        ++steps;
        real t0 = iv.first, t1 = iv.second;
        if (t1 > opt.t_max)
            throw std::runtime_error("integrate_to_section: time budget exhausted");
        State xe = stepper.current_state();
        if (!std::isfinite(xe[0]) || !std::isfinite(xe[1]))
            throw std::runtime_error("integrate_to_section: state became non-finite");

        // The section {x = 0} reads as coordinate 0 in the affine chart and in
        // the y-infinity chart (y1 = x/y); it is invisible from InfX.
        if (chart != ChartId::InfX) {
            State xa, xm;
            stepper.calc_state(t0, xa);
            real tm = 0.5 * (t0 + t1);
            stepper.calc_state(tm, xm);
            real f0 = xa[0], fm = xm[0], f1 = xe[0];
            struct Cand {
                real ta, tb, fa;
            };
            Cand cands[2];
            int nc = 0;
            if (f0 * fm < 0.0) cands[nc++] = {t0, tm, f0};
            if (fm * f1 < 0.0) cands[nc++] = {tm, t1, fm};
            if (nc == 0 && f0 * f1 < 0.0) cands[nc++] = {t0, t1, f0};
            for (int i = 0; i < nc; ++i) {
                real tc = bisect(cands[i].ta, cands[i].tb, cands[i].fa);
                if (tc < opt.t_min_cross) continue;
                State xc;
                stepper.calc_state(tc, xc);
                State fc;
                rhs(xc, fc, tc);
                real speed = std::hypot(fc[0], fc[1]);
                if (std::fabs(fc[0]) <= 1e-10 * (speed + 1e-300))
                    throw std::runtime_error("integrate_to_section: tangential section crossing");
                if (opt.cross == CrossDir::pos_to_neg && !(fc[0] < 0.0)) continue;
                if (opt.cross == CrossDir::neg_to_pos && !(fc[0] > 0.0)) continue;
                real y = chart == ChartId::Affine ? xc[1] : 1.0 / xc[1];
                if (!target.admits(y)) continue;
                return {{0.0, y}, tc, steps};
            }
        }

        ChartId next = pick_switch(atlas, chart, {xe[0], xe[1]});
        if (next != chart) {
            Vec2 v = chart_transform(chart, next, {xe[0], xe[1]});
            chart = next;
            State xn{v.x, v.y};
            stepper.initialize(xn, t1, opt.restart_dt);
        }
    }
}

namespace {

real one_passage(const ChartAtlas& atlas, Side side, TimeDir dir, real s, real tol) {
    SectionSpec far{side == Side::upper ? SectionKind::upper_far : SectionKind::lower_far, 0.0,
                    std::numeric_limits<real>::infinity()};
    SectionSpec near{SectionKind::near, 0.0, 1.0};
    FlowOptions opt;
    opt.cross = dir == TimeDir::forward ? CrossDir::pos_to_neg : CrossDir::neg_to_pos;
    Crossing c = integrate_to_section(atlas, far.point(s), dir, near, tol, opt);
    return c.point.y;
}

real one_return(const ChartAtlas& atlas, real s, real tol) {
    SectionSpec near{SectionKind::near, 0.0, 1.0};
    FlowOptions opt;
    opt.cross = CrossDir::pos_to_neg;
    opt.t_min_cross = 1e-2;  // the start sits on the section
    Crossing c = integrate_to_section(atlas, {0.0, s}, TimeDir::forward, near, tol, opt);
    return c.point.y;
}

MapValue two_tol(const std::function<real(real)>& run, real tol) {
    real coarse = run(tol);
    real fine = run(tol / 10.0);
    return {fine, std::fabs(coarse - fine) + 1e-14 * (1.0 + std::fabs(fine))};
}

std::vector<real> sorted_grid(std::vector<real> g) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

}  // namespace

MapValue dulac_passage(const ChartAtlas& atlas, Side side, TimeDir dir, real s, real tol) {
    return two_tol([&](real t) { return one_passage(atlas, side, dir, s, t); }, tol);
}

MapSamples dulac_map(const ChartAtlas& atlas, std::string label, TimeDir dir,
                     const std::vector<real>& s_grid, real tol) {
    MapSamples m;
    m.kind = dir == TimeDir::forward ? MapKind::DplusUpper : MapKind::DminusUpper;
    m.label = std::move(label);
    m.tol_ode = tol;
    for (real s : sorted_grid(s_grid)) {
        MapValue v = dulac_passage(atlas, Side::upper, dir, s, tol);
        m.rows.push_back({s, v.value, v.err});
    }
    return m;
}

MapSamples dulac_map(const QuadParams& mu, TimeDir dir, const std::vector<real>& s_grid,
                     real tol) {
    return dulac_map(quadratic_atlas(mu), quad_label(mu), dir, s_grid, tol);
}

MapSamples dulac_difference(const ChartAtlas& atlas, std::string label, Side side,
                            const std::vector<real>& s_grid, real tol) {
    MapSamples m;
    m.kind = side == Side::upper ? MapKind::DiffUpper : MapKind::DiffLower;
    m.label = std::move(label);
    m.tol_ode = tol;
    for (real s : sorted_grid(s_grid)) {
        MapValue p = dulac_passage(atlas, side, TimeDir::forward, s, tol);
        MapValue q = dulac_passage(atlas, side, TimeDir::backward, s, tol);
        m.rows.push_back({s, p.value - q.value, p.err + q.err});
    }
    return m;
}

MapSamples dulac_difference(const QuadParams& mu, Side side, const std::vector<real>& s_grid,
                            real tol) {
    return dulac_difference(quadratic_atlas(mu), quad_label(mu), side, s_grid, tol);
}

MapValue dulac_difference_at(const QuadParams& mu, Side side, real s, real tol) {
    ChartAtlas atlas = quadratic_atlas(mu);
    MapValue p = dulac_passage(atlas, side, TimeDir::forward, s, tol);
    MapValue q = dulac_passage(atlas, side, TimeDir::backward, s, tol);
    return {p.value - q.value, p.err + q.err};
}

MapSamples return_map(const ChartAtlas& atlas, std::string label,
                      const std::vector<real>& s_grid, real tol) {
    MapSamples m;
    m.kind = MapKind::ReturnUpper;
    m.label = std::move(label);
    m.tol_ode = tol;
    for (real s : sorted_grid(s_grid)) {
        MapValue v = two_tol([&](real t) { return one_return(atlas, s, t); }, tol);
        m.rows.push_back({s, v.value - s, v.err});
    }
    return m;
}

MapSamples return_map(const QuadParams& mu, const std::vector<real>& s_grid, real tol) {
    if (mu.eps0 != 0.0)
        throw std::invalid_argument("return_map: needs eps0 = 0 (invariant line intact)");
    return return_map(quadratic_atlas(mu), quad_label(mu), s_grid, tol);
}

std::vector<std::pair<real, Vec2>> integrate_orbit(const std::function<Vec2(Vec2)>& field,
                                                   Vec2 start, real tspan, real tol,
                                                   int samples) {
    if (!(tspan > 0.0) || samples < 1) throw std::invalid_argument("integrate_orbit: bad span");
    auto rhs = [&field](const State& x, State& dxdt, real) {
        Vec2 f = field({x[0], x[1]});
        dxdt[0] = f.x;
        dxdt[1] = f.y;
    };
    auto stepper = ode::make_dense_output(tol, tol, ode::runge_kutta_dopri5<State>());
    State x{start.x, start.y};
    stepper.initialize(x, 0.0, 1e-4);
    std::vector<std::pair<real, Vec2>> out;
    out.reserve(samples + 1);
    out.emplace_back(0.0, start);
    const real dt = tspan / samples;
    int next = 1;
    long guard = 0;
    while (next <= samples) {
        stepper.do_step(rhs);
        if (++guard > 20000000)
            throw std::runtime_error("integrate_orbit: step budget exhausted");
        const State& xe = stepper.current_state();
        if (!std::isfinite(xe[0]) || !std::isfinite(xe[1]))
            throw std::runtime_error("integrate_orbit: state became non-finite");
        while (next <= samples && stepper.current_time() >= next * dt) {
            State xi;
            stepper.calc_state(next * dt, xi);
            out.emplace_back(next * dt, Vec2{xi[0], xi[1]});
            ++next;
        }
    }
    return out;
}

ZeroReport count_zeros(const MapSamples& m, real refine_tol,
                       const std::function<real(real)>& re_eval) {
    ZeroReport rep;
    const auto& r = m.rows;
    for (size_t i = 0; i + 1 < r.size(); ++i) {
        real v0 = r[i].value, v1 = r[i + 1].value;
        if (v0 == 0.0 || v1 == 0.0 || (v0 < 0.0) == (v1 < 0.0)) continue;
        if (!(std::fabs(v0) > r[i].err && std::fabs(v1) > r[i + 1].err)) {
            rep.ambiguous.push_back({r[i].s, r[i + 1].s});
            continue;
        }
        ZeroBracket z{r[i].s, r[i + 1].s, 0.0, 0.0};
        if (re_eval) {
            real a = z.s_left, b = z.s_right, fa = v0, fm = v0;
            for (int it = 0; it < 60 && b - a > refine_tol; ++it) {
                real mid = 0.5 * (a + b);
                fm = re_eval(mid);
                if (fm == 0.0) {
                    a = b = mid;
                    break;
                }
                if ((fa < 0.0) != (fm < 0.0)) b = mid;
                else {
                    a = mid;
                    fa = fm;
                }
            }
            z.s_star = 0.5 * (a + b);
            z.residual = std::fabs(fm);
        } else {
            z.s_star = z.s_left + (z.s_right - z.s_left) * (-v0) / (v1 - v0);
            z.residual = std::min(std::fabs(v0), std::fabs(v1));
        }
        rep.zeros.push_back(z);
    }
    return rep;
}

std::string zero_report_to_json(const ZeroReport& r) {
    nlohmann::ordered_json j;
    j["count"] = r.count();
    j["zeros"] = nlohmann::ordered_json::array();
    for (const auto& z : r.zeros)
        j["zeros"].push_back({{"s_left", z.s_left},
                              {"s_right", z.s_right},
                              {"s_star", z.s_star},
                              {"residual", z.residual}});
    j["ambiguous"] = nlohmann::ordered_json::array();
    for (const auto& a : r.ambiguous) j["ambiguous"].push_back({a[0], a[1]});
    return j.dump(2);
}

namespace {

struct BudgetExhausted {};

struct HuntCtx {
    NuParams nu;
    real tol = 1e-12;
    long budget = 0;
    long used = 0;

    QuadParams mu() const { return phi_inverse(nu); }

    MapValue eval(Side side, real s) {
        if (used >= budget) throw BudgetExhausted{};
        ++used;
        return dulac_difference_at(mu(), side, s, tol);
    }
};

bool certified_sign(const MapValue& v, int want) {
    return std::fabs(v.value) > 10.0 * v.err && (v.value > 0.0 ? 1 : -1) == want;
}

// Feasible nu interval for linearized constraints current + nu * slope > 0 or < 0.
struct Interval {
    real lo = -std::numeric_limits<real>::infinity();
    real hi = std::numeric_limits<real>::infinity();
    bool ok = true;

    void require_pos(real current, real slope) {
        if (slope > 0.0) lo = std::max(lo, -current / slope);
        else if (slope < 0.0) hi = std::min(hi, -current / slope);
        else ok = ok && current > 0.0;
    }
    void require_neg(real current, real slope) { require_pos(-current, -slope); }
    bool feasible() const { return ok && hi > lo; }
};

MapSamples hunt_samples(HuntCtx& ctx, Side side, const std::vector<real>& grid) {
    MapSamples m;
    m.kind = side == Side::upper ? MapKind::DiffUpper : MapKind::DiffLower;
    m.label = quad_label(ctx.mu());
    m.tol_ode = ctx.tol;
    for (real s : grid) {
        MapValue v = ctx.eval(side, s);
        m.rows.push_back({s, v.value, v.err});
    }
    return m;
}

void certify_zero_counts(HuntCtx& ctx, HuntResult& res) {
    auto reU = [&ctx](real s) { return ctx.eval(Side::upper, s).value; };
    auto reL = [&ctx](real s) { return ctx.eval(Side::lower, s).value; };
    MapSamples su = hunt_samples(ctx, Side::upper, log_grid(res.s3, res.s1, 14));
    res.upper = count_zeros(su, 0.02 * res.s3, reU);
    MapSamples sl = hunt_samples(ctx, Side::lower, log_grid(res.s3, res.s1, 8));
    res.lower = count_zeros(sl, 0.02 * res.s3, reL);
    res.success = (res.upper.count() >= 2 && res.lower.count() >= 1) ||
                  (res.upper.count() >= 1 && res.lower.count() >= 2);
    logf(res.log, "zero counts: upper %d (+%zu ambiguous), lower %d (+%zu ambiguous)",
         res.upper.count(), res.upper.ambiguous.size(), res.lower.count(),
         res.lower.ambiguous.size());
}

HuntResult hunt_core(real a0, real b0, const HuntScales& sc, long budget) {
    HuntResult res;
    NuParams nu0;
    nu0.nu4 = a0 + 2.0 - b0;
    nu0.nu5 = a0 + b0;
    HuntCtx ctx;
    ctx.tol = sc.tol;
    ctx.budget = budget;

    const real s1 = sc.s1, s2 = s1 / sc.spacing, s3 = s2 / sc.spacing;
    res.s1 = s1;
    res.s2 = s2;
    res.s3 = s3;
    logf(res.log, "hunt at (a0, b0) = (%.6g, %.6g): nu0 = (0, 0, 0, %.6g, %.6g)", a0, b0,
         nu0.nu4, nu0.nu5);

    try {
        for (int shrink = 0; shrink <= sc.max_shrinks; ++shrink) {
            const real t3 = sc.t3 / std::pow(4.0, shrink);
            ctx.nu = nu0;
            ctx.nu.nu3 = t3;
            res.nu_star = ctx.nu;
            res.mu_star = ctx.mu();
            logf(res.log, "attempt %d: nu3 = %.4g, s = (%.5g, %.5g, %.5g)", shrink, t3, s3, s2,
                 s1);

            // stage 1: nu3 alone must give Du(s1) < 0 and Dl(s1) > 0
            MapValue du1 = ctx.eval(Side::upper, s1);
            MapValue dl1 = ctx.eval(Side::lower, s1);
            logf(res.log, "  stage1: Du(s1) = %.4g +- %.1g, Dl(s1) = %.4g +- %.1g", du1.value,
                 du1.err, dl1.value, dl1.err);
            if (!certified_sign(du1, -1) || !certified_sign(dl1, +1)) {
                logf(res.log, "  stage1: sign certification failed");
                continue;
            }

            // stage 2: nu2 > 0 flips Du(s2) positive, keeps the s1 signs
            MapValue du2 = ctx.eval(Side::upper, s2);
            const real nu2probe = t3 / 4.0;
            ctx.nu.nu2 = nu2probe;
            real k22 = (ctx.eval(Side::upper, s2).value - du2.value) / nu2probe;
            real k21 = (ctx.eval(Side::upper, s1).value - du1.value) / nu2probe;
            real kl21 = (ctx.eval(Side::lower, s1).value - dl1.value) / nu2probe;
            if (!(k22 > 0.0)) {
                logf(res.log, "  stage2: dDu(s2)/dnu2 = %.4g not positive", k22);
                continue;
            }
            Interval i2;
            i2.require_pos(du2.value, k22);
            i2.require_neg(du1.value, k21);
            i2.require_pos(dl1.value, kl21);
            i2.lo = std::max(i2.lo, 0.0);  // nu2 nu3 > 0
            i2.hi = std::min(i2.hi, i2.lo > 0.0 ? 8.0 * i2.lo : t3);
            if (!i2.feasible()) {
                logf(res.log, "  stage2: empty nu2 interval [%.4g, %.4g]", i2.lo, i2.hi);
                continue;
            }
            ctx.nu.nu2 = 0.5 * (i2.lo + i2.hi);
            du2 = ctx.eval(Side::upper, s2);
            du1 = ctx.eval(Side::upper, s1);
            dl1 = ctx.eval(Side::lower, s1);
            logf(res.log, "  stage2: nu2 = %.4g, Du(s2) = %.4g +- %.1g, Du(s1) = %.4g, Dl(s1) = %.4g",
                 ctx.nu.nu2, du2.value, du2.err, du1.value, dl1.value);
            if (!certified_sign(du2, +1) || !certified_sign(du1, -1) || !certified_sign(dl1, +1)) {
                logf(res.log, "  stage2: sign certification failed");
                continue;
            }

            // stage 3: nu1 < 0 flips Du(s3) and Dl(s3) negative, keeps the rest
            MapValue du3 = ctx.eval(Side::upper, s3);
            MapValue dl3 = ctx.eval(Side::lower, s3);
            const real nu1probe = -0.25 * ctx.nu.nu2;
            ctx.nu.nu1 = nu1probe;
            real ku3 = (ctx.eval(Side::upper, s3).value - du3.value) / nu1probe;
            real ku2 = (ctx.eval(Side::upper, s2).value - du2.value) / nu1probe;
            real ku1 = (ctx.eval(Side::upper, s1).value - du1.value) / nu1probe;
            real kl3 = (ctx.eval(Side::lower, s3).value - dl3.value) / nu1probe;
            real kl1 = (ctx.eval(Side::lower, s1).value - dl1.value) / nu1probe;
            Interval i3;
            i3.require_neg(du3.value, ku3);
            i3.require_pos(du2.value, ku2);
            i3.require_neg(du1.value, ku1);
            i3.require_neg(dl3.value, kl3);
            i3.require_pos(dl1.value, kl1);
            i3.hi = std::min(i3.hi, 0.0);  // nu1 nu2 < 0
            i3.lo = std::max(i3.lo, -8.0 * std::fabs(ctx.nu.nu2));
            if (!i3.feasible()) {
                logf(res.log, "  stage3: empty nu1 interval [%.4g, %.4g]", i3.lo, i3.hi);
                ctx.nu.nu1 = 0.0;
                ctx.nu.nu2 = 0.0;
                continue;
            }
            ctx.nu.nu1 = 0.5 * (i3.lo + i3.hi);
            du3 = ctx.eval(Side::upper, s3);
            du2 = ctx.eval(Side::upper, s2);
            du1 = ctx.eval(Side::upper, s1);
            dl3 = ctx.eval(Side::lower, s3);
            dl1 = ctx.eval(Side::lower, s1);
            logf(res.log,
                 "  stage3: nu1 = %.4g, Du = (%.4g, %.4g, %.4g), Dl = (%.4g, -, %.4g) at (s3, s2, s1)",
                 ctx.nu.nu1, du3.value, du2.value, du1.value, dl3.value, dl1.value);
            if (!(certified_sign(du3, -1) && certified_sign(du2, +1) && certified_sign(du1, -1) &&
                  certified_sign(dl3, -1) && certified_sign(dl1, +1))) {
                logf(res.log, "  stage3: sign certification failed");
                ctx.nu.nu1 = 0.0;
                ctx.nu.nu2 = 0.0;
                continue;
            }
            if (!(ctx.nu.nu2 * ctx.nu.nu3 > 0.0 && ctx.nu.nu1 * ctx.nu.nu2 < 0.0)) {
                logf(res.log, "  parameter sign relations violated");
                continue;
            }

            res.nu_star = ctx.nu;
            res.mu_star = ctx.mu();
            certify_zero_counts(ctx, res);
            if (res.success) break;
        }
        if (!res.success) logf(res.log, "no certified configuration within the scale budget");
    } catch (const BudgetExhausted&) {
        logf(res.log, "map-evaluation budget exhausted after %ld evaluations", ctx.used);
    }
    res.map_evals = ctx.used;
    return res;
}

}  // namespace

HuntResult hunt_simultaneous(real a0, real b0, HuntScales scales, long budget) {
    if (a0 + b0 < -1e-9) return hunt_core(a0, b0, scales, budget);
    if (a0 + 2.0 - b0 < -1e-9) {
        // Run the construction on the involution image (a0, 2-b0), whose
        // nu5 is negative, then pull everything back through sigma; the zero
        // sets swap sides and rescale by eta_b^2.
        const real bp = 2.0 - b0;
        QuadParams image{a0, bp, 0, 0, 0};
        const real factor = 1.0 / (image.eta_b() * image.eta_b());  // > 1 here
        HuntScales sc2 = scales;
        sc2.s1 = scales.s1 / factor;
        HuntResult r = hunt_core(a0, bp, sc2, budget);
        HuntResult out;
        out.log = std::move(r.log);
        out.map_evals = r.map_evals;
        out.mirrored = true;
        out.mu_star = involution(r.mu_star);
        out.nu_star = phi_params(out.mu_star);
        out.s1 = r.s1 * factor;
        out.s2 = r.s2 * factor;
        out.s3 = r.s3 * factor;
        logf(out.log, "mirrored through sigma: mu* = %s, s rescaled by %.6g",
             quad_label(out.mu_star).c_str(), factor);
        if (r.success) {
            HuntCtx ctx;
            ctx.tol = scales.tol;
            ctx.budget = budget - r.map_evals;
            ctx.nu = out.nu_star;
            try {
                certify_zero_counts(ctx, out);
            } catch (const BudgetExhausted&) {
                logf(out.log, "budget exhausted during mirrored re-certification");
            }
            out.map_evals += ctx.used;
        }
        return out;
    }
    throw std::invalid_argument("hunt_simultaneous: needs a0 + b0 < 0 or a0 + 2 - b0 < 0");
}

}  // namespace hemi
