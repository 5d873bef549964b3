#include "hemi/quad.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace hemi {

namespace {

// 15-point Kronrod nodes (positive half) with embedded 7-point Gauss rule.
constexpr real xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr real wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839998060075660, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr real wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    real a, b;
    real value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

// One G7K15 evaluation; returns false when a non-finite value appears.
bool gk15(const Integrand& f, real a, real b, real& value, real& error) {
    const real c = 0.5 * (a + b), h = 0.5 * (b - a);
    real fv[15];
    real fc = f(c);
    fv[7] = fc;
    for (int k = 0; k < 7; ++k) {
        fv[k] = f(c - h * xgk[k]);
        fv[14 - k] = f(c + h * xgk[k]);
    }
    real resk = wgk[7] * fc, resg = wg[3] * fc, resabs = wgk[7] * std::abs(fc);
    for (int k = 0; k < 7; ++k) {
        real s = fv[k] + fv[14 - k];
        resk += wgk[k] * s;
        resabs += wgk[k] * (std::abs(fv[k]) + std::abs(fv[14 - k]));
        if (k % 2 == 1) resg += wg[k / 2] * s;
    }
    real mean = 0.5 * resk;
    real resasc = wgk[7] * std::abs(fc - mean);
    for (int k = 0; k < 7; ++k)
        resasc += wgk[k] * (std::abs(fv[k] - mean) + std::abs(fv[14 - k] - mean));
    value = resk * h;
    resabs *= std::abs(h);
    resasc *= std::abs(h);
    real err = std::abs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    real eps_floor = 50.0 * 2.22e-16 * resabs;
    error = std::max(err, eps_floor);
    return std::isfinite(value) && std::isfinite(error);
}

}  // namespace

QuadResult quad_finite(const Integrand& f, real a, real b, const QuadOptions& opt) {
    QuadResult res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<Panel> heap;
    real total = 0.0, toterr = 0.0;
    auto push = [&](real lo, real hi) -> bool {
        Panel p{lo, hi, 0.0, 0.0};
        if (!gk15(f, lo, hi, p.value, p.error)) return false;
        res.evals += 15;
        total += p.value;
        toterr += p.error;
        heap.push(p);
        return true;
    };
    if (!push(a, b)) {
        res.value = std::nan("");
        return res;
    }
    const real min_width = 1e-14 * (std::abs(a) + std::abs(b) + 1.0);
    while (res.evals < opt.max_evals) {
        real target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
        if (toterr <= target) {
            res.converged = true;
            break;
        }
        Panel worst = heap.top();
        if (worst.b - worst.a < min_width) break;  // refinement exhausted
        heap.pop();
        total -= worst.value;
        toterr -= worst.error;
        real mid = 0.5 * (worst.a + worst.b);
        if (!push(worst.a, mid) || !push(mid, worst.b)) {
            res.value = std::nan("");
            return res;
        }
    }
    // final check in case the loop exited on budget right at the target
    if (!res.converged)
        res.converged = toterr <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    res.value = total;
    res.error = toterr;
    return res;
}

QuadResult quad_a_inf(const Integrand& f, real a, const QuadOptions& opt) {
    real S = std::max({1.0, 2.0 * std::abs(a), a});
    QuadOptions half = opt;
    half.abs_tol = 0.5 * opt.abs_tol;
    half.rel_tol = 0.5 * opt.rel_tol;
    half.max_evals = opt.max_evals / 2;
    QuadResult head = quad_finite(f, a, S, half);
    QuadResult tail = quad_finite([&](real w) { return f(S / w) * S / (w * w); }, 0.0, 1.0, half);
    return head + tail;
}

QuadResult quad_line(const Integrand& f, const QuadOptions& opt, real S) {
    QuadOptions third = opt;
    third.abs_tol = opt.abs_tol / 3.0;
    third.rel_tol = opt.rel_tol / 3.0;
    third.max_evals = opt.max_evals / 3;
    QuadResult mid = quad_finite(f, -S, S, third);
    QuadResult right = quad_finite([&](real w) { return f(S / w) * S / (w * w); }, 0.0, 1.0, third);
    QuadResult left = quad_finite([&](real w) { return f(-S / w) * S / (w * w); }, 0.0, 1.0, third);
    return mid + right + left;
}

QuadResult gk15_panel(const Integrand& f, real a, real b) {
    QuadResult r;
    r.evals = 15;
    r.converged = gk15(f, a, b, r.value, r.error);
    if (!r.converged) r.value = std::nan("");
    return r;
}

QuadResult quad_pow0(const Integrand& f, real b, real beta, const QuadOptions& opt) {
    if (beta <= -1.0) {
        QuadResult r;
        r.value = std::nan("");
        return r;
    }
    if (beta >= 0.0) return quad_finite(f, 0.0, b, opt);
    const real p = 1.0 / (1.0 + beta);
    const real tb = std::pow(b, 1.0 / p);
    return quad_finite(
        [&](real t) { return f(std::pow(t, p)) * p * std::pow(t, p - 1.0); }, 0.0, tb, opt);
}

}  // namespace hemi
