#include "hemi/saddle_coeffs.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace hemi {

namespace detail {

// Cumulative integral I(u) = int_0^u bracket(z) dz of a rational bracket with
// no real poles and c1/z decay: dense Gauss-Kronrod prefix sums with Hermite
// interpolation on [-Uref, Uref], Laurent-series antiderivative beyond.
struct LGrid {
    RationalFn1 bracket;
    real Uref = 0;
    int ncells = 0;
    real h = 0;
    std::vector<real> I;   // node values, zero at the middle node u = 0
    std::vector<real> fv;  // bracket values at nodes
    std::vector<real> c;   // c[k] multiplies z^-k in the bracket's tail series
    real Iplus = 0, Iminus = 0;
    real grid_err = 0;

    // sum_{k>=2} c_k (w^{k-1} - Uref^{1-k})/(1-k); the non-logarithmic part of
    // I(1/w) - I(Uref) for w in [0, 1/Uref].
    real tail_T(real w) const {
        real acc = 0.0, wk = w, ur = 1.0 / Uref;
        for (size_t k = 2; k < c.size(); ++k) {
            acc += c[k] * (wk - ur) / (1.0 - static_cast<real>(k));
            wk *= w;
            ur /= Uref;
        }
        return acc;
    }

    real eval(real u) const {
        if (u > Uref) {
            real acc = Iplus + c[1] * std::log(u / Uref);
            real uk = 1.0 / u, ur = 1.0 / Uref;
            for (size_t k = 2; k < c.size(); ++k) {
                acc += c[k] * (uk - ur) / (1.0 - static_cast<real>(k));
                uk /= u;
                ur /= Uref;
            }
            return acc;
        }
        if (u < -Uref) {
            real acc = Iminus + c[1] * std::log(-u / Uref);
            real uk = 1.0 / u, ur = -1.0 / Uref;
            for (size_t k = 2; k < c.size(); ++k) {
                acc += c[k] * (uk - ur) / (1.0 - static_cast<real>(k));
                uk /= u;
                ur /= -Uref;
            }
            return acc;
        }
        real t = (u + Uref) / h;
        int k = std::max(0, std::min(static_cast<int>(std::floor(t)), ncells - 1));
        real x = t - k, x2 = x * x, x3 = x2 * x;
        return (2 * x3 - 3 * x2 + 1) * I[k] + (x3 - 2 * x2 + x) * h * fv[k] +
               (-2 * x3 + 3 * x2) * I[k + 1] + (x3 - x2) * h * fv[k + 1];
    }
};

namespace {

RationalFn1 l_bracket(const ProjectiveChart& chart, int side) {
    if (side == 2) {
        Poly1 den = chart.P1.slice_y0();
        Poly1 A = chart.P2.slice_y0();
        Poly1 B = den * chart.lambda;
        Poly1 N = A + B;
        N.zero_coeff_checked(0, 1e-8, std::max(A.max_abs_coeff(), B.max_abs_coeff()));
        return {N.shifted_down(1), den};
    }
    if (side == 1) {
        Poly1 den = chart.P2.slice_x0();
        Poly1 A = chart.P1.slice_x0();
        Poly1 B = den * (1.0 / chart.lambda);
        Poly1 N = A + B;
        N.zero_coeff_checked(0, 1e-8, std::max(A.max_abs_coeff(), B.max_abs_coeff()));
        return {N.shifted_down(1), den};
    }
    throw std::invalid_argument("L side must be 1 or 2");
}

LGrid build_L_grid(const ProjectiveChart& chart, int side) {
    LGrid g;
    g.bracket = l_bracket(chart, side);
    g.Uref = std::max(16.0, 2.0 * g.bracket.den.root_bound());
    g.ncells = 4096;
    g.h = 2.0 * g.Uref / g.ncells;
    g.I.assign(g.ncells + 1, 0.0);
    g.fv.resize(g.ncells + 1);
    for (int k = 0; k <= g.ncells; ++k) g.fv[k] = g.bracket.eval(-g.Uref + g.h * k);

    auto fn = [&](real z) { return g.bracket.eval(z); };
    const int mid = g.ncells / 2;
    for (int k = mid; k < g.ncells; ++k) {
        real a = -g.Uref + g.h * k;
        QuadResult p = gk15_panel(fn, a, a + g.h);
        g.I[k + 1] = g.I[k] + p.value;
        g.grid_err += p.error;
    }
    for (int k = mid; k > 0; --k) {
        real a = -g.Uref + g.h * (k - 1);
        QuadResult p = gk15_panel(fn, a, a + g.h);
        g.I[k - 1] = g.I[k] - p.value;
        g.grid_err += p.error;
    }
    g.Iplus = g.I[g.ncells];
    g.Iminus = g.I[0];

    const Poly1& Ns = g.bracket.num;
    const Poly1& Ds = g.bracket.den;
    const int dd = Ds.degree();
    const real bd = Ds.coeff(dd);
    const int K = 60;
    g.c.assign(K + 1, 0.0);
    for (int m = 1; m <= K; ++m) {
        real s = Ns.coeff(dd - m);
        for (int k = 1; k < m; ++k) s -= g.c[k] * Ds.coeff(dd - m + k);
        g.c[m] = s / bd;
    }
    real c1_expect = side == 2 ? 1.0 + chart.lambda : 1.0 + 1.0 / chart.lambda;
    if (std::fabs(g.c[1] - c1_expect) > 1e-8 * c1_expect)
        throw std::logic_error("L grid: tail growth exponent does not match 1+beta");
    g.c[1] = c1_expect;
    return g;
}

}  // namespace
}  // namespace detail

namespace {

// One side of the M-difference machinery: the rational K-derivative line R,
// the exactly-shifted difference polynomial Es with R(u)-R(0) =
// u Es(u)/(den(u) den(0)), and R(1/w)/w^2 as a rational in w for the tail.
struct MLine {
    RationalFn1 line;
    Poly1 Es;
    real den0 = 0;
    real m0 = 0;  // R(0) = M(0)
    RationalFn1 rtail;
};

MLine make_mline(const RationalFn1& raw) {
    MLine m;
    m.line = raw;
    m.den0 = raw.den.coeff(0);
    real num0 = raw.num.coeff(0);
    m.m0 = num0 / m.den0;
    Poly1 E = raw.num * m.den0 - raw.den * num0;
    E.zero_coeff_checked(0);
    m.Es = E.shifted_down(1);

    const int dd = raw.den.degree();
    Poly1 numt = raw.num.trimmed();
    if (numt.degree() > dd - 2)
        throw std::logic_error("K-derivative line decays slower than u^-2");
    m.rtail = {numt.reversed(dd - 2), raw.den.reversed(dd)};
    return m;
}

real pow_int(real x, int k) {
    real r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

Scalar from_quad(const QuadResult& r, const char* what, real sign = 1.0) {
    if (!r.converged || !std::isfinite(r.value))
        throw std::runtime_error(std::string("quadrature failed: ") + what);
    return {sign * r.value, r.error};
}

}  // namespace

struct SaddleEngine::Cache {
    RationalFn1 d0_fn;   // over the whole line
    RationalFn1 g2_fn;   // over [0, inf)
    RationalFn1 g1_fn;   // over [-1, 1]; [0, 1] gives G1+
    RationalFn1 g2p_fn;  // over [0, 1]
    MLine m1, m2;
    std::optional<detail::LGrid> grid1, grid2;
    std::optional<Scalar> d0, logD0p, G1v, G2v, G1p, G2p, S1v, S2v, Fv;
    std::unique_ptr<SaddleEngine> refl;
};

SaddleEngine::SaddleEngine(const DSystem& d, QuadOptions opt)
    : d_(d), opt_(opt), h_(homogeneous_data(d_)), chart_(projectivize(d_)),
      kp_(k_partials(chart_)), cache_(std::make_unique<Cache>()) {
    H1Result h1 = check_H1(d_);
    if (!h1.holds) throw std::domain_error("SaddleEngine: H1 fails, g has a nonnegative value");
    H2Result h2 = check_H2(d_);
    if (!h2.holds) throw std::domain_error("SaddleEngine: H2 fails, leading form not positive");

    const int n = d_.n();
    const real lam = chart_.lambda;
    const Poly1& g = d_.g();
    Poly1 q0 = d_.q().slice_y0();
    Poly1 z = Poly1::monomial(1);

    auto op_scale = [](std::initializer_list<const Poly1*> ps) {
        real s = 0.0;
        for (const Poly1* p : ps) s = std::max(s, p->max_abs_coeff());
        return s;
    };
    {
        Poly1 A = q0 * h_.ell_z1;
        Poly1 B = (h_.qn_z1 * g) * lam;
        Poly1 N = A + B;
        N.zero_coeff_checked(2 * n + 1, 1e-8, op_scale({&A, &B}));
        cache_->d0_fn = {N.trimmed(), g * h_.ell_z1};
    }
    {
        Poly1 A = q0 * g.reflected();
        Poly1 B = q0.reflected() * g;
        Poly1 N = A + B;
        N.zero_coeff_checked(2 * n + 1, 1e-8, op_scale({&A, &B}));
        cache_->g2_fn = {N.trimmed(), g * g.reflected()};
    }
    {
        Poly1 A = h_.qn_1z * h_.ell_z1;
        Poly1 B = (h_.ell_1z * h_.ell_z1) * (1.0 + 1.0 / lam);
        Poly1 C = (z * h_.qn_z1) * h_.ell_1z;
        Poly1 N = A + B + C;
        N.zero_coeff_checked(0, 1e-8, op_scale({&A, &B, &C}));
        cache_->g1_fn = {N.shifted_down(1), h_.ell_1z * h_.ell_z1};
    }
    {
        Poly1 gstar = g.reversed(n + 1);
        Poly1 qstar = q0.reversed(n);
        Poly1 A = (gstar * g) * (lam + 1.0);
        Poly1 B = qstar * g;
        Poly1 C = (z * q0) * gstar;
        Poly1 N = A - B - C;
        N.zero_coeff_checked(0, 1e-8, op_scale({&A, &B, &C}));
        cache_->g2p_fn = {N.shifted_down(1), gstar * g};
    }
    cache_->m1 = make_mline(kp_.d1invK_line);
    cache_->m2 = make_mline(kp_.d2K_line);
}

SaddleEngine::~SaddleEngine() = default;
SaddleEngine::SaddleEngine(SaddleEngine&&) noexcept = default;
SaddleEngine& SaddleEngine::operator=(SaddleEngine&&) noexcept = default;

Branch SaddleEngine::branch() const {
    if (std::fabs(lambda() - 1.0) < kLambdaGuard) return Branch::eq1;
    return lambda() > 1.0 ? Branch::gt1 : Branch::lt1;
}

detail::LGrid& SaddleEngine::ensure_grid(int side) {
    auto& slot = side == 1 ? cache_->grid1 : cache_->grid2;
    if (!slot) slot = detail::build_L_grid(chart_, side);
    return *slot;
}

Scalar SaddleEngine::d0() {
    if (!cache_->d0) {
        auto f = [this](real x) { return cache_->d0_fn.eval(x); };
        real S = std::max(1.0, cache_->d0_fn.den.root_bound());
        cache_->d0 = from_quad(quad_line(f, opt_, S), "d0", -1.0);
    }
    return *cache_->d0;
}

Scalar SaddleEngine::log_delta0_plus() {
    if (!cache_->logD0p) {
        auto f = [this](real x) { return cache_->d0_fn.eval(x); };
        cache_->logD0p = from_quad(quad_a_inf(f, 0.0, opt_), "log Delta0+", -1.0);
    }
    return *cache_->logD0p;
}

Scalar SaddleEngine::G1() {
    if (!cache_->G1v) {
        auto f = [this](real x) { return cache_->g1_fn.eval(x); };
        cache_->G1v = from_quad(quad_finite(f, -1.0, 1.0, opt_), "G1");
    }
    return *cache_->G1v;
}

Scalar SaddleEngine::G2() {
    if (!cache_->G2v) {
        auto f = [this](real x) { return cache_->g2_fn.eval(x); };
        cache_->G2v = from_quad(quad_a_inf(f, 0.0, opt_), "G2");
    }
    return *cache_->G2v;
}

Scalar SaddleEngine::G1plus() {
    if (!cache_->G1p) {
        auto f = [this](real x) { return cache_->g1_fn.eval(x); };
        cache_->G1p = from_quad(quad_finite(f, 0.0, 1.0, opt_), "G1+");
    }
    return *cache_->G1p;
}

Scalar SaddleEngine::G2plus() {
    if (!cache_->G2p) {
        auto f = [this](real x) { return cache_->g2p_fn.eval(x); };
        cache_->G2p = from_quad(quad_finite(f, 0.0, 1.0, opt_), "G2+");
    }
    return *cache_->G2p;
}

Scalar SaddleEngine::G1minus() { return reflected_engine().G1plus(); }
Scalar SaddleEngine::G2minus() { return reflected_engine().G2plus(); }

SaddleEngine& SaddleEngine::reflected_engine() {
    if (!cache_->refl)
        cache_->refl = std::make_unique<SaddleEngine>(d_.reflected(), opt_);
    return *cache_->refl;
}

real SaddleEngine::L(int side, real u) { return std::exp(ensure_grid(side).eval(u)); }

real SaddleEngine::M(int side, real u) {
    const MLine& m = side == 1 ? cache_->m1 : cache_->m2;
    return L(side, u) * m.line.eval(u);
}

real SaddleEngine::M_at0(int side) const {
    return (side == 1 ? cache_->m1 : cache_->m2).m0;
}

real SaddleEngine::M2prime0() const { return kp_.d1K * kp_.d2K + kp_.d12K; }

real SaddleEngine::M_diff(int side, real u) {
    const MLine& m = side == 1 ? cache_->m1 : cache_->m2;
    real I = ensure_grid(side).eval(u);
    return m.line.eval(u) * std::expm1(I) + u * m.Es.eval(u) / (m.line.den.eval(u) * m.den0);
}

real SaddleEngine::G_plus_from_tail(int side) {
    detail::LGrid& g = ensure_grid(side);
    return g.Iplus + g.tail_T(0.0) - g.c[1] * std::log(g.Uref);
}

Scalar SaddleEngine::S_head_mid_tail(int side, real beta) {
    detail::LGrid& g = ensure_grid(side);
    const MLine& m = side == 1 ? cache_->m1 : cache_->m2;
    auto f = [&](real u) { return M_diff(side, u) * std::pow(u, -1.0 - beta); };
    QuadOptions part = opt_;
    part.abs_tol /= 3.0;
    part.rel_tol /= 3.0;

    // head over (0,1]: integrated by parts once,
    //   int_0^1 Mdiff u^(-1-beta) du
    //     = (int_0^1 Mdiff'(u) u^(-beta) du - Mdiff(1)) / beta,
    // because the difference itself sinks below grid roundoff as u -> 0 and
    // the u^(-1-beta) weight amplifies that noise without bound, while the
    // derivative stays O(1) there.
    Poly1 numd = m.line.num.derivative();
    Poly1 dend = m.line.den.derivative();
    Poly1 Esd = m.Es.derivative();
    auto fprime = [&](real u) {
        real I = g.eval(u);
        real dv = m.line.den.eval(u), nv = m.line.num.eval(u);
        real dp = dend.eval(u);
        real linep = (numd.eval(u) * dv - nv * dp) / (dv * dv);
        real es = m.Es.eval(u);
        real shift = ((es + u * Esd.eval(u)) * dv - u * es * dp) / (dv * dv * m.den0);
        return linep * std::expm1(I) + (nv / dv) * std::exp(I) * g.bracket.eval(u) + shift;
    };
    auto fw = [&](real u) { return fprime(u) * std::pow(u, -beta); };
    QuadResult head = quad_pow0(fw, 1.0, -beta, part);
    head.value = (head.value - M_diff(side, 1.0)) / beta;
    head.error /= beta;
    QuadResult mid = quad_finite(f, 1.0, g.Uref, part);
    real pref = std::pow(g.Uref, -1.0 - beta);
    auto ftail = [&](real w) {
        return std::exp(g.Iplus + g.tail_T(w)) * pref * m.rtail.eval(w);
    };
    QuadResult tail = quad_finite(ftail, 0.0, 1.0 / g.Uref, part);
    Scalar s = from_quad(head + mid + tail, side == 1 ? "S1" : "S2");
    s.value -= m.m0 * std::pow(g.Uref, -beta) / beta;
    s.err += g.grid_err;
    return s;
}

Scalar SaddleEngine::S(int side) {
    if (side == 1) {
        if (branch() != Branch::gt1)
            throw std::domain_error("S1 requires lambda > 1 outside the guard band");
        if (!cache_->S1v) cache_->S1v = S_head_mid_tail(1, 1.0 / lambda());
        return *cache_->S1v;
    }
    if (side == 2) {
        if (branch() != Branch::lt1)
            throw std::domain_error("S2 requires lambda < 1 outside the guard band");
        if (!cache_->S2v) cache_->S2v = S_head_mid_tail(2, lambda());
        return *cache_->S2v;
    }
    throw std::invalid_argument("S side must be 1 or 2");
}

Scalar SaddleEngine::F() {
    if (cache_->Fv) return *cache_->Fv;
    Scalar out;
    switch (branch()) {
        case Branch::eq1: {
            Scalar g2 = G2();
            real mp = M2prime0();
            out = {-g2.value * mp, g2.err * std::fabs(mp)};
            break;
        }
        case Branch::gt1: {
            Scalar s1 = S(1);
            Scalar s1r = reflected_engine().S(1);
            Scalar g1 = G1();
            real eg = std::exp(g1.value);
            out = {-s1.value + eg * s1r.value,
                   s1.err + eg * (s1r.err + std::fabs(s1r.value) * g1.err)};
            break;
        }
        case Branch::lt1: {
            Scalar s2 = S(2);
            Scalar s2r = reflected_engine().S(2);
            Scalar g2 = G2();
            real eg = std::exp(g2.value);
            out = {eg * s2.value - s2r.value,
                   s2r.err + eg * (s2.err + std::fabs(s2.value) * g2.err)};
            break;
        }
    }
    cache_->Fv = out;
    return out;
}

Scalar SaddleEngine::Delta0plus() {
    Scalar ld = log_delta0_plus();
    real v = std::exp(ld.value);
    return {v, v * ld.err};
}

Scalar SaddleEngine::Delta0minus() { return reflected_engine().Delta0plus(); }

Scalar SaddleEngine::Delta_branch_plus() {
    Scalar d0p = Delta0plus();
    switch (branch()) {
        case Branch::gt1: {
            Scalar g1p = G1plus();
            Scalar s1 = S(1);
            real e = std::exp(-g1p.value);
            real v = -lambda() * d0p.value * e * s1.value;
            real err = lambda() * (d0p.err * e * std::fabs(s1.value) +
                                   d0p.value * e * (s1.err + std::fabs(s1.value) * g1p.err));
            return {v, err};
        }
        case Branch::lt1: {
            Scalar g2p = G2plus();
            Scalar s2 = S(2);
            real e = std::exp(-g2p.value);
            real sq = d0p.value * d0p.value;
            real v = sq * e * s2.value;
            real err = 2.0 * d0p.value * d0p.err * e * std::fabs(s2.value) +
                       sq * e * (s2.err + std::fabs(s2.value) * g2p.err);
            return {v, err};
        }
        case Branch::eq1: {
            Scalar g2p = G2plus();
            real e = std::exp(-g2p.value);
            real sq = d0p.value * d0p.value;
            real mp = M2prime0();
            real v = sq * e * mp;
            real err = std::fabs(mp) * (2.0 * d0p.value * d0p.err * e + sq * e * g2p.err);
            return {v, err};
        }
    }
    return {};
}

Scalar SaddleEngine::Delta_branch_minus() { return reflected_engine().Delta_branch_plus(); }

CoefficientReport SaddleEngine::report() {
    CoefficientReport r;
    r.lambda = lambda();
    r.branch = branch();
    r.d0 = d0();
    r.d1 = F();
    r.G1 = G1();
    r.G2 = G2();
    r.G1plus = G1plus();
    r.G1minus = G1minus();
    r.G2plus = G2plus();
    r.G2minus = G2minus();
    r.Delta0plus = Delta0plus();
    r.Delta0minus = Delta0minus();
    r.Delta0 = {r.Delta0plus.value - r.Delta0minus.value, r.Delta0plus.err + r.Delta0minus.err};
    r.Delta_branch_plus = Delta_branch_plus();
    r.Delta_branch_minus = Delta_branch_minus();
    r.Delta_branch = {r.Delta_branch_plus.value - r.Delta_branch_minus.value,
                      r.Delta_branch_plus.err + r.Delta_branch_minus.err};
    r.stability = classify_stability(r);
    return r;
}

Scalar compute_d0(const DSystem& d, QuadOptions opt) { return SaddleEngine(d, opt).d0(); }

GSet compute_G(const DSystem& d, QuadOptions opt) {
    SaddleEngine e(d, opt);
    return {e.G1(), e.G2(), e.G1plus(), e.G1minus(), e.G2plus(), e.G2minus()};
}

FValue compute_F(const DSystem& d, QuadOptions opt) {
    SaddleEngine e(d, opt);
    return {e.F(), e.branch()};
}

DeltaSet compute_Delta(const DSystem& d, QuadOptions opt) {
    SaddleEngine e(d, opt);
    DeltaSet s;
    s.Delta0plus = e.Delta0plus();
    s.Delta0minus = e.Delta0minus();
    s.Delta0 = {s.Delta0plus.value - s.Delta0minus.value, s.Delta0plus.err + s.Delta0minus.err};
    s.branch = e.branch();
    s.branch_plus = e.Delta_branch_plus();
    s.branch_minus = e.Delta_branch_minus();
    s.branch_diff = {s.branch_plus.value - s.branch_minus.value,
                     s.branch_plus.err + s.branch_minus.err};
    return s;
}

real L_factor(const ProjectiveChart& c, int side, real u) {
    detail::LGrid g = detail::build_L_grid(c, side);
    return std::exp(g.eval(u));
}

CoefficientReport compute_coefficients(const DSystem& d, QuadOptions opt) {
    return SaddleEngine(d, opt).report();
}

Stability classify_stability(const CoefficientReport& r, real tol) {
    real t0 = std::max(tol, 10.0 * r.d0.err);
    if (r.d0.value < -t0) return Stability::stable;
    if (r.d0.value > t0) return Stability::unstable;
    real t1 = std::max(tol, 10.0 * r.d1.err);
    if (r.d1.value < -t1) return Stability::stable;
    if (r.d1.value > t1) return Stability::unstable;
    return Stability::undetermined;
}

namespace {

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::gt1: return "gt1";
        case Branch::lt1: return "lt1";
        case Branch::eq1: return "eq1";
    }
    return "?";
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::undetermined: return "undetermined";
    }
    return "?";
}

nlohmann::ordered_json scalar_json(const Scalar& s) {
    return nlohmann::ordered_json{{"value", s.value}, {"err", s.err}};
}

}  // namespace

std::string report_to_json(const CoefficientReport& r) {
    nlohmann::ordered_json j;
    j["lambda"] = r.lambda;
    j["branch"] = branch_name(r.branch);
    j["d0"] = scalar_json(r.d0);
    j["d1"] = scalar_json(r.d1);
    j["G1"] = scalar_json(r.G1);
    j["G2"] = scalar_json(r.G2);
    j["G1plus"] = scalar_json(r.G1plus);
    j["G1minus"] = scalar_json(r.G1minus);
    j["G2plus"] = scalar_json(r.G2plus);
    j["G2minus"] = scalar_json(r.G2minus);
    j["Delta0plus"] = scalar_json(r.Delta0plus);
    j["Delta0minus"] = scalar_json(r.Delta0minus);
    j["Delta0"] = scalar_json(r.Delta0);
    const char* tag = r.branch == Branch::gt1 ? "Delta1" : (r.branch == Branch::lt1 ? "Delta2" : "Delta3");
    j[std::string(tag) + "plus"] = scalar_json(r.Delta_branch_plus);
    j[std::string(tag) + "minus"] = scalar_json(r.Delta_branch_minus);
    j[tag] = scalar_json(r.Delta_branch);
    j["stability"] = stability_name(r.stability);
    return j.dump(2);
}

}  // namespace hemi
