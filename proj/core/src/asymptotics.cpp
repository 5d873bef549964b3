#include "hemi/asymptotics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

#include "hemi/quad.hpp"

namespace hemi {

real compensator(real s, real alpha) {
    if (!(s > 0.0)) throw std::domain_error("compensator: s must be positive");
    real ls = std::log(s);
    if (alpha == 0.0) return -ls;
    return std::expm1(-alpha * ls) / alpha;
}

real gamma_fn(real x) {
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("gamma_fn: pole at nonpositive integer");
    return std::tgamma(x);
}

real mellin_hat(const TaylorFn& f, real alpha, real x, int k, bool regularized) {
    real nearest = std::round(alpha);
    if (nearest >= 0.0 && std::fabs(alpha - nearest) < kMellinPoleGuard) {
        if (!regularized)
            throw std::domain_error("mellin_hat: alpha at a nonnegative-integer pole");
        int i0 = static_cast<int>(nearest);
        return f.taylor(i0) * std::pow(x, i0);
    }
    if (k < 0) k = std::max(0, static_cast<int>(std::floor(alpha)) + 1);
    if (!(static_cast<real>(k) > alpha))
        throw std::invalid_argument("mellin_hat: need k > alpha");

    std::vector<real> t(k);
    for (int i = 0; i < k; ++i) t[i] = f.taylor(i);

    real head = 0.0;
    for (int i = 0; i < k; ++i) head += t[i] * std::pow(x, i) / (static_cast<real>(i) - alpha);

    if (x == 0.0) return head;

    // remainder: integral over tau in (0,1] of (f - T)(x tau) tau^(-1-alpha),
    // behaving like tau^(k-1-alpha) at 0. Direct subtraction of the Taylor
    // polynomial turns to pure roundoff once |t_k (x tau)^k| falls near
    // machine noise, and the weight then amplifies that noise without bound,
    // so the range below a cutoff tc is summed termwise:
    //   integral over (0, tc] = sum_{i >= k} t_i x^i tc^(i-alpha) / (i-alpha).
    const int kmax = k + 48;
    std::vector<real> c(kmax);
    for (int i = 0; i < k; ++i) c[i] = t[i];
    real growth = 0.0;
    for (int i = k; i < kmax; ++i) c[i] = f.taylor(i);
    for (int i = 1; i < kmax; ++i)
        if (c[i] != 0.0) growth = std::max(growth, std::pow(std::fabs(c[i]), 1.0 / i));

    // keep |x tc| at half the estimated convergence radius
    real tc = 0.5;
    if (growth * std::fabs(x) > 1.0) tc = 0.5 / (growth * std::fabs(x));

    const real w = x * tc;
    const real tcma = std::pow(tc, -alpha);
    real series = 0.0, wi = std::pow(w, k), tail = 0.0;
    for (int i = k; i < kmax; ++i) {
        real term = c[i] * wi * tcma / (static_cast<real>(i) - alpha);
        series += term;
        if (i >= kmax - 6) tail = std::max(tail, std::fabs(term));
        wi *= w;
    }
    if (tail > 1e-11 * (1.0 + std::fabs(head) + std::fabs(series)))
        throw std::runtime_error("mellin_hat: series tail did not converge");

    auto rem = [&](real tau) {
        real u = x * tau;
        real v = f.eval(u);
        real p = 0.0;
        for (int i = k - 1; i >= 0; --i) p = p * u + c[i];
        return (v - p) * std::pow(tau, -1.0 - alpha);
    };
    QuadOptions opt;
    QuadResult r = quad_finite(rem, tc, 1.0, opt);
    if (!r.converged) throw std::runtime_error("mellin_hat: quadrature failed");
    return head + series + r.value;
}

FitModel select_model(real lambda) {
    FitModel m;
    m.lambda = lambda;
    if (std::fabs(lambda - 1.0) < 1e-3)
        m.id = ModelId::M3;
    else
        m.id = lambda > 1.0 ? ModelId::M1 : ModelId::M2;
    return m;
}

namespace {

std::vector<real> basis_at(ModelId id, real lambda, real s) {
    real sl = std::pow(s, lambda);
    switch (id) {
        case ModelId::M0: return {1.0, sl};
        case ModelId::M1: return {1.0, sl, std::pow(s, lambda + 1.0)};
        case ModelId::M2: return {1.0, sl, std::pow(s, 2.0 * lambda)};
        case ModelId::M3: {
            real s1 = std::pow(s, lambda + 1.0);
            return {1.0, sl, s1 * compensator(s, 1.0 - lambda), s1};
        }
    }
    return {};
}

struct LinearFit {
    std::vector<real> coeffs, stderrs;
    real resid_max = 0, resid_ss = 0, condition = 0;
    bool rank_ok = true;
};

LinearFit linear_solve(const MapSamples& m, ModelId id, real lambda) {
    const int n = static_cast<int>(m.rows.size());
    const int p = static_cast<int>(basis_at(id, lambda, 1.0).size());
    // Samples of a map with positive exponent span many decades, so rows are
    // weighted by an inverse scale blending the reported error with a relative
    // floor; the vmax term caps the weight spread so near-zero rows cannot
    // dominate.
    real vmax = 0.0;
    for (const auto& row : m.rows) vmax = std::max(vmax, std::fabs(row.value));
    Eigen::MatrixXd A(n, p);
    Eigen::VectorXd y(n);
    std::vector<real> w(n);
    for (int r = 0; r < n; ++r) {
        real scale = m.rows[r].err + 1e-3 * (std::fabs(m.rows[r].value) + 1e-6 * vmax);
        w[r] = scale > 0.0 ? 1.0 / scale : 1.0;
        auto row = basis_at(id, lambda, m.rows[r].s);
        for (int c = 0; c < p; ++c) A(r, c) = w[r] * row[c];
        y(r) = w[r] * m.rows[r].value;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    LinearFit out;
    real smax = svd.singularValues()(0);
    real smin = svd.singularValues()(p - 1);
    out.condition = smin > 0 ? smax / smin : std::numeric_limits<real>::infinity();
    if (!(smin > 1e-13 * smax)) {
        out.rank_ok = false;
        return out;
    }
    Eigen::VectorXd c = svd.solve(y);
    Eigen::VectorXd resid = y - A * c;
    out.coeffs.assign(c.data(), c.data() + p);
    // resid_max is reported in value units; the weighted sum drives the
    // exponent search.
    for (int r = 0; r < n; ++r)
        out.resid_max = std::max(out.resid_max, std::fabs(resid(r)) / w[r]);
    out.resid_ss = resid.squaredNorm();
    real sigma2 = n > p ? out.resid_ss / (n - p) : 0.0;
    Eigen::VectorXd inv2 = svd.singularValues().array().square().inverse();
    Eigen::MatrixXd cov = svd.matrixV() * inv2.asDiagonal() * svd.matrixV().transpose() * sigma2;
    out.stderrs.resize(p);
    for (int j = 0; j < p; ++j) out.stderrs[j] = std::sqrt(std::max(cov(j, j), 0.0));
    return out;
}

}  // namespace

FitResult fit_expansion(const MapSamples& samples, const FitModel& model) {
    const int p = static_cast<int>(basis_at(model.id, model.lambda, 1.0).size());
    if (static_cast<int>(samples.rows.size()) < 2 * p)
        throw std::invalid_argument("fit_expansion: need at least 2x samples per coefficient");
    for (const auto& r : samples.rows)
        if (!(r.s > 0.0)) throw std::invalid_argument("fit_expansion: s must be positive");

    real lambda = model.lambda;
    if (model.lambda_free) {
        real lo = model.lambda / 2.0, hi = model.lambda * 2.0;
        if (lo > hi) std::swap(lo, hi);
        auto rss = [&](real lam) {
            LinearFit f = linear_solve(samples, model.id, lam);
            return f.rank_ok ? f.resid_ss : std::numeric_limits<real>::max();
        };
        const real gr = (std::sqrt(5.0) - 1.0) / 2.0;
        real a = lo, b = hi;
        real c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        real f1 = rss(c1), f2 = rss(c2);
        for (int it = 0; it < 80 && (b - a) > 1e-10 * std::max(1.0, std::fabs(b)); ++it) {
            if (f1 < f2) {
                b = c2; c2 = c1; f2 = f1;
                c1 = b - gr * (b - a); f1 = rss(c1);
            } else {
                a = c1; c1 = c2; f1 = f2;
                c2 = a + gr * (b - a); f2 = rss(c2);
            }
        }
        lambda = (a + b) / 2.0;
    }

    LinearFit fit = linear_solve(samples, model.id, lambda);
    if (!fit.rank_ok)
        throw std::runtime_error("fit_expansion: rank-deficient design matrix");
    FitResult r;
    r.model = model.id;
    r.lambda = lambda;
    r.coeffs = std::move(fit.coeffs);
    r.stderrs = std::move(fit.stderrs);
    r.resid_max = fit.resid_max;
    r.condition = fit.condition;
    return r;
}

std::string fit_result_to_json(const FitResult& r) {
    static const char* names[] = {"M0", "M1", "M2", "M3"};
    nlohmann::ordered_json j;
    j["model"] = names[static_cast<int>(r.model)];
    j["lambda"] = r.lambda;
    j["coeffs"] = r.coeffs;
    j["stderr"] = r.stderrs;
    j["resid_max"] = r.resid_max;
    j["condition"] = r.condition;
    return j.dump(2);
}

std::string map_kind_name(MapKind k) {
    switch (k) {
        case MapKind::DplusUpper: return "Dplus_u";
        case MapKind::DminusUpper: return "Dminus_u";
        case MapKind::DiffUpper: return "Du";
        case MapKind::DiffLower: return "Dell";
        case MapKind::ReturnUpper: return "return_u";
    }
    return "?";
}

std::string map_samples_to_csv(const MapSamples& m) {
    std::ostringstream os;
    os.precision(17);
    os << "s,value,err\n";
    for (const auto& r : m.rows) os << r.s << "," << r.value << "," << r.err << "\n";
    return os.str();
}

}  // namespace hemi
