#include "hemi/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hemi {

Poly1 Poly1::monomial(int k, real v) {
    std::vector<real> c(k + 1, 0.0);
    c[k] = v;
    return Poly1(std::move(c));
}

void Poly1::set_coeff(int k, real v) {
    if (k >= (int)c_.size()) c_.resize(k + 1, 0.0);
    c_[k] = v;
}

int Poly1::degree() const {
    for (int k = (int)c_.size() - 1; k >= 0; --k)
        if (c_[k] != 0.0) return k;
    return -1;
}

real Poly1::leading() const {
    int d = degree();
    return d < 0 ? 0.0 : c_[d];
}

real Poly1::max_abs_coeff() const {
    real m = 0.0;
    for (real v : c_) m = std::max(m, std::abs(v));
    return m;
}

real Poly1::eval(real x) const {
    real r = 0.0;
    for (int k = (int)c_.size() - 1; k >= 0; --k) r = r * x + c_[k];
    return r;
}

Poly1 Poly1::derivative() const {
    if (c_.size() <= 1) return Poly1({0.0});
    std::vector<real> d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * (real)k;
    return Poly1(std::move(d));
}

Poly1 Poly1::reflected() const {
    std::vector<real> d = c_;
    for (size_t k = 1; k < d.size(); k += 2) d[k] = -d[k];
    return Poly1(std::move(d));
}

Poly1 Poly1::reversed(int m) const {
    if (degree() > m) throw std::invalid_argument("Poly1::reversed: degree exceeds m");
    std::vector<real> d(m + 1, 0.0);
    for (int k = 0; k <= std::min<int>(m, (int)c_.size() - 1); ++k) d[m - k] = c_[k];
    return Poly1(std::move(d));
}

Poly1 Poly1::shifted_down(int k) const {
    real scale = max_abs_coeff();
    for (int i = 0; i < k && i < (int)c_.size(); ++i)
        if (std::abs(c_[i]) > 1e-8 * scale)
            throw std::invalid_argument("Poly1::shifted_down: low-order coefficient not negligible");
    std::vector<real> d;
    if ((int)c_.size() > k) d.assign(c_.begin() + k, c_.end());
    else d.assign(1, 0.0);
    return Poly1(std::move(d));
}

void Poly1::zero_coeff_checked(int k, real rel_tol, real scale_floor) {
    // scale_floor lets callers supply the operand magnitude when the whole
    // polynomial may cancel to roundoff residue
    real scale = std::max(max_abs_coeff(), scale_floor);
    if (k < (int)c_.size()) {
        if (std::abs(c_[k]) > rel_tol * std::max<real>(scale, 1e-300))
            throw std::logic_error("Poly1::zero_coeff_checked: coefficient not numerically zero");
        c_[k] = 0.0;
    }
}

real Poly1::root_bound() const {
    int d = degree();
    if (d <= 0) return 1.0;
    real lead = std::abs(c_[d]), m = 0.0;
    for (int k = 0; k < d; ++k) m = std::max(m, std::abs(c_[k]));
    return 1.0 + m / lead;
}

Poly1 Poly1::operator+(const Poly1& o) const {
    std::vector<real> d(std::max(c_.size(), o.c_.size()), 0.0);
    for (size_t k = 0; k < d.size(); ++k) d[k] = coeff((int)k) + o.coeff((int)k);
    return Poly1(std::move(d));
}

Poly1 Poly1::operator-(const Poly1& o) const {
    std::vector<real> d(std::max(c_.size(), o.c_.size()), 0.0);
    for (size_t k = 0; k < d.size(); ++k) d[k] = coeff((int)k) - o.coeff((int)k);
    return Poly1(std::move(d));
}

Poly1 Poly1::operator*(const Poly1& o) const {
    int da = degree(), db = o.degree();
    if (da < 0 || db < 0) return Poly1({0.0});
    std::vector<real> d(da + db + 1, 0.0);
    for (int i = 0; i <= da; ++i)
        for (int j = 0; j <= db; ++j) d[i + j] += c_[i] * o.c_[j];
    return Poly1(std::move(d));
}

Poly1 Poly1::operator*(real s) const {
    std::vector<real> d = c_;
    for (real& v : d) v *= s;
    return Poly1(std::move(d));
}

Poly1 Poly1::trimmed(real rel_eps) const {
    real scale = max_abs_coeff();
    std::vector<real> d = c_;
    int last = -1;
    for (int k = 0; k < (int)d.size(); ++k) {
        if (std::abs(d[k]) <= rel_eps * scale) d[k] = 0.0;
        if (d[k] != 0.0) last = k;
    }
    d.resize(last + 1 >= 1 ? last + 1 : 1, 0.0);
    return Poly1(std::move(d));
}

void poly_divmod(const Poly1& a, const Poly1& b, Poly1& q, Poly1& r) {
    int db = b.degree();
    if (db < 0) throw std::invalid_argument("poly_divmod: division by zero polynomial");
    std::vector<real> rem(a.coeffs());
    int da = a.degree();
    if (da < db) {
        q = Poly1({0.0});
        r = a;
        return;
    }
    std::vector<real> quot(da - db + 1, 0.0);
    real lead = b.coeff(db);
    for (int k = da; k >= db; --k) {
        real f = rem[k] / lead;
        quot[k - db] = f;
        if (f == 0.0) continue;
        for (int j = 0; j <= db; ++j) rem[k - db + j] -= f * b.coeff(j);
        rem[k] = 0.0;
    }
    rem.resize(db >= 1 ? db : 1, 0.0);
    q = Poly1(std::move(quot));
    r = Poly1(std::move(rem));
}

std::vector<Poly1> sturm_chain(const Poly1& p) {
    std::vector<Poly1> chain;
    Poly1 p0 = p.trimmed();
    if (p0.is_zero()) return chain;
    chain.push_back(p0);
    Poly1 p1 = p0.derivative().trimmed();
    if (p1.is_zero()) return chain;
    chain.push_back(p1);
    real scale = std::max(p0.max_abs_coeff(), 1.0);
    while (true) {
        Poly1 q, r;
        poly_divmod(chain[chain.size() - 2], chain.back(), q, r);
        r = (r * -1.0).trimmed(1e-12);
        if (r.is_zero() || r.max_abs_coeff() < 1e-13 * scale) break;
        chain.push_back(r);
        if (chain.back().degree() == 0) break;
    }
    return chain;
}

namespace {

int sign_of(real v, real tol = 0.0) {
    if (v > tol) return 1;
    if (v < -tol) return -1;
    return 0;
}

int variations(const std::vector<int>& signs) {
    int n = 0, prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++n;
        prev = s;
    }
    return n;
}

int variations_at(const std::vector<Poly1>& chain, real x) {
    std::vector<int> s;
    s.reserve(chain.size());
    for (const Poly1& p : chain) s.push_back(sign_of(p.eval(x)));
    return variations(s);
}

int variations_at_inf(const std::vector<Poly1>& chain, int dir) {
    std::vector<int> s;
    s.reserve(chain.size());
    for (const Poly1& p : chain) {
        int d = p.degree();
        int sg = sign_of(p.leading());
        if (dir < 0 && d >= 0 && (d % 2) == 1) sg = -sg;
        s.push_back(sg);
    }
    return variations(s);
}

}  // namespace

int sturm_count(const std::vector<Poly1>& chain, real a, real b) {
    if (chain.empty()) return 0;
    return variations_at(chain, a) - variations_at(chain, b);
}

int sturm_count_all(const std::vector<Poly1>& chain) {
    if (chain.empty()) return 0;
    return variations_at_inf(chain, -1) - variations_at_inf(chain, +1);
}

std::vector<real> real_roots(const Poly1& p, real tol) {
    std::vector<real> roots;
    Poly1 q = p.trimmed();
    if (q.degree() <= 0) return roots;
    auto chain = sturm_chain(q);
    real B = q.root_bound() * (1.0 + 1e-9) + 1.0;

    struct Seg { real a, b; int n; };
    std::vector<Seg> stack{{-B, B, sturm_count(chain, -B, B)}};
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.n == 0) continue;
        if (s.n == 1 || s.b - s.a < tol) {
            // refine a single root (or give up splitting) by sign bisection
            real a = s.a, b = s.b;
            real fa = q.eval(a);
            if (q.eval(a) * q.eval(b) <= 0.0) {
                for (int it = 0; it < 200 && b - a > tol * std::max<real>(1.0, std::abs(a)); ++it) {
                    real m = 0.5 * (a + b);
                    real fm = q.eval(m);
                    if (fa * fm <= 0.0) { b = m; } else { a = m; fa = fm; }
                }
                roots.push_back(0.5 * (a + b));
            } else {
                // even-multiplicity root: narrow by Sturm counts
                while (b - a > tol * std::max<real>(1.0, std::abs(a))) {
                    real m = 0.5 * (a + b);
                    if (sturm_count(chain, a, m) >= 1) b = m;
                    else a = m;
                }
                roots.push_back(0.5 * (a + b));
            }
            continue;
        }
        real m = 0.5 * (s.a + s.b);
        int left = sturm_count(chain, s.a, m);
        stack.push_back({s.a, m, left});
        stack.push_back({m, s.b, s.n - left});
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

PositivityWitness poly_positive_everywhere(const Poly1& p) {
    PositivityWitness w;
    Poly1 q = p.trimmed();
    if (q.is_zero()) return {false, 0.0, 0.0};
    real v0 = q.eval(0.0);
    if (v0 <= 0.0) return {false, 0.0, v0};
    int d = q.degree();
    if (d % 2 == 1 || q.leading() < 0.0) {
        // odd degree or negative leading coeff: negative somewhere far out
        real B = q.root_bound() + 1.0;
        real x = q.eval(B) <= 0.0 ? B : -B;
        return {false, x, q.eval(x)};
    }
    auto chain = sturm_chain(q);
    if (sturm_count_all(chain) == 0) return {true, 0.0, 0.0};
    auto roots = real_roots(q);
    real best_x = 0.0, best_v = std::numeric_limits<real>::infinity();
    for (real r : roots) {
        for (real x : {r, r - 1e-9, r + 1e-9}) {
            real v = q.eval(x);
            if (v < best_v) { best_v = v; best_x = x; }
        }
    }
    return {false, best_x, best_v};
}

Poly2 Poly2::constant(real v) {
    Poly2 p;
    p.c_[0] = v;
    return p;
}

Poly2 Poly2::from_poly1_x(const Poly1& p) {
    int d = std::max(p.degree(), 0);
    Poly2 q(d, 0);
    for (int k = 0; k <= d; ++k) q.set_coeff(k, 0, p.coeff(k));
    return q;
}

Poly2 Poly2::from_poly1_y(const Poly1& p) {
    int d = std::max(p.degree(), 0);
    Poly2 q(0, d);
    for (int k = 0; k <= d; ++k) q.set_coeff(0, k, p.coeff(k));
    return q;
}

real Poly2::coeff(int i, int j) const {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return 0.0;
    return c_[i * ny_ + j];
}

void Poly2::set_coeff(int i, int j, real v) {
    if (i >= nx_ || j >= ny_) {
        int nnx = std::max(nx_, i + 1), nny = std::max(ny_, j + 1);
        std::vector<real> nc(nnx * nny, 0.0);
        for (int a = 0; a < nx_; ++a)
            for (int b = 0; b < ny_; ++b) nc[a * nny + b] = c_[a * ny_ + b];
        nx_ = nnx;
        ny_ = nny;
        c_ = std::move(nc);
    }
    c_[i * ny_ + j] = v;
}

void Poly2::add_coeff(int i, int j, real v) { set_coeff(i, j, coeff(i, j) + v); }

int Poly2::total_degree() const {
    int d = -1;
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j)
            if (c_[i * ny_ + j] != 0.0) d = std::max(d, i + j);
    return d;
}

real Poly2::max_abs_coeff() const {
    real m = 0.0;
    for (real v : c_) m = std::max(m, std::abs(v));
    return m;
}

real Poly2::eval(real x, real y) const {
    real r = 0.0;
    for (int i = nx_ - 1; i >= 0; --i) {
        real row = 0.0;
        for (int j = ny_ - 1; j >= 0; --j) row = row * y + c_[i * ny_ + j];
        r = r * x + row;
    }
    return r;
}

Poly2 Poly2::dx() const {
    if (nx_ == 1) return Poly2();
    Poly2 q(nx_ - 2, ny_ - 1);
    for (int i = 1; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) q.set_coeff(i - 1, j, c_[i * ny_ + j] * (real)i);
    return q;
}

Poly2 Poly2::dy() const {
    if (ny_ == 1) return Poly2();
    Poly2 q(nx_ - 1, ny_ - 2);
    for (int i = 0; i < nx_; ++i)
        for (int j = 1; j < ny_; ++j) q.set_coeff(i, j - 1, c_[i * ny_ + j] * (real)j);
    return q;
}

Poly2 Poly2::reflected_x() const {
    Poly2 q(nx_ - 1, ny_ - 1);
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j)
            q.set_coeff(i, j, (i % 2 == 0 ? 1.0 : -1.0) * c_[i * ny_ + j]);
    return q;
}

Poly2 Poly2::homogeneous_part(int k) const {
    Poly2 q(std::min(nx_ - 1, k), std::min(ny_ - 1, k));
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j)
            if (i + j == k) q.set_coeff(i, j, c_[i * ny_ + j]);
    return q;
}

Poly1 Poly2::slice_y0() const {
    std::vector<real> d(nx_, 0.0);
    for (int i = 0; i < nx_; ++i) d[i] = c_[i * ny_ + 0];
    return Poly1(std::move(d));
}

Poly1 Poly2::slice_x0() const {
    std::vector<real> d(ny_, 0.0);
    for (int j = 0; j < ny_; ++j) d[j] = c_[j];
    return Poly1(std::move(d));
}

Poly1 Poly2::slice_x1() const {
    std::vector<real> d(ny_, 0.0);
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) d[j] += c_[i * ny_ + j];
    return Poly1(std::move(d));
}

Poly1 Poly2::slice_y1() const {
    std::vector<real> d(nx_, 0.0);
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) d[i] += c_[i * ny_ + j];
    return Poly1(std::move(d));
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 q(std::max(nx_, o.nx_) - 1, std::max(ny_, o.ny_) - 1);
    for (int i = 0; i < std::max(nx_, o.nx_); ++i)
        for (int j = 0; j < std::max(ny_, o.ny_); ++j)
            q.set_coeff(i, j, coeff(i, j) + o.coeff(i, j));
    return q;
}

Poly2 Poly2::operator-(const Poly2& o) const {
    Poly2 q(std::max(nx_, o.nx_) - 1, std::max(ny_, o.ny_) - 1);
    for (int i = 0; i < std::max(nx_, o.nx_); ++i)
        for (int j = 0; j < std::max(ny_, o.ny_); ++j)
            q.set_coeff(i, j, coeff(i, j) - o.coeff(i, j));
    return q;
}

Poly2 Poly2::operator*(const Poly2& o) const {
    Poly2 q(nx_ + o.nx_ - 2, ny_ + o.ny_ - 2);
    for (int i = 0; i < nx_; ++i)
        for (int j = 0; j < ny_; ++j) {
            real v = c_[i * ny_ + j];
            if (v == 0.0) continue;
            for (int a = 0; a < o.nx_; ++a)
                for (int b = 0; b < o.ny_; ++b)
                    if (o.c_[a * o.ny_ + b] != 0.0)
                        q.add_coeff(i + a, j + b, v * o.c_[a * o.ny_ + b]);
        }
    return q;
}

Poly2 Poly2::operator*(real s) const {
    Poly2 q = *this;
    for (real& v : q.c_) v *= s;
    return q;
}

}  // namespace hemi
