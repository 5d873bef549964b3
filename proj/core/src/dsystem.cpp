#include "hemi/dsystem.hpp"

#include <cmath>

#include <json.hpp>

namespace hemi {

DSystem::DSystem(int n, Poly2 f, Poly1 g, Poly2 q,
                 std::map<std::string, real> params, int degree_cap)
    : n_(n), f_(std::move(f)), g_(std::move(g)), q_(std::move(q)), params_(std::move(params)) {
    if (n_ < 1 || n_ % 2 == 0)
        throw std::invalid_argument("DSystem: n must be odd and positive");
    if (n_ + 1 > degree_cap)
        throw std::invalid_argument("DSystem: degree exceeds cap");
    if (f_.total_degree() > n_)
        throw std::invalid_argument("DSystem: deg f exceeds n");
    if (q_.total_degree() > n_)
        throw std::invalid_argument("DSystem: deg q exceeds n");
    if (g_.degree() > n_ + 1)
        throw std::invalid_argument("DSystem: deg g exceeds n+1");
    if (g_.coeff(n_ + 1) == 0.0)
        throw std::invalid_argument("DSystem: leading coefficient of g vanishes");
}

DSystem DSystem::reflected() const {
    return DSystem(n_, f_.reflected_x(), g_.reflected(), q_.reflected_x() * -1.0, params_);
}

HomogeneousData homogeneous_data(const DSystem& d) {
    HomogeneousData h;
    h.fn = d.f().homogeneous_part(d.n());
    h.qn = d.q().homogeneous_part(d.n());
    h.g_top = d.g_top();
    Poly2 x = Poly2::from_poly1_x(Poly1::monomial(1));
    Poly2 y = Poly2::from_poly1_y(Poly1::monomial(1));
    Poly2 xn1 = Poly2::from_poly1_x(Poly1::monomial(d.n() + 1, h.g_top));
    h.ell = y * h.fn - x * h.qn + xn1;
    h.ell_1z = h.ell.slice_x1();
    h.ell_z1 = h.ell.slice_y1();
    h.qn_1z = h.qn.slice_x1();
    h.qn_z1 = h.qn.slice_y1();
    return h;
}

H1Result check_H1(const DSystem& d) {
    PositivityWitness w = poly_positive_everywhere(d.g() * -1.0);
    return {w.holds, w.where};
}

H2Result check_H2(const DSystem& d) {
    HomogeneousData h = homogeneous_data(d);
    PositivityWitness w1 = poly_positive_everywhere(h.ell_1z);
    if (!w1.holds) return {false, 1.0, w1.where};
    PositivityWitness w2 = poly_positive_everywhere(h.ell_z1);
    if (!w2.holds) return {false, w2.where, 1.0};
    return {true, 0.0, 0.0};
}

namespace {

nlohmann::ordered_json poly2_to_json(const Poly2& p) {
    auto arr = nlohmann::ordered_json::array();
    for (int i = 0; i <= std::max(p.xdeg(), 0); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int j = 0; j <= std::max(p.ydeg(), 0); ++j) row.push_back(p.coeff(i, j));
        arr.push_back(row);
    }
    return arr;
}

Poly2 poly2_from_json(const nlohmann::json& j) {
    Poly2 p;
    int i = 0;
    for (const auto& row : j) {
        int k = 0;
        for (const auto& v : row) p.set_coeff(i, k++, v.get<real>());
        ++i;
    }
    return p;
}

}  // namespace

std::string dsystem_to_json(const DSystem& d) {
    nlohmann::ordered_json j;
    j["n"] = d.n();
    j["f"] = poly2_to_json(d.f());
    j["g"] = d.g().coeffs();
    j["q"] = poly2_to_json(d.q());
    auto params = nlohmann::ordered_json::object();
    for (const auto& [k, v] : d.params()) params[k] = v;
    j["params"] = params;
    return j.dump(2);
}

DSystem dsystem_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    Poly2 f = poly2_from_json(j.at("f"));
    Poly2 q = poly2_from_json(j.at("q"));
    Poly1 g(j.at("g").get<std::vector<real>>());
    std::map<std::string, real> params;
    if (j.contains("params"))
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
            params[it.key()] = it.value().get<real>();
    return DSystem(n, f, g, q, params);
}

}  // namespace hemi
