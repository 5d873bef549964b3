// Command-line front end: hypothesis checks, coefficient reports, closed-form
// verification, map sampling, parameter scans and limit-cycle hunts.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hemi/asymptotics.hpp"
#include "hemi/charts.hpp"
#include "hemi/dsystem.hpp"
#include "hemi/flow.hpp"
#include "hemi/quadratic.hpp"
#include "hemi/saddle_coeffs.hpp"
#include "hemi/samples.hpp"

using nlohmann::ordered_json;

namespace {

std::string timestamp_utc() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::invalid_argument("cannot open output file " + out_path);
    f << text;
    if (text.empty() || text.back() != '\n') f << '\n';
}

struct LoadedSystem {
    bool quadratic = false;
    hemi::QuadParams qp;
    std::unique_ptr<hemi::DSystem> sys;  // set when the D-system form exists
};

LoadedSystem load_system(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open system file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    std::string text = ss.str();

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed system JSON: ") + e.what());
    }

    LoadedSystem ls;
    if (j.is_object() && j.contains("family")) {
        if (j["family"] != "quadratic")
            throw std::invalid_argument("unknown family: " + j["family"].dump());
        ls.quadratic = true;
        ls.qp.a = j.value("a", -0.5);
        ls.qp.b = j.value("b", 0.5);
        ls.qp.eps0 = j.value("eps0", 0.0);
        ls.qp.eps1 = j.value("eps1", 0.0);
        ls.qp.eps2 = j.value("eps2", 0.0);
        if (ls.qp.eps0 == 0.0)
            ls.sys = std::make_unique<hemi::DSystem>(hemi::make_quadratic(ls.qp));
        return ls;
    }
    ls.sys = std::make_unique<hemi::DSystem>(hemi::dsystem_from_json(text));
    return ls;
}

const hemi::DSystem& need_dsystem(const LoadedSystem& ls, const char* who) {
    if (!ls.sys)
        throw std::invalid_argument(std::string(who) +
                                    ": needs eps0 = 0 (no D-system form otherwise)");
    return *ls.sys;
}

const char* stability_str(hemi::Stability s) {
    switch (s) {
        case hemi::Stability::stable: return "stable";
        case hemi::Stability::unstable: return "unstable";
        case hemi::Stability::undetermined: return "undetermined";
    }
    return "?";
}

const char* branch_str(hemi::Branch b) {
    switch (b) {
        case hemi::Branch::gt1: return "gt1";
        case hemi::Branch::lt1: return "lt1";
        case hemi::Branch::eq1: return "eq1";
    }
    return "?";
}

std::vector<hemi::real> log_spaced(hemi::real lo, hemi::real hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw std::invalid_argument("need 0 < s-min < s-max and grid >= 2");
    std::vector<hemi::real> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<hemi::real>(i) / (n - 1));
    return g;
}

int cmd_check(const std::string& system_path, const std::string& out) {
    LoadedSystem ls = load_system(system_path);
    const hemi::DSystem& d = need_dsystem(ls, "check");
    hemi::H1Result h1 = hemi::check_H1(d);
    hemi::H2Result h2 = hemi::check_H2(d);
    ordered_json j;
    j["timestamp"] = timestamp_utc();
    j["system"] = ordered_json::parse(hemi::dsystem_to_json(d));
    j["H1"]["holds"] = h1.holds;
    if (!h1.holds) j["H1"]["witness_x"] = h1.witness_x;
    j["H2"]["holds"] = h2.holds;
    if (!h2.holds) {
        j["H2"]["witness_x"] = h2.witness_x;
        j["H2"]["witness_y"] = h2.witness_y;
    }
    j["pass"] = h1.holds && h2.holds;
    emit(out, j.dump(2));
    return h1.holds && h2.holds ? 0 : 1;
}

int cmd_coeffs(const std::string& system_path, const std::string& out, hemi::real tol_quad) {
    LoadedSystem ls = load_system(system_path);
    const hemi::DSystem& d = need_dsystem(ls, "coeffs");
    hemi::QuadOptions opt;
    opt.abs_tol = opt.rel_tol = tol_quad;
    hemi::CoefficientReport rep = hemi::compute_coefficients(d, opt);
    ordered_json j;
    j["timestamp"] = timestamp_utc();
    // keep the parsed report alive across the loop; items() only references it
    ordered_json body = ordered_json::parse(hemi::report_to_json(rep));
    for (auto& [k, v] : body.items()) j[k] = v;
    emit(out, j.dump(2));
    return 0;
}

int cmd_verify_closed_forms(const std::string& out, int grid, hemi::real tol_quad,
                            hemi::real tol, unsigned seed) {
    hemi::QuadOptions opt;
    opt.abs_tol = opt.rel_tol = tol_quad;

    struct Row {
        hemi::QuadParams p;
        bool skipped = false;
        std::string reason;
        hemi::real worst = 0.0;
        std::string worst_name;
        bool pass = true;
    };
    std::vector<hemi::QuadParams> points;
    for (int i = 0; i < grid; ++i)
        for (int k = 0; k < grid; ++k) {
            hemi::QuadParams p;
            p.a = -1.9 + 1.8 * (i + 0.5) / grid;
            p.b = 0.1 + 1.8 * (k + 0.5) / grid;
            points.push_back(p);
        }
    if (seed != 0) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<hemi::real> ua(-1.9, -0.1), ub(0.1, 1.9),
            ue(-0.01, 0.01);
        for (int i = 0; i < 10; ++i) {
            hemi::QuadParams p;
            p.a = ua(rng);
            p.b = ub(rng);
            p.eps1 = ue(rng);
            p.eps2 = ue(rng);
            points.push_back(p);
        }
    }

    std::vector<Row> rows;
    bool all_pass = true;
    for (const auto& p0 : points) {
        Row r;
        r.p = p0;
        if (std::fabs(p0.a + 1.0) < 0.05) {
            r.skipped = true;
            r.reason = "inside the a = -1 exclusion band";
            rows.push_back(r);
            continue;
        }
        hemi::ClosedForms cf = hemi::closed_forms(p0);
        hemi::ClosedForms qf = hemi::closed_forms_quadrature(p0, opt);
        auto check = [&](const char* name, hemi::real got, hemi::real want) {
            hemi::real rel = std::fabs(got - want) / std::max(hemi::real(1e-12), std::fabs(want));
            if (std::fabs(want) < 1e-13) rel = std::fabs(got - want);
            if (rel > r.worst) {
                r.worst = rel;
                r.worst_name = name;
            }
            if (rel > tol) r.pass = false;
        };
        check("d0", qf.d0, cf.d0);
        check("G1", qf.G1, cf.G1);
        check("G2", qf.G2, cf.G2);
        if (cf.m_branch) {
            check("m0+", qf.m0p, cf.m0p);
            check("m1+", qf.m1p, cf.m1p);
            check("m2+", qf.m2p, cf.m2p);
        } else {
            check("n0+", qf.n0p, cf.n0p);
            check("n1+", qf.n1p, cf.n1p);
            check("n2+", qf.n2p, cf.n2p);
        }
        all_pass = all_pass && r.pass;
        rows.push_back(r);
    }

    ordered_json j;
    j["timestamp"] = timestamp_utc();
    j["tolerance"] = tol;
    j["rows"] = ordered_json::array();
    for (const auto& r : rows) {
        ordered_json e;
        e["a"] = r.p.a;
        e["b"] = r.p.b;
        e["eps1"] = r.p.eps1;
        e["eps2"] = r.p.eps2;
        if (r.skipped) {
            e["skipped"] = r.reason;
        } else {
            e["pass"] = r.pass;
            e["worst_rel_err"] = r.worst;
            e["worst_quantity"] = r.worst_name;
        }
        j["rows"].push_back(e);
    }
    j["pass"] = all_pass;
    emit(out, j.dump(2));
    return all_pass ? 0 : 1;
}

int cmd_maps(const std::string& system_path, const std::string& out, const std::string& kind,
             hemi::real s_min, hemi::real s_max, int grid, hemi::real tol_ode) {
    LoadedSystem ls = load_system(system_path);
    std::vector<hemi::real> s = log_spaced(s_min, s_max, grid);
    hemi::MapSamples m;
    if (ls.quadratic) {
        const hemi::QuadParams& qp = ls.qp;
        if (kind == "dplus") m = hemi::dulac_map(qp, hemi::TimeDir::forward, s, tol_ode);
        else if (kind == "dminus") m = hemi::dulac_map(qp, hemi::TimeDir::backward, s, tol_ode);
        else if (kind == "du") m = hemi::dulac_difference(qp, hemi::Side::upper, s, tol_ode);
        else if (kind == "dell") m = hemi::dulac_difference(qp, hemi::Side::lower, s, tol_ode);
        else if (kind == "return") m = hemi::return_map(qp, s, tol_ode);
        else throw std::invalid_argument("unknown map kind " + kind);
    } else {
        const hemi::DSystem& d = need_dsystem(ls, "maps");
        hemi::ChartAtlas atlas = hemi::poincare_charts(d);
        const std::string label = "dsystem";
        if (kind == "dplus")
            m = hemi::dulac_map(atlas, label, hemi::TimeDir::forward, s, tol_ode);
        else if (kind == "dminus")
            m = hemi::dulac_map(atlas, label, hemi::TimeDir::backward, s, tol_ode);
        else if (kind == "du")
            m = hemi::dulac_difference(atlas, label, hemi::Side::upper, s, tol_ode);
        else if (kind == "dell")
            m = hemi::dulac_difference(atlas, label, hemi::Side::lower, s, tol_ode);
        else if (kind == "return")
            m = hemi::return_map(atlas, label, s, tol_ode);
        else throw std::invalid_argument("unknown map kind " + kind);
    }
    emit(out, hemi::map_samples_to_csv(m));
    return 0;
}

int cmd_scan(const std::string& system_path, const std::string& out, hemi::real e_min,
             hemi::real e_max, int grid, int workers, hemi::real tol_quad) {
    LoadedSystem ls = load_system(system_path);
    if (!ls.quadratic)
        throw std::invalid_argument("scan: needs a quadratic-family system spec");
    if (ls.qp.eps0 != 0.0) throw std::invalid_argument("scan: needs eps0 = 0");
    if (grid < 1) throw std::invalid_argument("scan: grid must be >= 1");
    hemi::QuadOptions opt;
    opt.abs_tol = opt.rel_tol = tol_quad;

    struct Cell {
        hemi::real eps1 = 0, eps2 = 0;
        bool ok = false;
        std::string error;
        hemi::CoefficientReport rep;
    };
    const int total = grid * grid;
    std::vector<Cell> cells(total);
    for (int idx = 0; idx < total; ++idx) {
        int i = idx / grid, k = idx % grid;
        cells[idx].eps1 = grid == 1 ? e_min : e_min + (e_max - e_min) * i / (grid - 1);
        cells[idx].eps2 = grid == 1 ? e_min : e_min + (e_max - e_min) * k / (grid - 1);
    }

    std::atomic<int> cursor{0};
    auto work = [&] {
        for (;;) {
            int idx = cursor.fetch_add(1);
            if (idx >= total) return;
            Cell& c = cells[idx];
            hemi::QuadParams p = ls.qp;
            p.eps1 = c.eps1;
            p.eps2 = c.eps2;
            try {
                c.rep = hemi::compute_coefficients(hemi::make_quadratic(p), opt);
                c.ok = true;
            } catch (const std::exception& e) {
                c.error = e.what();
            }
        }
    };
    int nw = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int i = 1; i < nw; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::ostringstream csv;
    csv.precision(17);
    csv << "i,j,eps1,eps2,lambda,branch,d0,d0_err,d1,d1_err,stability\n";
    for (int idx = 0; idx < total; ++idx) {
        const Cell& c = cells[idx];
        csv << idx / grid << ',' << idx % grid << ',' << c.eps1 << ',' << c.eps2 << ',';
        if (c.ok) {
            csv << c.rep.lambda << ',' << branch_str(c.rep.branch) << ',' << c.rep.d0.value
                << ',' << c.rep.d0.err << ',' << c.rep.d1.value << ',' << c.rep.d1.err << ','
                << stability_str(c.rep.stability) << '\n';
        } else {
            csv << ",,,,," << "error:" << c.error << '\n';
        }
    }
    emit(out, csv.str());
    return 0;
}

int cmd_hunt(hemi::real a0, hemi::real b0, long budget, hemi::real tol_ode,
             const std::string& out) {
    hemi::HuntScales sc;
    sc.tol = tol_ode;
    hemi::HuntResult r = hemi::hunt_simultaneous(a0, b0, sc, budget);
    ordered_json j;
    j["timestamp"] = timestamp_utc();
    j["success"] = r.success;
    j["mirrored"] = r.mirrored;
    j["mu_star"] = {{"a", r.mu_star.a},
                    {"b", r.mu_star.b},
                    {"eps0", r.mu_star.eps0},
                    {"eps1", r.mu_star.eps1},
                    {"eps2", r.mu_star.eps2}};
    j["nu_star"] = {r.nu_star.nu1, r.nu_star.nu2, r.nu_star.nu3, r.nu_star.nu4, r.nu_star.nu5};
    j["s_points"] = {r.s3, r.s2, r.s1};
    j["map_evals"] = r.map_evals;
    j["upper"] = ordered_json::parse(hemi::zero_report_to_json(r.upper));
    j["lower"] = ordered_json::parse(hemi::zero_report_to_json(r.lower));
    j["counts"] = {{"upper", r.upper.count()}, {"lower", r.lower.count()}};
    j["log"] = r.log;
    emit(out, j.dump(2));
    return r.success ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dulac-map coefficients, stability and cyclicity of hemicycles"};
    app.require_subcommand(1);

    std::string system_path, out_path, map_kind = "du";
    hemi::real tol_quad = 1e-10, tol_ode = 1e-12;
    hemi::real s_min = 0.01, s_max = 0.16;
    hemi::real scan_min = -0.02, scan_max = 0.02;
    int grid_maps = 12, grid_scan = 11, grid_verify = 5;
    int workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    unsigned seed = 0;
    hemi::real verify_tol = 1e-6;
    hemi::real hunt_a = -1.5, hunt_b = 1.0;
    long hunt_budget = 10000;

    auto* c_check = app.add_subcommand("check", "verify hypotheses H1 and H2");
    c_check->add_option("--system", system_path, "system spec JSON file")->required();
    c_check->add_option("--out", out_path, "output path (default stdout)");

    auto* c_coeffs = app.add_subcommand("coeffs", "full saddle-coefficient report");
    c_coeffs->add_option("--system", system_path)->required();
    c_coeffs->add_option("--out", out_path);
    c_coeffs->add_option("--tol-quad", tol_quad, "quadrature tolerance");

    auto* c_verify =
        app.add_subcommand("verify-closed-forms", "quadrature vs. closed forms over a grid");
    c_verify->add_option("--out", out_path);
    c_verify->add_option("--grid", grid_verify, "points per (a, b) axis");
    c_verify->add_option("--tol-quad", tol_quad);
    c_verify->add_option("--tol", verify_tol, "pass/fail relative tolerance");
    c_verify->add_option("--seed", seed, "nonzero adds 10 random rows");

    auto* c_maps = app.add_subcommand("maps", "sample a passage or return map to CSV");
    c_maps->add_option("--system", system_path)->required();
    c_maps->add_option("--map", map_kind, "dplus | dminus | du | dell | return");
    c_maps->add_option("--s-min", s_min);
    c_maps->add_option("--s-max", s_max);
    c_maps->add_option("--grid", grid_maps, "number of s samples");
    c_maps->add_option("--tol-ode", tol_ode);
    c_maps->add_option("--out", out_path);

    auto* c_scan = app.add_subcommand("scan", "d0/d1/stability over an (eps1, eps2) grid");
    c_scan->add_option("--system", system_path)->required();
    c_scan->add_option("--s-min", scan_min, "eps range lower end");
    c_scan->add_option("--s-max", scan_max, "eps range upper end");
    c_scan->add_option("--grid", grid_scan, "points per eps axis");
    c_scan->add_option("--workers", workers);
    c_scan->add_option("--tol-quad", tol_quad);
    c_scan->add_option("--out", out_path);

    auto* c_hunt = app.add_subcommand("hunt", "three-alternation limit-cycle hunt");
    c_hunt->add_option("--a", hunt_a, "center family a0")->required();
    c_hunt->add_option("--b", hunt_b, "center family b0")->required();
    c_hunt->add_option("--budget", hunt_budget, "map evaluation budget");
    c_hunt->add_option("--tol-ode", tol_ode);
    c_hunt->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_check->parsed()) return cmd_check(system_path, out_path);
        if (c_coeffs->parsed()) return cmd_coeffs(system_path, out_path, tol_quad);
        if (c_verify->parsed())
            return cmd_verify_closed_forms(out_path, grid_verify, tol_quad, verify_tol, seed);
        if (c_maps->parsed())
            return cmd_maps(system_path, out_path, map_kind, s_min, s_max, grid_maps, tol_ode);
        if (c_scan->parsed())
            return cmd_scan(system_path, out_path, scan_min, scan_max, grid_scan, workers,
                            tol_quad);
        if (c_hunt->parsed()) return cmd_hunt(hunt_a, hunt_b, hunt_budget, tol_ode, out_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
