// Drives the installed command-line binary end to end. The path comes in
// through HEMI_CLI_PATH (set by the test harness).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "hemi/quadratic.hpp"
#include "test_util.hpp"

namespace {

std::string cli_path() {
#ifdef HEMI_CLI_PATH
    return HEMI_CLI_PATH;
#else
    const char* p = std::getenv("HEMI_CLI_PATH");
    REQUIRE(p != nullptr);
    return p;
#endif
}

int run(const std::string& args, std::string* err_text = nullptr) {
    std::string cmd = cli_path() + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    if (err_text) {
        std::ifstream f("cli_stderr.txt");
        std::stringstream ss;
        ss << f.rdbuf();
        *err_text = ss.str();
    }
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

nlohmann::json run_json(const std::string& args, int expect_code) {
    int code = run(args + " --out cli_out.json");
    CHECK(code == expect_code);
    return nlohmann::json::parse(read_file("cli_out.json"));
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string quad_spec(double a, double b, double e0, double e1, double e2) {
    nlohmann::ordered_json j;
    j["family"] = "quadratic";
    j["a"] = a;
    j["b"] = b;
    j["eps0"] = e0;
    j["eps1"] = e1;
    j["eps2"] = e2;
    return j.dump();
}

// n = 1 system with lambda = 1 exactly: dot x = y (y + 0.2 x) - 1 + 0.05 x - x^2,
// dot y = -2 x y
const char* kEq1System = R"({
  "n": 1,
  "f": [[0.0, 1.0], [0.2]],
  "g": [-1.0, 0.05, -1.0],
  "q": [[0.0], [-2.0]]
})";

// violates H1: g = x^2 - 1 is positive for |x| > 1
const char* kBadH1System = R"({
  "n": 1,
  "f": [[0.0, 1.0]],
  "g": [-1.0, 0.0, 1.0],
  "q": [[0.0], [-2.0]]
})";

}  // namespace

TEST_CASE("check: hypotheses pass and fail with witnesses") {
    write_file("cli_quad.json", quad_spec(-0.5, 0.5, 0, 0.01, 0));
    auto j = run_json("check --system cli_quad.json", 0);
    CHECK(j["pass"] == true);
    CHECK(j["H1"]["holds"] == true);
    CHECK(j["H2"]["holds"] == true);
    CHECK(j["system"]["n"] == 1);

    write_file("cli_bad_h1.json", kBadH1System);
    auto jb = run_json("check --system cli_bad_h1.json", 1);
    CHECK(jb["pass"] == false);
    CHECK(jb["H1"]["holds"] == false);
    REQUIRE(jb["H1"].contains("witness_x"));
    double wx = jb["H1"]["witness_x"].get<double>();
    CHECK(wx * wx - 1.0 >= -1e-9);  // g(witness) >= 0 up to rounding

    write_file("cli_malformed.json", "{ this is not json");
    std::string err;
    CHECK(run("check --system cli_malformed.json", &err) == 2);
    CHECK(err.find("malformed") != std::string::npos);

    CHECK(run("check --system cli_no_such_file.json") == 2);
    CHECK(run("check") == 2);  // missing required option

    // quadratic spec with eps0 != 0 has no D-system form to check
    write_file("cli_gap.json", quad_spec(-0.5, 0.5, 0.001, 0, 0));
    CHECK(run("check --system cli_gap.json", &err) == 2);
    CHECK(err.find("eps0") != std::string::npos);
}

TEST_CASE("coeffs: stability report and guard-band branch") {
    write_file("cli_rev.json", quad_spec(-0.5, 0.5, 0, 0, 0));
    auto j = run_json("coeffs --system cli_rev.json", 0);
    CHECK(j["branch"] == "gt1");
    CHECK(j["lambda"].get<double>() == doctest::Approx(3.0));
    CHECK(std::fabs(j["d0"]["value"].get<double>()) < 1e-8);
    CHECK(j["stability"] == "undetermined");

    write_file("cli_stab.json", quad_spec(-0.5, 0.5, 0, 0.01, 0));
    auto js = run_json("coeffs --system cli_stab.json", 0);
    double want = hemi::closed_forms({-0.5, 0.5, 0, 0.01, 0}).d0;
    CHECK(want < 0.0);
    CHECK(testutil::rel_err(js["d0"]["value"].get<double>(), want) < 1e-6);
    CHECK(js["stability"] == "stable");
    CHECK(js.contains("Delta1plus"));  // gt1 branch tagging

    write_file("cli_eq1.json", kEq1System);
    auto je = run_json("coeffs --system cli_eq1.json", 0);
    CHECK(je["branch"] == "eq1");
    CHECK(je["lambda"].get<double>() == doctest::Approx(1.0));
    CHECK(je.contains("Delta3"));
    CHECK_FALSE(je.contains("Delta1"));
}

TEST_CASE("verify-closed-forms: default pass, band skip, tightened tolerance") {
    auto j = run_json("verify-closed-forms --grid 2", 0);
    CHECK(j["pass"] == true);
    REQUIRE(j["rows"].size() == 4);
    for (const auto& r : j["rows"]) {
        CHECK(r["pass"] == true);
        CHECK(r["worst_rel_err"].get<double>() < 1e-6);
    }

    // a 3-point axis hits a = -1 exactly; those rows are skipped with a reason
    auto j3 = run_json("verify-closed-forms --grid 3", 0);
    int skipped = 0;
    for (const auto& r : j3["rows"])
        if (r.contains("skipped")) {
            ++skipped;
            CHECK(r["skipped"].get<std::string>().find("exclusion band") != std::string::npos);
        }
    CHECK(skipped == 3);
    CHECK(j3["pass"] == true);

    // quadrature cannot match closed forms to 1e-15; the mismatch must surface
    auto jt = run_json("verify-closed-forms --grid 2 --tol 1e-15", 1);
    CHECK(jt["pass"] == false);
}

TEST_CASE("maps: center-variety difference is flat zero in CSV") {
    write_file("cli_center.json", quad_spec(-0.5, 0.5, 0, 0, 0));
    int code = run("maps --system cli_center.json --map du --s-min 0.02 --s-max 0.15 "
                   "--grid 5 --tol-ode 1e-10 --out cli_maps.csv");
    CHECK(code == 0);
    auto rows = parse_csv(read_file("cli_maps.csv"));
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"s", "value", "err"});
    for (size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 3);
        CHECK(std::fabs(std::stod(rows[i][1])) < 1e-8);
    }

    // return map needs the invariant line
    write_file("cli_gap2.json", quad_spec(-0.5, 0.5, 0.001, 0, 0));
    CHECK(run("maps --system cli_gap2.json --map return") == 2);
    CHECK(run("maps --system cli_center.json --map nosuch") == 2);
}

TEST_CASE("scan: stability flips across the kernel direction and reruns are identical") {
    write_file("cli_scan.json", quad_spec(-0.5, 0.5, 0, 0, 0));
    const std::string args = "scan --system cli_scan.json --s-min -0.01 --s-max 0.01 "
                             "--grid 2 --workers 2 --tol-quad 1e-9";
    CHECK(run(args + " --out cli_scan1.csv") == 0);
    auto rows = parse_csv(read_file("cli_scan1.csv"));
    REQUIRE(rows.size() == 5);
    CHECK(rows[0][0] == "i");
    // columns: i,j,eps1,eps2,lambda,branch,d0,d0_err,d1,d1_err,stability
    for (size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 11);
        double e1 = std::stod(rows[i][2]), e2 = std::stod(rows[i][3]);
        double d0 = std::stod(rows[i][6]);
        CHECK(std::stod(rows[i][4]) == doctest::Approx(3.0));
        CHECK(rows[i][5] == "gt1");
        // d0 and eps1/sqrt(A1) + eps2/sqrt(A2) have opposite signs (a < 0)
        double mix = e1 / std::sqrt(0.75 - e1 * e1) + e2 / std::sqrt(3.0 - e2 * e2);
        CHECK(d0 * mix < 0.0);
        CHECK(rows[i][10] == (d0 < 0 ? "stable" : "unstable"));
    }

    CHECK(run(args + " --out cli_scan2.csv") == 0);
    CHECK(read_file("cli_scan1.csv") == read_file("cli_scan2.csv"));
}

TEST_CASE("hunt: starved budget reports a soft failure") {
    auto j = run_json("hunt --a -1.5 --b 1.0 --budget 12 --tol-ode 1e-10", 1);
    CHECK(j["success"] == false);
    CHECK(j["map_evals"].get<long>() <= 12);
    CHECK(j["counts"]["upper"].get<int>() == 0);
    REQUIRE(j["log"].is_array());
    bool exhausted = false;
    for (const auto& line : j["log"])
        if (line.get<std::string>().find("budget exhausted") != std::string::npos)
            exhausted = true;
    CHECK(exhausted);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("hunt --a -1.5") == 2);  // --b is required
}
