#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dickehp/config.hpp"
#include "dickehp/errors.hpp"
#include "dickehp/sweep.hpp"

using namespace dickehp;
using doctest::Approx;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream is(path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "dickehp_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("ranges, lists and scalars expand") {
    const auto c = parse_config(json::parse(R"({"lambda": {"start": 0, "stop": 1, "steps": 5}})"));
    REQUIRE(c.lambdas.size() == 5);
    CHECK(c.lambdas[2] == Approx(0.5));
    CHECK(c.n_rows() == 5);
    CHECK(parse_config(json::parse(R"({"lambda": 0.3})")).lambdas.size() == 1);
    const auto d = parse_config(json::parse(
        R"({"model": "double-dicke", "radial": {"theta": "5pi/16", "r": [0.1, 0.2]}, "renyi": [2]})"));
    CHECK(d.radial);
    CHECK(d.theta == Approx(5 * std::numbers::pi / 16));
    CHECK(d.n_rows() == 2);
}

TEST_CASE("configuration errors") {
    auto bad = [](const char* text) { return parse_config(json::parse(text)); };
    CHECK_THROWS_AS(bad(R"({"model": "dicke"})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"lambda": []})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"lambda": [0.1], "lamda": 2})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"lambda": [-0.1]})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"lambda": [0.1], "omega": 0})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"lambda": [0.1], "mode": "ed"})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"lambda": [0.1], "n_max": 4})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"lambda": [0.1], "renyi": [1]})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"lambda": {"start": 0, "stop": 1}})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"model": "double-dicke", "lambda_c": [0.1]})"), ConfigError);
    CHECK_THROWS_AS(bad(R"({"model": "double-dicke", "lambda": [0.1]})"), ConfigError);
    CHECK_THROWS_AS(parse_angle(json("pi/x")), ConfigError);
}

TEST_CASE("key = value files") {
    const auto j = parse_key_value("# comment\nmodel = dicke\nlambda.start = 0\nlambda.stop = 1\nlambda.steps = 3\n");
    CHECK(parse_config(j).lambdas.size() == 3);
    CHECK_THROWS_AS(parse_key_value("lambda 0.1\n"), ConfigError);
}

TEST_CASE("hash ignores output settings but not physics") {
    const auto a = parse_config(json::parse(R"({"lambda": [0.1, 0.2]})"));
    const auto b = parse_config(json::parse(R"({"lambda": [0.1, 0.2], "out": "x.csv", "workers": 3, "format": "json"})"));
    const auto c = parse_config(json::parse(R"({"lambda": [0.1, 0.3]})"));
    const auto d = parse_config(json::parse(R"({"lambda": [0.1, 0.2], "seed": 9})"));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(a) != config_hash(d));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("golden thermodynamic sweep") {
    const auto cfg = parse_config(json::parse(R"({"lambda": {"start": 0, "stop": 1, "steps": 5}, "renyi": [2]})"));
    const auto res = run_sweep_rows(cfg);
    const std::string csv = render_csv(cfg, res.rows);
    const std::string golden = slurp(std::string(DICKEHP_TEST_DATA) + "/golden_dicke_thermo.csv");
    CHECK(csv == golden);
    CHECK(res.exit_code() == kExitOk);
}

TEST_CASE("worker count does not change the output") {
    auto cfg = parse_config(json::parse(
        R"({"model": "double-dicke", "lambda_c": {"start": 0, "stop": 1, "steps": 6}, "lambda_i": [0.2, 0.5, 0.9]})"));
    const std::string one = render_csv(cfg, run_sweep_rows(cfg).rows);
    cfg.workers = 3;
    CHECK(render_csv(cfg, run_sweep_rows(cfg).rows) == one);

    auto ed = parse_config(json::parse(R"({"mode": "ed", "lambda": [0.2, 0.5, 0.8], "n_spins": [2, 6]})"));
    const std::string e1 = render_csv(ed, run_sweep_rows(ed).rows);
    ed.workers = 2;
    CHECK(render_csv(ed, run_sweep_rows(ed).rows) == e1);
}

TEST_CASE("budget failures are recorded per row and set the exit code") {
    auto cfg = parse_config(json::parse(R"({"mode": "ed", "lambda": [0.3], "n_spins": [50], "budget_nnz": 200})"));
    const auto res = run_sweep_rows(cfg);
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].text("status") == "budget-exceeded");
    CHECK(res.exit_code() == kExitBudget);
}

TEST_CASE("CSV and JSON tables read back") {
    const auto cfg = parse_config(json::parse(R"({"lambda": {"start": 0.1, "stop": 0.4, "steps": 4}})"));
    const auto rows = run_sweep_rows(cfg).rows;
    const auto csv = scratch("rt.csv"), js = scratch("rt.json");
    write_atomic(csv.string(), render_csv(cfg, rows));
    write_atomic(js.string(), render_json(cfg, rows));
    for (const auto& path : {csv, js}) {
        const auto back = read_table(path.string());
        REQUIRE(back.size() == rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(back[i].number("hp") == rows[i].number("hp"));
            CHECK(back[i].text("phase") == rows[i].text("phase"));
        }
    }
    const auto doc = json::parse(slurp(js.string()));
    CHECK(doc["schema_version"] == kSchemaVersion);
    CHECK(doc["config_hash"] == config_hash(cfg));
}

TEST_CASE("fit subcommand recovers the exponent from a sweep") {
    json j;
    std::vector<double> lam;
    for (int i = 0; i <= 20; ++i) lam.push_back(0.5 - std::pow(10.0, -9.0 + 3.0 * i / 20.0));
    j["lambda"] = lam;
    const auto cfg = parse_config(j);
    const auto path = scratch("fit.csv");
    write_atomic(path.string(), render_csv(cfg, run_sweep_rows(cfg).rows));
    FitRequest req;
    req.input = path.string();
    req.critical = 0.5;
    const auto out = run_fit(req);
    CHECK(out["exponent"].get<double>() == Approx(-0.25).epsilon(0.02));
    req.window_hi = 2e-9;
    CHECK_THROWS_AS(run_fit(req), ConfigError);
    req.window_hi = 1.0;
    req.column = "nope";
    CHECK_THROWS_AS(run_fit(req), ConfigError);
}

TEST_CASE("quick figure run writes a manifest") {
    const auto dir = scratch("fig2");
    std::filesystem::remove_all(dir);
    FigureOptions opt;
    opt.out_dir = dir.string();
    opt.quick = true;
    std::ostringstream log;
    CHECK(reproduce_figure(2, opt, log) == kExitOk);
    const auto manifest = json::parse(slurp((dir / "manifest.json").string()));
    CHECK(manifest["status"] == "complete");
    CHECK(manifest["files"].size() == 6);
    CHECK(std::filesystem::exists(dir / "fig2_theta_pi4.csv"));
    CHECK_THROWS_AS(reproduce_figure(4, opt, log), ConfigError);
}

TEST_CASE("fit on a synthetic power-law file is exact") {
    const auto path = scratch("synthetic.csv");
    {
        std::ofstream os(path);
        os.precision(17);
        os << "# synthetic\nn_spins,hp,status\n";
        for (int n : {10, 20, 50, 100, 200, 500, 1000, 2000}) os << n << ',' << std::pow(n, 1.0 / 6.0) << ",ok\n";
    }
    FitRequest req;
    req.input = path.string();
    req.x = "n_spins";
    const auto out = run_fit(req);
    CHECK(out["exponent"].get<double>() == Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("thermodynamic λ sweep and π/4 radial sweep") {
    json j;
    j["lambda"] = {{"start", 0.0}, {"stop", 1.0}, {"steps", 101}};
    const auto rows = run_sweep_rows(parse_config(j)).rows;
    CHECK(rows.size() == 101);
    CHECK(rows[0].number("hp") == Approx(0.5));
    CHECK(rows[50].text("reason") == "critical-point");

    json r;
    r["model"] = "double-dicke";
    r["radial"] = {{"theta", "pi/4"}, {"r", {{"start", 0.0}, {"stop", 1.2}, {"steps", 121}}}};
    const auto rr = run_sweep_rows(parse_config(r)).rows;
    double best = 0.0, best_r = 0.0;
    for (const auto& row : rr) {
        const double hp = row.number("hp");
        if (std::isfinite(hp) && hp > best) {
            best = hp;
            best_r = row.number("r");
        }
    }
    // The grid brackets the double point; the maximum sits next to it.
    CHECK(std::abs(best_r - std::sqrt(0.5)) < 0.011);
    CHECK(best < 0.9473);
}

TEST_CASE("quick figures 1 and 3") {
    for (int id : {1, 3}) {
        const auto dir = scratch("fig" + std::to_string(id));
        std::filesystem::remove_all(dir);
        FigureOptions opt;
        opt.out_dir = dir.string();
        opt.quick = true;
        std::ostringstream log;
        CHECK(reproduce_figure(id, opt, log) == kExitOk);
        const auto manifest = json::parse(slurp((dir / "manifest.json").string()));
        CHECK(manifest["status"] == "complete");
        CHECK_FALSE(manifest["deviations"].empty());
    }
}
