#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dickehp/config.hpp"
#include "dickehp/errors.hpp"
#include "dickehp/sweep.hpp"

using namespace dickehp;
using nlohmann::json;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::uint64_t> budget_nnz;
    std::string out;
    std::string format;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
    auto* opt = cmd->add_option("--config", c.config, "sweep configuration (JSON or key = value)");
    if (needs_config) opt->required();
    cmd->add_option("--seed", c.seed, "seed for the eigensolver start vectors");
    cmd->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--budget-nnz", c.budget_nnz, "largest Hamiltonian, in stored nonzeros")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out, "output path (stdout when omitted)");
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

SweepConfig load(const Common& c) {
    json j = load_config_file(c.config);
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    if (c.seed) j["seed"] = *c.seed;
    if (c.workers) j["workers"] = *c.workers;
    if (c.budget_nnz) j["budget_nnz"] = *c.budget_nnz;
    if (!c.out.empty()) j["out"] = c.out;
    if (!c.format.empty()) j["format"] = c.format;
    return parse_config(j);
}

void emit(const std::string& out, const std::string& body) {
    if (out.empty()) std::cout << body;
    else write_atomic(out, body);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heisenberg uncertainty and entanglement in Dicke models"};
    app.set_version_flag("--version", std::string(library_version()));
    app.require_subcommand(1);

    Common sweep_opts;
    auto* sweep = app.add_subcommand("sweep", "evaluate a parameter sweep");
    add_common(sweep, sweep_opts, true);

    Common fit_opts;
    FitRequest req;
    std::optional<double> critical;
    std::string kind = "power-law";
    auto* fit = app.add_subcommand("fit", "fit a critical exponent to a sweep table");
    fit->add_option("--input", req.input, "CSV or JSON written by `sweep`")->required();
    fit->add_option("--column", req.column, "quantity to fit");
    fit->add_option("--x", req.x, "control parameter column");
    fit->add_option("--critical", critical, "fit against |x - critical|");
    fit->add_option("--window-lo", req.window_lo, "smallest distance kept");
    fit->add_option("--window-hi", req.window_hi, "largest distance kept");
    fit->add_option("--kind", kind, "power-law or log2-linear")
        ->check(CLI::IsMember({"power-law", "log2-linear"}));
    fit->add_option("--out", fit_opts.out, "output path (stdout when omitted)");

    Common fig_opts;
    int figure_id = 0;
    bool quick = false;
    auto* figure = app.add_subcommand("figure", "regenerate the data behind a figure");
    figure->add_option("id", figure_id, "figure number")->required()->check(CLI::Range(1, 3));
    figure->add_option("--seed", fig_opts.seed, "seed for the eigensolver start vectors");
    figure->add_option("--workers", fig_opts.workers, "worker threads")->check(CLI::PositiveNumber);
    figure->add_option("--budget-nnz", fig_opts.budget_nnz, "largest Hamiltonian, in stored nonzeros")
        ->check(CLI::PositiveNumber);
    figure->add_option("--out", fig_opts.out, "output directory")->required();
    figure->add_flag("--quick", quick, "coarse grids and small N");

    Common val_opts;
    auto* validate = app.add_subcommand("validate-config", "check a configuration and print it normalized");
    add_common(validate, val_opts, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*sweep) {
            return run_sweep(load(sweep_opts), std::cerr);
        }
        if (*fit) {
            req.critical = critical;
            req.kind = kind == "log2-linear" ? FitKind::Log2Linear : FitKind::PowerLaw;
            emit(fit_opts.out, run_fit(req).dump(2) + "\n");
            return kExitOk;
        }
        if (*figure) {
            FigureOptions fo;
            fo.out_dir = fig_opts.out;
            fo.quick = quick;
            if (fig_opts.seed) fo.seed = *fig_opts.seed;
            if (fig_opts.workers) fo.workers = *fig_opts.workers;
            if (fig_opts.budget_nnz) fo.budget_nnz = *fig_opts.budget_nnz;
            return reproduce_figure(figure_id, fo, std::cerr);
        }
        if (*validate) {
            const SweepConfig cfg = load(val_opts);
            json report;
            report["valid"] = true;
            report["rows"] = cfg.n_rows();
            report["config_hash"] = config_hash(cfg);
            report["config"] = cfg.canonical;
            emit(val_opts.out, report.dump(2) + "\n");
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ConvergenceError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}
