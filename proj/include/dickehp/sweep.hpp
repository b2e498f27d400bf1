#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "dickehp/config.hpp"
#include "dickehp/dicke_ed.hpp"
#include "dickehp/sweep_row.hpp"

namespace dickehp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitSolver = 4;

inline constexpr int kSchemaVersion = 1;
const char* library_version();

// Row builders for the standard model. Failures are recorded in the
// status/reason columns: "error", "budget-exceeded" or "solver-failure".
SweepRow dicke_thermo_row(const DickeParams& p, std::span<const double> renyi_alphas);
// n_max = 0 converges the cutoff to `cutoff_tol` in hp.
SweepRow dicke_ed_row(const DickeParams& p, int n_spins, int n_max, double cutoff_tol,
                      const EDOptions& opt, std::span<const double> renyi_alphas);

struct SweepResult {
    std::vector<SweepRow> rows;  // grid order
    int warnings = 0;            // rows with status != ok or a cutoff warning
    int budget_failures = 0;
    int solver_failures = 0;

    [[nodiscard]] int exit_code() const;
};

// Evaluates every grid point on cfg.workers threads. ED points are
// scheduled largest first; rows come back in grid order.
SweepResult run_sweep_rows(const SweepConfig& cfg);

std::string render_csv(const SweepConfig& cfg, const std::vector<SweepRow>& rows);
std::string render_json(const SweepConfig& cfg, const std::vector<SweepRow>& rows);

// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, const std::string& content);

// Runs the sweep and writes cfg.out (stdout when empty). Returns the exit code.
int run_sweep(const SweepConfig& cfg, std::ostream& log);

// Reads a table written by run_sweep (CSV or JSON); '#' lines are skipped.
std::vector<SweepRow> read_table(const std::string& path);

enum class FitKind { PowerLaw, Log2Linear };

struct FitRequest {
    std::string input;
    std::string column = "hp";
    std::string x = "lambda";
    std::optional<double> critical;  // distance = |x − critical| when set
    double window_lo = 0.0;
    double window_hi = std::numeric_limits<double>::infinity();
    FitKind kind = FitKind::PowerLaw;  // Log2Linear fits column vs log₂(distance)
};

// Fit report as JSON. Throws ConfigError on malformed input or too few
// usable rows.
nlohmann::json run_fit(const FitRequest& req);

struct FigureOptions {
    std::string out_dir;
    int workers = 1;
    std::uint64_t seed = 20140101;
    std::uint64_t budget_nnz = 50'000'000;
    bool quick = false;  // coarser grids and smaller N, for smoke tests
};

// Writes the data files behind figure 1, 2 or 3 plus manifest.json.
// Returns 3 with partial output when a budget is exceeded.
int reproduce_figure(int figure, const FigureOptions& opt, std::ostream& log);

}  // namespace dickehp
