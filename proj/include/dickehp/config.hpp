#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "dickehp/double_dicke.hpp"

namespace dickehp {

enum class Model { Dicke, DoubleDicke };
enum class OutputFormat { Csv, Json };

std::string to_string(Model m);
std::string to_string(SweepMode m);
std::string to_string(OutputFormat f);

struct SweepConfig {
    Model model = Model::Dicke;
    SweepMode mode = SweepMode::Thermo;

    // Standard model.
    double omega = 1.0;
    double omega0 = 1.0;
    std::vector<double> lambdas;

    // Double model: either a radial cut or a λ_C × λ_I grid (λ_C outer).
    double omega_cav = 1.0;
    double omega0_c = 1.0;
    double omega0_i = 1.0;
    bool radial = false;
    double theta = 0.0;
    std::vector<double> radii;
    std::vector<double> lambda_c_values;
    std::vector<double> lambda_i_values;

    // Exact diagonalization.
    std::vector<int> n_spins;
    int n_max = 0;  // 0: converge the cutoff automatically (standard model)
    double cutoff_tol = 1e-6;
    double eig_tol = 1e-10;
    std::uint64_t seed = 20140101;
    std::uint64_t budget_nnz = 50'000'000;

    std::vector<double> renyi;
    OutputFormat format = OutputFormat::Csv;
    std::string out;
    int workers = 1;

    // Normalized configuration; its hash goes into output headers.
    nlohmann::json canonical;

    [[nodiscard]] std::size_t n_rows() const;
};

// Reads JSON, or `key = value` lines with dotted keys for nesting
// (`lambda.start = 0`). Values on the right are parsed as JSON when
// possible and kept as strings otherwise. Throws ConfigError.
nlohmann::json load_config_file(const std::string& path);
nlohmann::json parse_key_value(const std::string& text);

// Validates and expands a configuration. Throws ConfigError.
SweepConfig parse_config(const nlohmann::json& j);

// Parses an angle given as a number (radians) or as "pi/4", "5pi/16",
// "3*pi/8" and the like.
double parse_angle(const nlohmann::json& v);

// 64-bit FNV-1a of the canonical configuration, as 16 hex digits. Output
// location, format and worker count do not enter the hash.
std::string config_hash(const SweepConfig& cfg);

}  // namespace dickehp
