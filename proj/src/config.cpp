#include "dickehp/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "dickehp/errors.hpp"

namespace dickehp {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "model", "mode", "omega", "omega0", "lambda", "omega_cav", "omega0_c", "omega0_i",
    "radial", "lambda_c", "lambda_i", "n_spins", "n_max", "cutoff_tol", "tol", "seed",
    "budget_nnz", "renyi", "format", "out", "workers"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("config: '" + key + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError("config: '" + key + "' must be finite");
    return v;
}

double positive(const json& j, const std::string& key) {
    const double v = number(j, key);
    if (!(v > 0.0)) throw ConfigError("config: '" + key + "' must be positive");
    return v;
}

std::uint64_t unsigned_integer(const json& j, const std::string& key) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (v >= 0.0 && v < 1.8e19 && std::floor(v) == v) return static_cast<std::uint64_t>(v);
    }
    throw ConfigError("config: '" + key + "' must be a nonnegative integer");
}

// Number, list of numbers, or {"start", "stop", "steps"}.
std::vector<double> values(const json& j, const std::string& key) {
    std::vector<double> out;
    if (j.is_number()) {
        out.push_back(number(j, key));
    } else if (j.is_array()) {
        for (const auto& v : j) out.push_back(number(v, key));
    } else if (j.is_object()) {
        for (const auto& [k, _] : j.items())
            if (k != "start" && k != "stop" && k != "steps")
                throw ConfigError("config: unknown range key '" + key + "." + k + "'");
        if (!j.contains("start") || !j.contains("stop") || !j.contains("steps"))
            throw ConfigError("config: range '" + key + "' needs start, stop and steps");
        const double a = number(j["start"], key + ".start");
        const double b = number(j["stop"], key + ".stop");
        const auto steps = unsigned_integer(j["steps"], key + ".steps");
        if (steps > 10'000'000) throw ConfigError("config: range '" + key + "' has too many steps");
        for (std::uint64_t i = 0; i < steps; ++i)
            out.push_back(steps == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(steps - 1));
    } else {
        throw ConfigError("config: '" + key + "' must be a number, a list or a range");
    }
    if (out.empty()) throw ConfigError("config: grid '" + key + "' is empty");
    return out;
}

std::vector<double> nonnegative_values(const json& j, const std::string& key) {
    std::vector<double> v = values(j, key);
    for (double x : v)
        if (x < 0.0) throw ConfigError("config: '" + key + "' values must be >= 0");
    return v;
}

std::string text(const json& j, const std::string& key) {
    if (!j.is_string()) throw ConfigError("config: '" + key + "' must be a string");
    return j.get<std::string>();
}

}  // namespace

std::string to_string(Model m) { return m == Model::Dicke ? "dicke" : "double-dicke"; }
std::string to_string(SweepMode m) { return m == SweepMode::Thermo ? "thermo" : "ed"; }
std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

std::size_t SweepConfig::n_rows() const {
    const std::size_t per_n = mode == SweepMode::ED ? std::max<std::size_t>(n_spins.size(), 1) : 1;
    if (model == Model::Dicke) return lambdas.size() * per_n;
    if (radial) return radii.size() * per_n;
    return lambda_c_values.size() * lambda_i_values.size() * per_n;
}

double parse_angle(const json& v) {
    if (v.is_number()) return number(v, "theta");
    if (!v.is_string()) throw ConfigError("config: angle must be a number or a string like \"pi/4\"");
    std::string s;
    for (char c : v.get<std::string>())
        if (!std::isspace(static_cast<unsigned char>(c)) && c != '*') s += c;
    const auto pos = s.find("pi");
    if (pos == std::string::npos) {
        try {
            std::size_t used = 0;
            const double x = std::stod(s, &used);
            if (used == s.size()) return x;
        } catch (const std::exception&) {
        }
        throw ConfigError("config: cannot parse angle '" + v.get<std::string>() + "'");
    }
    double num = 1.0, den = 1.0;
    try {
        const std::string head = s.substr(0, pos);
        const std::string tail = s.substr(pos + 2);
        if (!head.empty()) num = std::stod(head);
        if (!tail.empty()) {
            if (tail[0] != '/') throw ConfigError("bad");
            den = std::stod(tail.substr(1));
        }
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse angle '" + v.get<std::string>() + "'");
    }
    if (den == 0.0) throw ConfigError("config: angle has a zero denominator");
    return num * std::numbers::pi / den;
}

json parse_key_value(const std::string& content) {
    json root = json::object();
    std::istringstream is(content);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");

        json value;
        try {
            value = json::parse(raw);
        } catch (const json::parse_error&) {
            value = raw;  // bare words such as dicke or pi/4
        }
        json* node = &root;
        std::size_t start = 0;
        while (true) {
            const auto dot = key.find('.', start);
            const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (part.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": bad key '" + key + "'");
            if (dot == std::string::npos) {
                (*node)[part] = value;
                break;
            }
            if (!node->contains(part)) (*node)[part] = json::object();
            node = &(*node)[part];
            if (!node->is_object())
                throw ConfigError("config line " + std::to_string(lineno) + ": '" + part + "' is not a table");
            start = dot + 1;
        }
    }
    return root;
}

json load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    const std::string content = ss.str();
    const auto first = content.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && content[first] == '{') {
        try {
            return json::parse(content);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config: invalid JSON: ") + e.what());
        }
    }
    return parse_key_value(content);
}

SweepConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    for (const auto& [k, _] : j.items())
        if (!kKnownKeys.count(k)) throw ConfigError("config: unknown key '" + k + "'");

    SweepConfig c;
    json canon = json::object();

    const std::string model = j.contains("model") ? text(j["model"], "model") : "dicke";
    if (model == "dicke") c.model = Model::Dicke;
    else if (model == "double-dicke") c.model = Model::DoubleDicke;
    else throw ConfigError("config: model must be 'dicke' or 'double-dicke'");
    const std::string mode = j.contains("mode") ? text(j["mode"], "mode") : "thermo";
    if (mode == "thermo") c.mode = SweepMode::Thermo;
    else if (mode == "ed") c.mode = SweepMode::ED;
    else throw ConfigError("config: mode must be 'thermo' or 'ed'");
    canon["model"] = model;
    canon["mode"] = mode;

    auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            if (j.contains(k)) throw ConfigError(std::string("config: '") + k + "' does not apply to model " + model);
    };

    if (c.model == Model::Dicke) {
        forbid({"omega_cav", "omega0_c", "omega0_i", "radial", "lambda_c", "lambda_i"});
        if (j.contains("omega")) c.omega = positive(j["omega"], "omega");
        if (j.contains("omega0")) c.omega0 = positive(j["omega0"], "omega0");
        if (!j.contains("lambda")) throw ConfigError("config: empty grid, 'lambda' is required");
        c.lambdas = nonnegative_values(j["lambda"], "lambda");
        canon["omega"] = c.omega;
        canon["omega0"] = c.omega0;
        canon["lambda"] = c.lambdas;
    } else {
        forbid({"omega", "omega0", "lambda"});
        if (j.contains("omega_cav")) c.omega_cav = positive(j["omega_cav"], "omega_cav");
        if (j.contains("omega0_c")) c.omega0_c = positive(j["omega0_c"], "omega0_c");
        if (j.contains("omega0_i")) c.omega0_i = positive(j["omega0_i"], "omega0_i");
        canon["omega_cav"] = c.omega_cav;
        canon["omega0_c"] = c.omega0_c;
        canon["omega0_i"] = c.omega0_i;
        const bool has_grid = j.contains("lambda_c") || j.contains("lambda_i");
        if (j.contains("radial") == has_grid)
            throw ConfigError("config: give either 'radial' or both 'lambda_c' and 'lambda_i' (empty grid)");
        if (j.contains("radial")) {
            const json& r = j["radial"];
            if (!r.is_object() || !r.contains("theta") || !r.contains("r"))
                throw ConfigError("config: 'radial' needs 'theta' and 'r'");
            for (const auto& [k, _] : r.items())
                if (k != "theta" && k != "r") throw ConfigError("config: unknown key 'radial." + k + "'");
            c.radial = true;
            c.theta = parse_angle(r["theta"]);
            if (!(c.theta >= 0.0 && c.theta <= std::numbers::pi / 2 + 1e-15))
                throw ConfigError("config: radial.theta must lie in [0, pi/2]");
            c.radii = nonnegative_values(r["r"], "radial.r");
            canon["radial"] = {{"theta", c.theta}, {"r", c.radii}};
        } else {
            if (!j.contains("lambda_c") || !j.contains("lambda_i"))
                throw ConfigError("config: a grid needs both 'lambda_c' and 'lambda_i'");
            c.lambda_c_values = nonnegative_values(j["lambda_c"], "lambda_c");
            c.lambda_i_values = nonnegative_values(j["lambda_i"], "lambda_i");
            canon["lambda_c"] = c.lambda_c_values;
            canon["lambda_i"] = c.lambda_i_values;
        }
    }

    if (c.mode == SweepMode::ED) {
        if (!j.contains("n_spins")) throw ConfigError("config: ED sweeps need 'n_spins'");
        const json& ns = j["n_spins"];
        std::vector<json> items;
        if (ns.is_array()) items.assign(ns.begin(), ns.end());
        else items.push_back(ns);
        for (const auto& v : items) {
            const auto n = unsigned_integer(v, "n_spins");
            if (n < 1 || n > 1'000'000) throw ConfigError("config: n_spins must be in [1, 1e6]");
            c.n_spins.push_back(static_cast<int>(n));
        }
        if (c.n_spins.empty()) throw ConfigError("config: 'n_spins' is empty");
        if (j.contains("n_max")) {
            if (j["n_max"].is_string() && j["n_max"].get<std::string>() == "auto") {
                c.n_max = 0;
            } else {
                const auto n = unsigned_integer(j["n_max"], "n_max");
                if (n < 1 || n > 1'000'000) throw ConfigError("config: n_max must be >= 1 or \"auto\"");
                c.n_max = static_cast<int>(n);
            }
        }
        if (c.model == Model::DoubleDicke && c.n_max == 0) c.n_max = 30;
        if (j.contains("cutoff_tol")) c.cutoff_tol = positive(j["cutoff_tol"], "cutoff_tol");
        canon["n_spins"] = c.n_spins;
        canon["n_max"] = c.n_max;
        canon["cutoff_tol"] = c.cutoff_tol;
    } else {
        for (const char* k : {"n_spins", "n_max", "cutoff_tol"})
            if (j.contains(k)) throw ConfigError(std::string("config: '") + k + "' only applies to ED sweeps");
    }

    if (j.contains("tol")) c.eig_tol = positive(j["tol"], "tol");
    if (j.contains("seed")) c.seed = unsigned_integer(j["seed"], "seed");
    if (j.contains("budget_nnz")) {
        c.budget_nnz = unsigned_integer(j["budget_nnz"], "budget_nnz");
        if (c.budget_nnz == 0) throw ConfigError("config: budget_nnz must be positive");
    }
    canon["tol"] = c.eig_tol;
    canon["seed"] = c.seed;
    canon["budget_nnz"] = c.budget_nnz;

    if (j.contains("renyi")) {
        c.renyi = values(j["renyi"], "renyi");
        for (double a : c.renyi)
            if (!(a > 0.0) || a == 1.0) throw ConfigError("config: renyi orders must be positive and != 1");
    }
    canon["renyi"] = c.renyi;

    if (j.contains("format")) {
        const std::string f = text(j["format"], "format");
        if (f == "csv") c.format = OutputFormat::Csv;
        else if (f == "json") c.format = OutputFormat::Json;
        else throw ConfigError("config: format must be 'csv' or 'json'");
    }
    if (j.contains("out")) c.out = text(j["out"], "out");
    if (j.contains("workers")) {
        const auto w = unsigned_integer(j["workers"], "workers");
        if (w < 1 || w > 1024) throw ConfigError("config: workers must be in [1, 1024]");
        c.workers = static_cast<int>(w);
    }
    c.canonical = canon;
    return c;
}

std::string config_hash(const SweepConfig& cfg) {
    json canon = cfg.canonical;
    canon["seed"] = cfg.seed;
    canon["budget_nnz"] = cfg.budget_nnz;
    const std::string s = canon.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace dickehp
