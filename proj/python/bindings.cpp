#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dickehp/config.hpp"
#include "dickehp/dicke_ed.hpp"
#include "dickehp/dicke_thermo.hpp"
#include "dickehp/double_dicke.hpp"
#include "dickehp/errors.hpp"
#include "dickehp/sweep.hpp"

namespace py = pybind11;
using namespace dickehp;

namespace {

py::dict report_dict(const FluctuationReport& r) {
    py::dict d;
    d["mean_a"] = r.mean_a;
    d["n_occ"] = r.n_occ;
    d["sq"] = r.sq;
    d["dx"] = r.dx;
    d["dp"] = r.dp;
    d["hp"] = r.hp;
    d["hp_raw"] = r.hp_raw;
    d["zeta"] = r.zeta;
    d["phi"] = r.phi;
    d["divergent"] = r.divergent;
    return d;
}

DoubleDickeParams double_params(double omega_cav, double omega0_c, double omega0_i, double lambda_c,
                                double lambda_i) {
    DoubleDickeParams p;
    p.omega_cav = omega_cav;
    p.omega0_c = omega0_c;
    p.omega0_i = omega0_i;
    p.lambda_c = lambda_c;
    p.lambda_i = lambda_i;
    return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Heisenberg product and entanglement entropy for Dicke-type models";
    m.attr("__version__") = DICKEHP_PY_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InstabilityError>(m, "InstabilityError", base.ptr());
    py::register_exception<UncertaintyViolation>(m, "UncertaintyViolation", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<BranchError>(m, "BranchError", base.ptr());
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    m.def(
        "symplectic_diagonalize",
        [](const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, std::optional<Eigen::VectorXcd> d,
           double e0) {
            QuadraticForm f(A.rows());
            f.A = A;
            f.B = B;
            if (d) f.d = *d;
            f.e0 = e0;
            const auto s = symplectic_diagonalize(f);
            py::dict out;
            out["gaps"] = s.gaps;
            out["transform"] = s.transform;
            out["displacements"] = s.displacements;
            out["ground_energy"] = s.ground_energy;
            out["photon"] = report_dict(photon_moments_from_solution(s));
            return out;
        },
        py::arg("A"), py::arg("B"), py::arg("d") = py::none(), py::arg("e0") = 0.0,
        "Bogoliubov solution of H = a†Aa + ½(aBa + h.c.) + (d·a + h.c.) + e0; 'photon' describes mode 0.");

    m.def(
        "heisenberg_product",
        [](cplx mean_a, double n_raw, cplx a2) { return report_dict(heisenberg_product({mean_a, n_raw, a2})); },
        py::arg("mean_a"), py::arg("n_raw"), py::arg("a2"));
    m.def("entropy_from_hp", &entropy_from_hp, py::arg("hp"), py::arg("degeneracy_offset") = 0);
    m.def("renyi_entropy", &renyi_entropy, py::arg("hp"), py::arg("alpha"));
    m.def("pseudo_energy", &pseudo_energy, py::arg("hp"), py::arg("zeta") = 0.0);

    m.def(
        "dicke_hp",
        [](double omega, double omega0, double lambda) { return report_dict(hp_thermo({omega, omega0, lambda})); },
        py::arg("omega"), py::arg("omega0"), py::arg("lambda_"));
    m.def(
        "dicke_entropy",
        [](double omega, double omega0, double lambda, bool degeneracy) {
            return entropy_thermo({omega, omega0, lambda}, degeneracy).s_vn;
        },
        py::arg("omega"), py::arg("omega0"), py::arg("lambda_"), py::arg("include_degeneracy") = false);
    m.def(
        "dicke_ed",
        [](double omega, double omega0, double lambda, int n_spins, double tol, std::uint64_t budget_nnz) {
            EDOptions opt;
            opt.budget_nnz = budget_nnz;
            const auto cs = converge_cutoff({omega, omega0, lambda}, n_spins, tol, opt);
            const EDBasis b(n_spins, cs.n_max);
            py::dict out = report_dict(photon_moments_ed(cs.result, b));
            out["n_max"] = cs.n_max;
            out["entropy"] = photon_entropy_ed(cs.result, b);
            out["ground_energy"] = cs.result.ground_energy;
            out["gap01"] = cs.result.gap01;
            return out;
        },
        py::arg("omega"), py::arg("omega0"), py::arg("lambda_"), py::arg("n_spins"), py::arg("tol") = 1e-6,
        py::arg("budget_nnz") = 50'000'000ull);

    m.def(
        "double_hp",
        [](double w, double wc, double wi, double lc, double li) {
            return report_dict(hp_double(double_params(w, wc, wi, lc, li)));
        },
        py::arg("omega_cav"), py::arg("omega0_c"), py::arg("omega0_i"), py::arg("lambda_c"), py::arg("lambda_i"));
    m.def(
        "double_entropy",
        [](double w, double wc, double wi, double lc, double li, bool degeneracy) {
            return entropy_double(double_params(w, wc, wi, lc, li), degeneracy).s_vn;
        },
        py::arg("omega_cav"), py::arg("omega0_c"), py::arg("omega0_i"), py::arg("lambda_c"), py::arg("lambda_i"),
        py::arg("include_degeneracy") = false);
    m.def(
        "double_gaps",
        [](double w, double wc, double wi, double lc, double li) {
            return Eigen::VectorXd(double_gaps(double_params(w, wc, wi, lc, li)));
        },
        py::arg("omega_cav"), py::arg("omega0_c"), py::arg("omega0_i"), py::arg("lambda_c"), py::arg("lambda_i"));
    m.def(
        "double_phase",
        [](double w, double wc, double wi, double lc, double li) {
            const auto info = classify_double_phase(double_params(w, wc, wi, lc, li));
            return py::make_tuple(to_string(info.phase), info.degeneracy);
        },
        py::arg("omega_cav"), py::arg("omega0_c"), py::arg("omega0_i"), py::arg("lambda_c"), py::arg("lambda_i"));

    m.def(
        "sweep_csv",
        [](const std::string& config_json) {
            const SweepConfig cfg = parse_config(nlohmann::json::parse(config_json));
            const SweepResult res = run_sweep_rows(cfg);
            return py::make_tuple(cfg.format == OutputFormat::Csv ? render_csv(cfg, res.rows)
                                                                   : render_json(cfg, res.rows),
                                  res.exit_code());
        },
        py::arg("config_json"), "Runs a sweep given its JSON configuration; returns (text, exit_code).");
}
