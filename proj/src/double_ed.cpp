#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "dickehp/double_dicke.hpp"
#include "dickehp/errors.hpp"

namespace dickehp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string renyi_key(double alpha) {
    std::ostringstream os;
    os << "renyi_" << alpha;
    return os.str();
}

void spin_ladder(int nn, int k, double& up, double& down) {
    up = std::sqrt(static_cast<double>((nn - k) * (k + 1)));
    down = std::sqrt(static_cast<double>(k * (nn - k + 1)));
}

// Columns shared by the thermo and ED rows of the double model.
SweepRow double_row_head(const DoubleDickeParams& p, const char* mode) {
    SweepRow row;
    row.set("model", std::string("double-dicke"));
    row.set("mode", std::string(mode));
    row.set("omega_cav", p.omega_cav);
    row.set("omega0_c", p.omega0_c);
    row.set("omega0_i", p.omega0_i);
    row.set("lambda_c", p.lambda_c);
    row.set("lambda_i", p.lambda_i);
    const double theta = std::atan2(p.lambda_i, p.lambda_c);
    row.set("r", std::hypot(p.lambda_c, p.lambda_i));
    row.set("theta", theta);
    const auto rc = critical_radii(p, theta);
    row.set("r_cr_c", rc[0]);
    row.set("r_cr_i", rc[1]);
    return row;
}

}  // namespace

DoubleEDBasis::DoubleEDBasis(int n_c_, int n_i_, int n_max_) : n_c(n_c_), n_i(n_i_), n_max(n_max_) {
    if (n_c < 1 || n_i < 1) throw DomainError("DoubleEDBasis: each chain needs at least one spin");
    if (n_max < 1) throw CutoffError("DoubleEDBasis: Fock cutoff n_max must be at least 1");
}

SparseH<cplx> build_double_hamiltonian(const DoubleDickeParams& p, const DoubleEDBasis& b) {
    p.validate();
    const double gc = p.lambda_c / std::sqrt(static_cast<double>(b.n_c));
    const double gi = p.lambda_i / std::sqrt(static_cast<double>(b.n_i));
    const double jc = 0.5 * b.n_c, ji = 0.5 * b.n_i;
    const cplx im{0.0, 1.0};

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(static_cast<std::size_t>(b.estimated_nnz()));
    for (int n = 0; n <= b.n_max; ++n) {
        for (int kc = 0; kc <= b.n_c; ++kc) {
            double cu, cd;
            spin_ladder(b.n_c, kc, cu, cd);
            for (int ki = 0; ki <= b.n_i; ++ki) {
                double iu, id;
                spin_ladder(b.n_i, ki, iu, id);
                const Eigen::Index col = b.index(n, kc, ki);
                trip.emplace_back(col, col, p.omega_cav * n + p.omega0_c * (kc - jc) + p.omega0_i * (ki - ji));
                for (int dn : {-1, 1}) {
                    const int n2 = n + dn;
                    if (n2 < 0 || n2 > b.n_max) continue;
                    const double boson = std::sqrt(static_cast<double>(std::max(n, n2)));
                    // (a + a†) on chain C
                    if (gc != 0.0) {
                        if (kc < b.n_c) trip.emplace_back(b.index(n2, kc + 1, ki), col, gc * boson * cu);
                        if (kc > 0) trip.emplace_back(b.index(n2, kc - 1, ki), col, gc * boson * cd);
                    }
                    // i(a − a†): +i√n lowering, −i√(n+1) raising
                    if (gi != 0.0) {
                        const cplx q = (dn < 0 ? im : -im) * (gi * boson);
                        if (ki < b.n_i) trip.emplace_back(b.index(n2, kc, ki + 1), col, q * iu);
                        if (ki > 0) trip.emplace_back(b.index(n2, kc, ki - 1), col, q * id);
                    }
                }
            }
        }
    }
    SparseH<cplx> h(b.dim(), b.dim());
    h.setFromTriplets(trip.begin(), trip.end());
    return h;
}

Eigen::VectorXd double_parity_diagonal(const DoubleEDBasis& b) {
    Eigen::VectorXd d(b.dim());
    for (int n = 0; n <= b.n_max; ++n)
        for (int kc = 0; kc <= b.n_c; ++kc)
            for (int ki = 0; ki <= b.n_i; ++ki) d(b.index(n, kc, ki)) = (n + kc + ki) % 2 == 0 ? 1.0 : -1.0;
    return d;
}

Eigen::VectorXd chain_parity_diagonal(const DoubleEDBasis& b, char chain) {
    if (chain != 'C' && chain != 'I') throw DomainError("chain_parity_diagonal: chain must be 'C' or 'I'");
    Eigen::VectorXd d(b.dim());
    for (int n = 0; n <= b.n_max; ++n)
        for (int kc = 0; kc <= b.n_c; ++kc)
            for (int ki = 0; ki <= b.n_i; ++ki)
                d(b.index(n, kc, ki)) = ((chain == 'C' ? kc : ki) % 2 == 0) ? 1.0 : -1.0;
    return d;
}

Eigen::VectorXd photon_parity_diagonal(const DoubleEDBasis& b) {
    Eigen::VectorXd d(b.dim());
    for (int n = 0; n <= b.n_max; ++n)
        for (int kc = 0; kc <= b.n_c; ++kc)
            for (int ki = 0; ki <= b.n_i; ++ki) d(b.index(n, kc, ki)) = n % 2 == 0 ? 1.0 : -1.0;
    return d;
}

double antiunitary_commutator_norm(const SparseH<cplx>& h, const Eigen::VectorXd& u) {
    // (U K) H (U K)⁻¹ = U H* U for a real diagonal U = U⁻¹.
    double acc = 0.0;
    for (Eigen::Index r = 0; r < h.outerSize(); ++r)
        for (SparseH<cplx>::InnerIterator it(h, r); it; ++it)
            acc += std::norm(u(r) * std::conj(it.value()) * u(it.col()) - it.value());
    return std::sqrt(acc);
}

DoubleEDReport double_ed(const DoubleDickeParams& p, int n_max, const EDOptions& opt) {
    p.validate();
    if (p.n_c < 1 || p.n_i < 1) throw DomainError("double_ed: set n_c and n_i to positive spin counts");
    const DoubleEDBasis b(p.n_c, p.n_i, n_max);
    if (b.estimated_nnz() > opt.budget_nnz) {
        std::ostringstream os;
        os << "double_ed: dimension " << b.dim() << " needs about " << b.estimated_nnz()
           << " nonzeros, budget " << opt.budget_nnz;
        throw BudgetExceeded(os.str());
    }
    const SparseH<cplx> h = build_double_hamiltonian(p, b);
    DoubleEDReport rep;
    rep.result = solve_by_parity(h, double_parity_diagonal(b), opt);
    rep.result.n_max_used = n_max;
    const Eigen::MatrixXcd rho = photon_density_matrix(rep.result.state, b.fock_dim());
    rep.result.top_occupancy = rho(n_max, n_max).real();
    rep.result.cutoff_converged = rep.result.top_occupancy <= kCutoffWarning;
    rep.moments = heisenberg_product(moments_from_density(rho));
    rep.entropy = entropy_from_density(rho);
    return rep;
}

SweepRow double_thermo_row(const DoubleDickeParams& p, std::span<const double> renyi_alphas) {
    SweepRow row = double_row_head(p, "thermo");
    const std::vector<std::string> numeric = {"degeneracy", "dx", "dp", "hp", "s_vn", "s_vn_deg"};
    row.set("phase", std::string("?"));
    for (const auto& k : numeric) row.set(k, kNaN);
    for (double a : renyi_alphas) row.set(renyi_key(a), kNaN);
    for (const char* k : {"gap_1", "gap_2", "gap_3"}) row.set(k, kNaN);
    row.set("status", std::string("ok"));
    row.set("reason", std::string());

    try {
        const DoublePhaseInfo info = classify_double_phase(p);
        row.set("phase", to_string(info.phase) + (info.double_point() ? "+double-point"
                                                  : info.critical() ? "+critical" : ""));
        row.set("degeneracy", static_cast<std::int64_t>(info.degeneracy));
        const FluctuationReport f = hp_double(p);
        row.set("dx", f.dx);
        row.set("dp", f.dp);
        row.set("hp", f.hp);
        const EntropyReport e = entropy_report(f.hp, 0, renyi_alphas);
        row.set("s_vn", e.s_vn);
        row.set("s_vn_deg", e.s_vn + degeneracy_to_offset(info.degeneracy));
        for (const auto& [a, s] : e.s_renyi) row.set(renyi_key(a), s);
        const Eigen::Vector3d g = double_gaps(p);
        row.set("gap_1", g(0));
        row.set("gap_2", g(1));
        row.set("gap_3", g(2));
        if (f.divergent) row.set("reason", std::string("critical-point"));
    } catch (const Error& e) {
        row.set("status", std::string("error"));
        row.set("reason", std::string(e.what()));
    }
    return row;
}

SweepRow double_ed_row(const DoubleDickeParams& p, int n_max, const EDOptions& opt,
                       std::span<const double> renyi_alphas) {
    SweepRow row = double_row_head(p, "ed");
    row.set("n_spins", static_cast<std::int64_t>(p.n_c));
    row.set("n_max", static_cast<std::int64_t>(n_max));
    row.set("phase", std::string("?"));
    for (const char* k : {"degeneracy", "dx", "dp", "hp", "s_vn", "s_vn_hp"}) row.set(k, kNaN);
    for (double a : renyi_alphas) row.set(renyi_key(a), kNaN);
    for (const char* k : {"ground_energy", "gap01", "parity", "top_occupancy"}) row.set(k, kNaN);
    row.set("converged", static_cast<std::int64_t>(0));
    row.set("status", std::string("ok"));
    row.set("reason", std::string());

    try {
        const DoublePhaseInfo info = classify_double_phase(p);
        row.set("phase", to_string(info.phase));
        row.set("degeneracy", static_cast<std::int64_t>(info.degeneracy));
        const DoubleEDReport rep = double_ed(p, n_max, opt);
        row.set("dx", rep.moments.dx);
        row.set("dp", rep.moments.dp);
        row.set("hp", rep.moments.hp);
        row.set("s_vn", rep.entropy);
        row.set("s_vn_hp", entropy_from_hp(rep.moments.hp));
        const Eigen::MatrixXcd rho = photon_density_matrix(rep.result.state, n_max + 1);
        for (double a : renyi_alphas) row.set(renyi_key(a), renyi_from_density(rho, a));
        row.set("ground_energy", rep.result.ground_energy);
        row.set("gap01", rep.result.gap01);
        row.set("parity", rep.result.parity);
        row.set("top_occupancy", rep.result.top_occupancy);
        row.set("converged", static_cast<std::int64_t>(rep.result.cutoff_converged ? 1 : 0));
        if (!rep.result.cutoff_converged) row.set("reason", std::string("cutoff-warning"));
    } catch (const BudgetExceeded& e) {
        row.set("status", std::string("budget-exceeded"));
        row.set("reason", std::string(e.what()));
    } catch (const ConvergenceError& e) {
        row.set("status", std::string("solver-failure"));
        row.set("reason", std::string(e.what()));
    } catch (const Error& e) {
        row.set("status", std::string("error"));
        row.set("reason", std::string(e.what()));
    }
    return row;
}

std::vector<SweepRow> radial_sweep(const DoubleDickeParams& base, double theta, double r_min, double r_max,
                                   int steps, const RadialOptions& opt) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi / 2 + 1e-15))
        throw DomainError("radial_sweep: theta must lie in [0, pi/2]");
    if (steps < 1) throw DomainError("radial_sweep: need at least one step");
    if (!(r_min >= 0.0) || !(r_max >= r_min)) throw DomainError("radial_sweep: need 0 <= r_min <= r_max");

    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(steps));
    for (int s = 0; s < steps; ++s) {
        const double r = steps == 1 ? r_min : r_min + (r_max - r_min) * s / (steps - 1);
        DoubleDickeParams p = base.with_radial(r, theta);
        if (opt.mode == SweepMode::Thermo) {
            rows.push_back(double_thermo_row(p, opt.renyi_alphas));
        } else {
            p.n_c = p.n_i = opt.n_spins;
            rows.push_back(double_ed_row(p, opt.n_max, opt.ed, opt.renyi_alphas));
        }
        // The origin has no direction of its own; keep the ray's.
        const auto rc = critical_radii(base, theta);
        rows.back().set("theta", theta);
        rows.back().set("r_cr_c", rc[0]);
        rows.back().set("r_cr_i", rc[1]);
    }
    return rows;
}

}  // namespace dickehp
