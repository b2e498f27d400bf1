#include "dickehp/dicke_ed.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dickehp/errors.hpp"

namespace dickehp {

EDBasis::EDBasis(int n_spins_, int n_max_) : n_spins(n_spins_), n_max(n_max_) {
    if (n_spins < 1) throw DomainError("EDBasis: need at least one spin");
    if (n_max < 1) throw CutoffError("EDBasis: Fock cutoff n_max must be at least 1");
}

SparseH<double> build_hamiltonian(const DickeParams& p, const EDBasis& basis) {
    p.validate();
    if (basis.n_max < 1) throw CutoffError("build_hamiltonian: Fock cutoff n_max must be at least 1");
    const int nn = basis.n_spins;
    const double g = p.lambda / std::sqrt(static_cast<double>(nn));
    const double j = basis.j();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(basis.estimated_nnz()));
    for (int n = 0; n <= basis.n_max; ++n) {
        for (int k = 0; k <= nn; ++k) {
            const Eigen::Index col = basis.index(n, k);
            trip.emplace_back(col, col, p.omega * n + p.omega0 * (k - j));
            if (g == 0.0) continue;
            // ⟨m+1|J₊|m⟩ = √((j−m)(j+m+1)), ⟨m−1|J₋|m⟩ = √((j+m)(j−m+1))
            const double up = std::sqrt(static_cast<double>((nn - k) * (k + 1)));
            const double down = std::sqrt(static_cast<double>(k * (nn - k + 1)));
            for (int dn : {-1, 1}) {
                const int n2 = n + dn;
                if (n2 < 0 || n2 > basis.n_max) continue;
                const double boson = std::sqrt(static_cast<double>(std::max(n, n2)));
                if (k < nn) trip.emplace_back(basis.index(n2, k + 1), col, g * boson * up);
                if (k > 0) trip.emplace_back(basis.index(n2, k - 1), col, g * boson * down);
            }
        }
    }
    SparseH<double> h(basis.dim(), basis.dim());
    h.setFromTriplets(trip.begin(), trip.end());
    return h;
}

Eigen::VectorXd parity_diagonal(const EDBasis& basis) {
    Eigen::VectorXd d(basis.dim());
    for (int n = 0; n <= basis.n_max; ++n)
        for (int k = 0; k <= basis.n_spins; ++k) d(basis.index(n, k)) = (n + k) % 2 == 0 ? 1.0 : -1.0;
    return d;
}

EDResult solve_ed(const DickeParams& p, const EDBasis& basis, const EDOptions& opt) {
    if (basis.estimated_nnz() > opt.budget_nnz) {
        std::ostringstream os;
        os << "solve_ed: N = " << basis.n_spins << ", n_max = " << basis.n_max << " needs about "
           << basis.estimated_nnz() << " nonzeros, budget " << opt.budget_nnz;
        throw BudgetExceeded(os.str());
    }
    const SparseH<double> h = build_hamiltonian(p, basis);
    EDResult r = solve_by_parity(h, parity_diagonal(basis), opt);
    r.n_max_used = basis.n_max;
    const Eigen::MatrixXcd rho = photon_density_matrix(r.state, basis.fock_dim());
    r.top_occupancy = rho(basis.n_max, basis.n_max).real();
    r.cutoff_converged = r.top_occupancy <= kCutoffWarning;
    return r;
}

FluctuationReport photon_moments_ed(const EDResult& result, const EDBasis& basis) {
    if (result.state.size() != basis.dim()) throw DomainError("photon_moments_ed: state does not match basis");
    return heisenberg_product(moments_from_density(photon_density_matrix(result.state, basis.fock_dim())));
}

double photon_entropy_ed(const EDResult& result, const EDBasis& basis) {
    if (result.state.size() != basis.dim()) throw DomainError("photon_entropy_ed: state does not match basis");
    return entropy_from_density(photon_density_matrix(result.state, basis.fock_dim()));
}

int coherent_cutoff_estimate(const DickeParams& p, int n_spins) {
    const double nn = n_spins;
    const double r = p.lambda / p.omega;
    return std::max(1, static_cast<int>(std::ceil(4.0 * (nn * r * r + std::sqrt(nn)))));
}

CutoffSearch converge_cutoff(const DickeParams& p, int n_spins, double tol, const EDOptions& opt) {
    p.validate();
    if (n_spins < 1) throw DomainError("converge_cutoff: need at least one spin");
    if (!(tol > 0.0)) throw DomainError("converge_cutoff: tol must be positive");

    const int estimate = coherent_cutoff_estimate(p, n_spins);
    if (EDBasis(n_spins, estimate).estimated_nnz() > opt.budget_nnz) {
        std::ostringstream os;
        os << "converge_cutoff: coherent-shift estimate n_max = " << estimate << " for N = " << n_spins
           << " needs about " << EDBasis(n_spins, estimate).estimated_nnz() << " nonzeros, budget "
           << opt.budget_nnz;
        throw BudgetExceeded(os.str());
    }

    // Moments are first order in the eigenvector error, so solve tighter
    // than the requested hp tolerance.
    EDOptions inner = opt;
    inner.tol = std::min(opt.tol, 1e-12);

    CutoffSearch out;
    for (int n = 1; n <= 2 * estimate; n *= 2) {
        const EDBasis b(n_spins, n);
        const EDBasis b_check(n_spins, static_cast<int>(std::ceil(1.25 * n)));
        EDResult r = solve_ed(p, b, inner);
        const EDResult r_check = solve_ed(p, b_check, inner);
        const double hp = photon_moments_ed(r, b).hp;
        const double hp_check = photon_moments_ed(r_check, b_check).hp;
        out.tried.push_back(n);
        if (std::abs(hp - hp_check) < tol && r.top_occupancy <= kCutoffWarning) {
            out.n_max = n;
            out.hp = hp;
            out.hp_check = hp_check;
            r.cutoff_converged = true;
            out.result = std::move(r);
            return out;
        }
    }
    std::ostringstream os;
    os << "converge_cutoff: hp not stable to " << tol << " for N = " << n_spins << ", lambda = "
       << p.lambda << " up to n_max = " << out.tried.back();
    throw CutoffError(os.str());
}

ScalingReport scaling_at_critical(const DickeParams& p, const std::vector<int>& n_list, double tol,
                                  const EDOptions& opt, double min_decades) {
    if (n_list.empty()) throw DegenerateFit("scaling_at_critical: empty N list");
    const auto [lo, hi] = std::minmax_element(n_list.begin(), n_list.end());
    if (*lo < 1) throw DomainError("scaling_at_critical: N must be positive");
    if (std::log10(static_cast<double>(*hi) / *lo) < min_decades * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "scaling_at_critical: N list spans less than " << min_decades << " decades";
        throw DegenerateFit(os.str());
    }

    ScalingReport rep;
    for (int n : n_list) {
        const CutoffSearch cs = converge_cutoff(p, n, tol, opt);
        const EDBasis b(n, cs.n_max);
        const FluctuationReport f = photon_moments_ed(cs.result, b);
        ScalingPoint pt;
        pt.n_spins = n;
        pt.n_max = cs.n_max;
        pt.hp = f.hp;
        pt.dx = f.dx;
        pt.dp = f.dp;
        pt.entropy = photon_entropy_ed(cs.result, b);
        pt.gap01 = cs.result.gap01;
        rep.points.push_back(pt);
    }

    // Upper decade only: subleading finite-size corrections die off slowly.
    const double cut = static_cast<double>(*hi) / 10.0;
    std::vector<double> ns, hps, log2n, ss;
    rep.window_min = *hi;
    for (const auto& pt : rep.points) {
        if (pt.n_spins < cut * (1.0 - 1e-12)) continue;
        rep.window_min = std::min(rep.window_min, pt.n_spins);
        ns.push_back(pt.n_spins);
        hps.push_back(pt.hp);
        log2n.push_back(std::log2(static_cast<double>(pt.n_spins)));
        ss.push_back(pt.entropy);
    }
    rep.hp_fit = fit_power_law(ns, hps, 0.0, 3);
    rep.entropy_fit = fit_linear(log2n, ss);
    return rep;
}

}  // namespace dickehp
