#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dickehp/dicke_thermo.hpp"
#include "dickehp/ed_common.hpp"
#include "dickehp/fit.hpp"

namespace dickehp {

// Photon Fock space 0..n_max times the j = N/2 Dicke multiplet.
// State (n, m) sits at n·(N+1) + (m + j).
struct EDBasis {
    int n_spins = 1;
    int n_max = 1;

    EDBasis(int n_spins, int n_max);

    [[nodiscard]] Eigen::Index spin_dim() const { return n_spins + 1; }
    [[nodiscard]] Eigen::Index fock_dim() const { return n_max + 1; }
    [[nodiscard]] Eigen::Index dim() const { return fock_dim() * spin_dim(); }
    [[nodiscard]] double j() const { return 0.5 * n_spins; }
    // k = m + j in 0..N
    [[nodiscard]] Eigen::Index index(int n, int k) const { return n * spin_dim() + k; }
    [[nodiscard]] std::uint64_t estimated_nnz() const { return 5ull * static_cast<std::uint64_t>(dim()); }
};

// Real symmetric sparse Hamiltonian. Throws CutoffError if n_max < 1.
SparseH<double> build_hamiltonian(const DickeParams& p, const EDBasis& basis);

// Diagonal of Π = exp(iπ(a†a + J_z + j)): entries (−1)^(n + m + j).
Eigen::VectorXd parity_diagonal(const EDBasis& basis);

// Ground state and first gap, solved per parity sector. Throws
// BudgetExceeded when the matrix would exceed opt.budget_nnz.
EDResult solve_ed(const DickeParams& p, const EDBasis& basis, const EDOptions& opt = {});

// Photon moments of the returned state fed through heisenberg_product.
FluctuationReport photon_moments_ed(const EDResult& result, const EDBasis& basis);

// Photon entanglement entropy in bits from the explicit partial trace.
double photon_entropy_ed(const EDResult& result, const EDBasis& basis);

struct CutoffSearch {
    int n_max = 1;
    double hp = 0.5;
    double hp_check = 0.5;  // value at the 25% larger cutoff
    EDResult result;        // at n_max
    std::vector<int> tried;
};

// Doubling search for the smallest Fock cutoff whose hp is stable to `tol`
// under a 25% increase, with the top Fock level below kCutoffWarning.
// The coherent-shift estimate ceil(4(Nλ²/ω² + √N)) caps the search and
// is checked against the nonzero budget up front.
CutoffSearch converge_cutoff(const DickeParams& p, int n_spins, double tol,
                             const EDOptions& opt = {});

int coherent_cutoff_estimate(const DickeParams& p, int n_spins);

struct ScalingPoint {
    int n_spins = 0;
    int n_max = 0;
    double hp = 0.0;
    double dx = 0.0;
    double dp = 0.0;
    double entropy = 0.0;
    double gap01 = 0.0;
};

struct ScalingReport {
    std::vector<ScalingPoint> points;
    ExponentFit hp_fit;            // hp ∝ N^exponent over the window
    LinearFit entropy_fit;         // S vs log₂N over the window
    int window_min = 0;            // smallest N inside the fit window
};

// hp(N) and S(N) at the given couplings (normally λ = λ_cr) with converged
// cutoffs. The fit uses the upper decade N ≥ max(N)/10. The N list must
// span at least `min_decades`.
ScalingReport scaling_at_critical(const DickeParams& p, const std::vector<int>& n_list,
                                  double tol = 1e-8, const EDOptions& opt = {},
                                  double min_decades = 1.5);

}  // namespace dickehp
