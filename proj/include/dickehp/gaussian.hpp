#pragma once

#include <complex>
#include <map>
#include <span>

#include <Eigen/Dense>

namespace dickehp {

using cplx = std::complex<double>;

// Quadratic bosonic Hamiltonian on n modes a_1..a_n:
//
//   H = Σ A_ij a_i† a_j + ½ Σ (B_ij a_i a_j + B_ij* a_j† a_i†)
//       + Σ (d_i a_i + d_i* a_i†) + e0
//
// A must be Hermitian and B symmetric.
struct QuadraticForm {
    Eigen::MatrixXcd A;
    Eigen::MatrixXcd B;
    Eigen::VectorXcd d;
    double e0 = 0.0;

    explicit QuadraticForm(Eigen::Index n_modes = 0);

    [[nodiscard]] Eigen::Index n_modes() const { return A.rows(); }

    // Nambu matrix [[A, B*], [B, A*]] acting on (a, a†).
    [[nodiscard]] Eigen::MatrixXcd nambu() const;

    // Frobenius norm of the Nambu matrix; the scale for all tolerances.
    [[nodiscard]] double scale() const;
};

// Result of a symplectic (Bogoliubov) diagonalization.
//
// With α = (a_1..a_n, a_1†..a_n†) and β = (e_1..e_n, e_1†..e_n†) the
// polariton vector, `transform` maps α -> β and `inverse` maps β -> α,
// both acting on the fluctuations α - ⟨α⟩. Row k < n of `transform`
// holds the (u, v) coefficients of e_k.
struct BogoliubovSolution {
    Eigen::VectorXd gaps;            // ascending
    Eigen::MatrixXcd transform;      // 2n x 2n
    Eigen::MatrixXcd inverse;        // 2n x 2n
    Eigen::VectorXcd displacements;  // ⟨a_i⟩ in the ground state
    double ground_energy = 0.0;

    [[nodiscard]] Eigen::Index n_modes() const { return gaps.size(); }
};

// First and second moments of a single mode, as measured.
struct RawMoments {
    cplx mean_a{0.0, 0.0};  // ⟨a⟩
    double n_raw = 0.0;     // ⟨a†a⟩
    cplx a2{0.0, 0.0};      // ⟨a²⟩
};

// Fluctuations of one mode.
//
// mean_a, n_occ and sq describe the mode as given. dx, dp and hp are the
// quadrature spreads of the rotated mode ã = a e^{-iφ}, for which ⟨ã²⟩
// is real and the anisotropy vanishes; hp_raw is ΔxΔp before rotation.
// The identity hp_raw² + zeta = (n_occ + ½)² − |sq|² = hp² holds.
struct FluctuationReport {
    cplx mean_a{0.0, 0.0};
    double n_occ = 0.0;
    cplx sq{0.0, 0.0};
    double dx = 0.0;
    double dp = 0.0;
    double hp = 0.5;
    double hp_raw = 0.5;
    double zeta = 0.0;  // (⟨a²⟩c − ⟨a†²⟩c)²/4, never positive
    double phi = 0.0;   // in [0, π)

    // Set on critical points where hp is reported as +inf.
    bool divergent = false;
    double divergence_exponent = 0.0;
};

struct EntropyReport {
    double s_vn = 0.0;                 // bits, including the offset
    std::map<double, double> s_renyi;  // α -> S_α in bits, no offset
    double pseudo_energy = 0.0;
    int degeneracy_offset = 0;
};

// Values within this distance below ½ are treated as exactly ½.
inline constexpr double kHeisenbergTolerance = 1e-9;

// Completes the square and diagonalizes the quadratic part.
// Throws InstabilityError when a normal-mode frequency is complex,
// negative or zero, and DomainError on malformed input.
BogoliubovSolution symplectic_diagonalize(const QuadraticForm& form);

// Fluctuations of mode `mode` in the polariton vacuum.
FluctuationReport photon_moments_from_solution(const BogoliubovSolution& sol,
                                               Eigen::Index mode = 0);

// Centers the moments, picks the smallest rotation making ⟨ã²⟩ real and
// reports the fluctuations. Throws UncertaintyViolation for inconsistent
// moments.
FluctuationReport heisenberg_product(const RawMoments& moments);

// Moments of a e^{-iθ} given those of a.
RawMoments rotate_moments(const RawMoments& moments, double theta);

// von Neumann entropy (bits) of a single-mode Gaussian state with the given
// (rotated) Heisenberg product, plus `degeneracy_offset` bits.
double entropy_from_hp(double hp, int degeneracy_offset = 0);

// Rényi entropy of order alpha (bits). alpha must be positive and != 1.
double renyi_entropy(double hp, double alpha);

// Pseudo-energy Δ of the reduced density matrix exp(-E0 - Δ P†P), natural
// log units. Infinite for a pure state.
double pseudo_energy(double hp, double zeta = 0.0);

EntropyReport entropy_report(double hp, int degeneracy_offset = 0,
                             std::span<const double> renyi_alphas = {});

// Entropy offset in bits for a ground-state degeneracy of 1, 2 or 4.
int degeneracy_to_offset(int degeneracy);

}  // namespace dickehp
