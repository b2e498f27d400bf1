#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "dickehp/dicke_thermo.hpp"
#include "dickehp/ed_common.hpp"
#include "dickehp/sweep_row.hpp"

namespace dickehp {

// H = ω a†a + ω_C J_z^C + ω_I J_z^I + (λ_C/√N_C)(a + a†)(J₊^C + J₋^C)
//     + i(λ_I/√N_I)(a − a†)(J₊^I + J₋^I)
struct DoubleDickeParams {
    double omega_cav = 1.0;
    double omega0_c = 1.0;
    double omega0_i = 1.0;
    double lambda_c = 0.0;
    double lambda_i = 0.0;
    int n_c = 0;  // spin counts, only used by exact diagonalization
    int n_i = 0;

    [[nodiscard]] double lambda_c_cr() const;
    [[nodiscard]] double lambda_i_cr() const;
    void validate() const;

    // The C ↔ I exchanged model.
    [[nodiscard]] DoubleDickeParams swapped() const;
    // λ_C = r cos θ, λ_I = r sin θ.
    [[nodiscard]] DoubleDickeParams with_radial(double r, double theta) const;
};

enum class DoublePhase { Normal, SuperradiantReal, SuperradiantImag, SuperradiantDouble };

std::string to_string(DoublePhase p);

struct DoublePhaseInfo {
    DoublePhase phase = DoublePhase::Normal;
    int degeneracy = 1;
    bool critical_c = false;  // on λ_C = λ_C^cr
    bool critical_i = false;
    double lambda_c_cr = 0.0;
    double lambda_i_cr = 0.0;

    [[nodiscard]] bool double_point() const { return critical_c && critical_i; }
    [[nodiscard]] bool critical() const { return critical_c || critical_i; }
};

// Points on a critical line count as unbroken in that direction.
DoublePhaseInfo classify_double_phase(const DoubleDickeParams& p);

// Classical energy per spin, E/N = ω(u² + v²) + Σ_k ω_k(y_k² − ½)
//   + 4λ_C u y_C√(1−y_C²) − 4λ_I v y_I√(1−y_I²),
// with ⟨a⟩/√N = u + iv and ⟨b_k⟩/√N = y_k.
struct MeanField {
    double u = 0.0, v = 0.0, y_c = 0.0, y_i = 0.0;
    double mu_c = 1.0, mu_i = 1.0;
    double gradient_norm = 0.0;
    int newton_steps = 0;
};

// Minimizes the classical energy on the branch (ε_C, ε_I); ε_k is 0 when
// direction k is unbroken and ±1 otherwise (BranchError on mismatch).
// Throws MeanFieldError when Newton refinement fails to reach a minimum.
MeanField double_mean_field(const DoubleDickeParams& p, int eps_c, int eps_i);

struct DoubleThermoSolution {
    DoublePhaseInfo info;
    MeanField mean_field;
    double mu_c = 1.0, mu_i = 1.0;
    std::array<cplx, 3> displacements{};  // photon, b_C, b_I per √N
    Eigen::Vector3d gaps = Eigen::Vector3d::Zero();
    Eigen::MatrixXcd polariton_transform;  // 6×6, rows e_k over (a, b_C, b_I, h.c.)
};

// Three-mode quadratic form around the mean field of branch (ε_C, ε_I).
QuadraticForm build_double_quadratic_form(const DoubleDickeParams& p, int eps_c, int eps_i);
// Default branch: +1 on every broken direction.
QuadraticForm build_double_quadratic_form(const DoubleDickeParams& p);

// H = ½ rᵀ K r + const with r = (x_1..x_n, p_1..p_n), x = (a + a†)/√2.
Eigen::MatrixXd quadrature_matrix(const QuadraticForm& form);

DoubleThermoSolution solve_double_thermo(const DoubleDickeParams& p);

// Ascending normal-mode frequencies; zeros are returned on critical lines.
Eigen::Vector3d double_gaps(const DoubleDickeParams& p);

// e₁ as coefficients over (a, b_C, b_I, a†, b_C†, b_I†), phase fixed so the
// a coefficient is real and positive. At the double critical point this is
// the exact zero mode a + c_C(b_C† − b_C) + i c_I(b_I − b_I†) with
// c_k = √(ω/4ω_k). RegimeError outside the normal phase or on a single
// critical line.
Eigen::VectorXcd lower_polariton(const DoubleDickeParams& p);

// Leading-order e₁ near λ_C^cr with λ_I < λ_I^cr for a given lower gap Δ̃₁.
Eigen::VectorXcd lower_polariton_asymptotic(const DoubleDickeParams& p, double gap1);

// Photon fluctuations. On a single critical line the diverging quadrature
// is +inf (dx for the C line, dp for the I line) and the report is flagged.
// The double point returns the finite zero-mode limit.
FluctuationReport hp_double(const DoubleDickeParams& p);

EntropyReport entropy_double(const DoubleDickeParams& p, bool include_degeneracy,
                             std::span<const double> renyi_alphas = {});

// ---- finite N -------------------------------------------------------------

// Photon ⊗ spin C ⊗ spin I; state (n, k_C, k_I) with k = m + j sits at
// n·(N_C+1)(N_I+1) + k_C·(N_I+1) + k_I.
struct DoubleEDBasis {
    int n_c = 1;
    int n_i = 1;
    int n_max = 1;

    DoubleEDBasis(int n_c, int n_i, int n_max);

    [[nodiscard]] Eigen::Index matter_dim() const { return Eigen::Index(n_c + 1) * (n_i + 1); }
    [[nodiscard]] Eigen::Index fock_dim() const { return n_max + 1; }
    [[nodiscard]] Eigen::Index dim() const { return fock_dim() * matter_dim(); }
    [[nodiscard]] Eigen::Index index(int n, int kc, int ki) const {
        return n * matter_dim() + Eigen::Index(kc) * (n_i + 1) + ki;
    }
    [[nodiscard]] std::uint64_t estimated_nnz() const { return 9ull * static_cast<std::uint64_t>(dim()); }
};

SparseH<cplx> build_double_hamiltonian(const DoubleDickeParams& p, const DoubleEDBasis& basis);

// ±1 diagonals of the symmetry operators in the product basis.
Eigen::VectorXd double_parity_diagonal(const DoubleEDBasis& basis);  // total excitation parity
Eigen::VectorXd chain_parity_diagonal(const DoubleEDBasis& basis, char chain);  // 'C' or 'I'
Eigen::VectorXd photon_parity_diagonal(const DoubleEDBasis& basis);

// ‖U H* U − H‖ for the antiunitary T_I = Π_I K and T_C = P_a Π_C K.
double antiunitary_commutator_norm(const SparseH<cplx>& h, const Eigen::VectorXd& u);

struct DoubleEDReport {
    ComplexEDResult result;
    FluctuationReport moments;
    double entropy = 0.0;
};

DoubleEDReport double_ed(const DoubleDickeParams& p, int n_max, const EDOptions& opt = {});

// ---- sweeps ----------------------------------------------------------------

enum class SweepMode { Thermo, ED };

struct RadialOptions {
    SweepMode mode = SweepMode::Thermo;
    std::vector<double> renyi_alphas;
    int n_spins = 8;   // ED only, N_C = N_I
    int n_max = 30;    // ED only
    EDOptions ed;
};

// Rows for λ_C = r cos θ, λ_I = r sin θ at `steps` evenly spaced radii in
// [r_min, r_max]. Per-row failures are recorded in the row.
std::vector<SweepRow> radial_sweep(const DoubleDickeParams& base, double theta, double r_min,
                                   double r_max, int steps, const RadialOptions& opt = {});

// Radii at which the ray θ crosses λ_C^cr and λ_I^cr (inf when parallel).
std::array<double, 2> critical_radii(const DoubleDickeParams& base, double theta);

// Thermodynamic-limit row at a single point (shared by sweeps and the CLI).
SweepRow double_thermo_row(const DoubleDickeParams& p, std::span<const double> renyi_alphas);
SweepRow double_ed_row(const DoubleDickeParams& p, int n_max, const EDOptions& opt,
                       std::span<const double> renyi_alphas);

}  // namespace dickehp
