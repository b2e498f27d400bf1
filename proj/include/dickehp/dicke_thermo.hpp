#pragma once

#include <span>
#include <string>

#include "dickehp/gaussian.hpp"

namespace dickehp {

// H = ω a†a + ω₀ J_z + (λ/√N)(a + a†)(J₊ + J₋)
struct DickeParams {
    double omega = 1.0;
    double omega0 = 1.0;
    double lambda = 0.0;

    [[nodiscard]] double lambda_cr() const;
    void validate() const;  // DomainError on nonpositive frequencies or λ < 0
};

enum class Phase { Normal, Critical, Superradiant };

std::string to_string(Phase p);

struct PhaseInfo {
    Phase phase = Phase::Normal;
    double lambda_cr = 0.0;
};

// Points with |λ − λ_cr| ≤ kCriticalRelTol·λ_cr are labeled critical.
inline constexpr double kCriticalRelTol = 1e-12;

PhaseInfo classify_phase(const DickeParams& p);

// Thermodynamic-limit solution. Coherences are per √N.
struct ThermoSolution {
    Phase phase = Phase::Normal;
    double mu = 1.0;
    double gamma = 0.0;  // mixing angle in [0, π/2)
    double gap_minus = 0.0;
    double gap_plus = 0.0;
    double alpha_coh = 0.0;  // ⟨a⟩/√N
    double beta_coh = 0.0;   // ⟨b⟩/√N of the Holstein-Primakoff boson
    int epsilon = 0;
};

// epsilon must be 0 in the normal phase and ±1 in the superradiant phase;
// BranchError otherwise. At the critical point both are accepted.
ThermoSolution solve_thermo(const DickeParams& p, int epsilon);

// Branch-free convenience: picks ε = +1 above λ_cr.
ThermoSolution solve_thermo(const DickeParams& p);

// ΔxΔp of the photon. At λ = λ_cr the result is flagged divergent with
// hp = dx = +inf and exponent −1/4.
FluctuationReport hp_thermo(const DickeParams& p);

// One extra bit in the superradiant phase when include_degeneracy is set.
EntropyReport entropy_thermo(const DickeParams& p, bool include_degeneracy,
                             std::span<const double> renyi_alphas = {});

// Quadratic Holstein-Primakoff expansion around the mean field of branch ε,
// modes (photon, spin boson). Linear terms vanish at the expansion point.
QuadraticForm dicke_quadratic_form(const DickeParams& p, int epsilon = 0);

}  // namespace dickehp
