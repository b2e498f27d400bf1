#include "dickehp/dicke_thermo.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dickehp/errors.hpp"

namespace dickehp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ωω₀ − 4λ², written to keep relative accuracy near λ_cr.
double detuning_product(const DickeParams& p) {
    const double lc = p.lambda_cr();
    return 4.0 * (lc - p.lambda) * (lc + p.lambda);
}

double order_parameter(const DickeParams& p, Phase phase) {
    if (phase != Phase::Superradiant) return 1.0;
    return p.omega * p.omega0 / (4.0 * p.lambda * p.lambda);
}

}  // namespace

double DickeParams::lambda_cr() const { return 0.5 * std::sqrt(omega * omega0); }

void DickeParams::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("DickeParams: omega must be positive");
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw DomainError("DickeParams: omega0 must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("DickeParams: lambda must be >= 0");
}

std::string to_string(Phase p) {
    switch (p) {
        case Phase::Normal: return "normal";
        case Phase::Critical: return "critical";
        case Phase::Superradiant: return "superradiant";
    }
    return "?";
}

PhaseInfo classify_phase(const DickeParams& p) {
    p.validate();
    PhaseInfo info;
    info.lambda_cr = p.lambda_cr();
    const double d = p.lambda - info.lambda_cr;
    if (std::abs(d) <= kCriticalRelTol * info.lambda_cr)
        info.phase = Phase::Critical;
    else
        info.phase = d < 0.0 ? Phase::Normal : Phase::Superradiant;
    return info;
}

ThermoSolution solve_thermo(const DickeParams& p, int epsilon) {
    const PhaseInfo info = classify_phase(p);
    if (epsilon < -1 || epsilon > 1) throw BranchError("solve_thermo: epsilon must be -1, 0 or +1");
    if (info.phase == Phase::Normal && epsilon != 0)
        throw BranchError("solve_thermo: epsilon must be 0 in the normal phase");
    if (info.phase == Phase::Superradiant && epsilon == 0)
        throw BranchError("solve_thermo: epsilon must be +1 or -1 in the superradiant phase");

    ThermoSolution s;
    s.phase = info.phase;
    s.epsilon = info.phase == Phase::Superradiant ? epsilon : 0;
    s.mu = order_parameter(p, info.phase);

    const double w = p.omega, w0 = p.omega0, mu = s.mu, lam = p.lambda;
    const double a = (w0 / mu) * (w0 / mu);
    const double disc = std::sqrt((a - w * w) * (a - w * w) + 16.0 * lam * lam * w * w0 * mu);
    const double plus2 = 0.5 * (a + w * w + disc);

    // Δ₊²Δ₋² = (ω₀ω/μ)² − 4λ²ωω₀μ, expanded so that the zero at λ_cr is exact.
    double prod = 0.0;
    if (info.phase == Phase::Normal) {
        prod = w * w0 * detuning_product(p);
    } else if (info.phase == Phase::Superradiant) {
        // 1 − μ² with 1 − μ = (λ − λ_cr)(λ + λ_cr)/λ²
        const double lc = p.lambda_cr();
        const double one_minus_mu = (lam - lc) * (lam + lc) / (lam * lam);
        prod = (w * w0 / mu) * (w * w0 / mu) * one_minus_mu * (1.0 + mu);
    }
    s.gap_plus = std::sqrt(plus2);
    s.gap_minus = std::sqrt(std::max(prod, 0.0) / plus2);
    s.gamma = 0.5 * std::atan2(4.0 * lam * std::sqrt(w * w0) * std::pow(mu, 2.5), w0 * w0 - mu * mu * w * w);

    if (s.epsilon != 0) {
        s.alpha_coh = s.epsilon * std::sqrt(1.0 - mu * mu) * lam / w;
        // The spin displacement has the opposite sign: the coupling energy
        // 4λ Re⟨a⟩ β √(1−β²) is negative only then.
        s.beta_coh = -s.epsilon * std::sqrt(0.5 * (1.0 - mu));
    }
    return s;
}

ThermoSolution solve_thermo(const DickeParams& p) {
    const PhaseInfo info = classify_phase(p);
    return solve_thermo(p, info.phase == Phase::Superradiant ? 1 : 0);
}

FluctuationReport hp_thermo(const DickeParams& p) {
    const ThermoSolution s = solve_thermo(p);
    FluctuationReport r;
    if (s.phase == Phase::Critical) {
        r.dx = kInf;
        r.dp = std::numeric_limits<double>::quiet_NaN();
        r.hp = r.hp_raw = kInf;
        r.n_occ = kInf;
        r.divergent = true;
        r.divergence_exponent = -0.25;
        return r;
    }
    const double c2 = std::cos(s.gamma) * std::cos(s.gamma);
    const double s2 = std::sin(s.gamma) * std::sin(s.gamma);
    const double xx = c2 / (2.0 * s.gap_minus) + s2 / (2.0 * s.gap_plus);
    const double pp = 0.5 * (c2 * s.gap_minus + s2 * s.gap_plus);
    r.hp = std::max(std::sqrt(xx * pp), 0.5);
    r.hp_raw = r.hp;
    r.dx = std::sqrt(p.omega * xx);
    r.dp = std::sqrt(pp / p.omega);

    // ⟨x²⟩ = n + ½ + Re sq, ⟨p²⟩ = n + ½ − Re sq with sq real here.
    const double vx = r.dx * r.dx, vp = r.dp * r.dp;
    r.n_occ = 0.5 * (vx + vp) - 0.5;
    r.sq = cplx{0.5 * (vx - vp), 0.0};
    r.mean_a = cplx{s.alpha_coh, 0.0};  // per √N
    return r;
}

EntropyReport entropy_thermo(const DickeParams& p, bool include_degeneracy,
                             std::span<const double> renyi_alphas) {
    const PhaseInfo info = classify_phase(p);
    const FluctuationReport r = hp_thermo(p);
    const int offset = include_degeneracy && info.phase == Phase::Superradiant ? 1 : 0;
    return entropy_report(r.hp, offset, renyi_alphas);
}

QuadraticForm dicke_quadratic_form(const DickeParams& p, int epsilon) {
    const ThermoSolution s = solve_thermo(p, epsilon);
    const double mu = s.mu;
    const double w0t = p.omega0 * (1.0 + mu) / (2.0 * mu);
    const double rho = p.omega0 * (1.0 - mu) * (3.0 + mu) / (8.0 * mu * (1.0 + mu));
    const double kappa = p.lambda * mu * std::sqrt(2.0 / (1.0 + mu));

    // ω c†c + ω̃₀ d†d + ρ (d + d†)² + κ (c + c†)(d + d†)
    QuadraticForm f(2);
    f.A(0, 0) = p.omega;
    f.A(1, 1) = w0t + 2.0 * rho;
    f.B(1, 1) = 2.0 * rho;
    f.A(0, 1) = f.A(1, 0) = kappa;
    f.B(0, 1) = f.B(1, 0) = kappa;
    f.e0 = rho;
    return f;
}

}  // namespace dickehp
