#include "doctest.h"

#include <cmath>
#include <numbers>

#include "dickehp/dicke_thermo.hpp"
#include "dickehp/errors.hpp"
#include "dickehp/fit.hpp"
#include "oracles.hpp"

using namespace dickehp;
using doctest::Approx;

namespace {

// Eigenfrequencies of the 2x2 quadrature problem, solved independently of
// the library: H = ½ rᵀ K r, frequencies are √eig(K_x K_p) for real forms.
std::pair<double, double> oracle_gaps(const QuadraticForm& f) {
    const Eigen::MatrixXd A = f.A.real(), B = f.B.real();
    const Eigen::MatrixXd kx = A + B, kp = A - B;
    Eigen::EigenSolver<Eigen::MatrixXd> es(kx * kp);
    double a = std::sqrt(es.eigenvalues()(0).real()), b = std::sqrt(es.eigenvalues()(1).real());
    return {std::min(a, b), std::max(a, b)};
}

}  // namespace

TEST_CASE("critical coupling and phase labels") {
    DickeParams p{1.0, 4.0, 0.0};
    CHECK(p.lambda_cr() == Approx(1.0));
    p.lambda = 0.9;
    CHECK(classify_phase(p).phase == Phase::Normal);
    p.lambda = 1.0;
    CHECK(classify_phase(p).phase == Phase::Critical);
    p.lambda = 1.1;
    CHECK(classify_phase(p).phase == Phase::Superradiant);
    CHECK(to_string(Phase::Superradiant) == "superradiant");
    CHECK_THROWS_AS(DickeParams({-1.0, 1.0, 0.1}).validate(), DomainError);
    CHECK_THROWS_AS(DickeParams({1.0, 1.0, -0.1}).validate(), DomainError);
}

TEST_CASE("branch selection") {
    DickeParams np{1.0, 1.0, 0.3}, sp{1.0, 1.0, 0.8};
    CHECK_THROWS_AS(solve_thermo(np, 1), BranchError);
    CHECK_THROWS_AS(solve_thermo(sp, 0), BranchError);
    CHECK_THROWS_AS(solve_thermo(sp, 2), BranchError);
    const auto plus = solve_thermo(sp, 1), minus = solve_thermo(sp, -1);
    CHECK(plus.alpha_coh == Approx(-minus.alpha_coh));
    CHECK(plus.gap_minus == Approx(minus.gap_minus));
    // Mean field: α² = (λ²/ω²)(1 − μ²) per spin.
    const double mu = 1.0 / (4 * 0.64);
    CHECK(plus.mu == Approx(mu));
    CHECK(plus.alpha_coh * plus.alpha_coh == Approx(0.64 * (1 - mu * mu)));
}

TEST_CASE("gaps agree with the quadratic form") {
    for (double lam : {0.0, 0.2, 0.45, 0.55, 0.9, 2.0}) {
        for (double w0 : {0.5, 1.0, 3.0}) {
            DickeParams p{1.0, w0, lam * std::sqrt(w0)};
            if (classify_phase(p).phase == Phase::Critical) continue;
            const auto s = solve_thermo(p);
            const auto [lo, hi] = oracle_gaps(dicke_quadratic_form(p, s.epsilon));
            CAPTURE(lam);
            CAPTURE(w0);
            CHECK(s.gap_minus == Approx(lo).epsilon(1e-10));
            CHECK(s.gap_plus == Approx(hi).epsilon(1e-10));
        }
    }
}

TEST_CASE("closed-form HP matches the Bogoliubov pipeline") {
    for (double lam : {0.1, 0.3, 0.49, 0.51, 0.7, 1.5}) {
        for (double w0 : {0.5, 1.0, 2.0}) {
            DickeParams p{1.0, w0, lam * std::sqrt(w0) * 2.0 * 0.5};
            if (classify_phase(p).phase == Phase::Critical) continue;
            const auto s = solve_thermo(p);
            const auto viaform = photon_moments_from_solution(symplectic_diagonalize(dicke_quadratic_form(p, s.epsilon)));
            const auto closed = hp_thermo(p);
            CAPTURE(p.lambda);
            CHECK(closed.hp == Approx(viaform.hp).epsilon(1e-10));
            CHECK(closed.dx == Approx(viaform.dx).epsilon(1e-10));
            CHECK(closed.dp == Approx(viaform.dp).epsilon(1e-10));
        }
    }
}

TEST_CASE("quadratic form against a dense Fock ground state") {
    DickeParams p{1.0, 1.0, 0.35};
    const auto f = dicke_quadratic_form(p);
    const auto dense = oracle::dense_ground_state(f, 30);
    CHECK(hp_thermo(p).hp == Approx(oracle::hp_from_density(dense.rho0)).epsilon(1e-8));
    CHECK(entropy_thermo(p, false).s_vn == Approx(oracle::entropy_bits(dense.rho0)).epsilon(1e-7));
}

TEST_CASE("critical point is tagged") {
    DickeParams p{1.0, 1.0, 0.5};
    const auto r = hp_thermo(p);
    CHECK(r.divergent);
    CHECK(std::isinf(r.hp));
    CHECK(r.divergence_exponent == Approx(-0.25));
    CHECK(std::isinf(entropy_thermo(p, false).s_vn));
}

TEST_CASE("limits: uncoupled, weak and deep superradiance") {
    CHECK(hp_thermo({1.0, 1.0, 0.0}).hp == Approx(0.5));
    // Detuned at λ = 0 the photon is already in its vacuum.
    CHECK(hp_thermo({1.0, 0.3, 0.0}).hp == Approx(0.5));
    CHECK(hp_thermo({1.0, 1.0, 50.0}).hp == Approx(0.5).epsilon(1e-5));
    const auto e = entropy_thermo({1.0, 1.0, 0.8}, true);
    CHECK(e.degeneracy_offset == 1);
    CHECK(e.s_vn == Approx(entropy_thermo({1.0, 1.0, 0.8}, false).s_vn + 1.0));
}

TEST_CASE("mixing angle stays in range") {
    for (double w0 : {0.2, 1.0, 5.0})
        for (double lam : {0.0, 0.1, 0.3, 1.0, 3.0}) {
            DickeParams p{1.0, w0, lam};
            if (classify_phase(p).phase == Phase::Critical) continue;
            const auto s = solve_thermo(p);
            CHECK(s.gamma >= 0.0);
            CHECK(s.gamma <= std::numbers::pi / 2 + 1e-15);
        }
}

TEST_CASE("phase examples") {
    CHECK(classify_phase({1.0, 1.0, 0.4}).phase == Phase::Normal);
    CHECK(classify_phase({1.0, 1.0, 0.4}).lambda_cr == Approx(0.5));
    CHECK(classify_phase({1.0, 1.0, 0.5}).phase == Phase::Critical);
    CHECK(classify_phase({2.0, 0.5, 0.6}).phase == Phase::Superradiant);
}

TEST_CASE("normal-phase gaps from the closed form") {
    // 2Δ±² = (ω₀/μ)² + ω² ± √(((ω₀/μ)² − ω²)² + 16λ²ωω₀μ) with μ = 1.
    const double lam = 0.3;
    const auto s = solve_thermo({1.0, 1.0, lam});
    const double root = std::sqrt(16 * lam * lam);
    CHECK(s.gap_minus == Approx(std::sqrt((2.0 - root) / 2)).epsilon(1e-14));
    CHECK(s.gap_plus == Approx(std::sqrt((2.0 + root) / 2)).epsilon(1e-14));
    const auto z = solve_thermo({1.0, 1.0, 0.0});
    CHECK(z.gap_minus == Approx(1.0));
    CHECK(z.gamma == 0.0);
    CHECK(z.mu == 1.0);
    const auto d = solve_thermo({0.7, 1.9, 0.0});
    CHECK(d.gap_minus == Approx(0.7));
    CHECK(d.gap_plus == Approx(1.9));
    CHECK(d.gamma == Approx(0.0));
}

TEST_CASE("superradiant point λ = 1 at resonance") {
    const DickeParams p{1.0, 1.0, 1.0};
    const auto s = solve_thermo(p);
    CHECK(s.mu == Approx(0.25));
    const auto sol = symplectic_diagonalize(dicke_quadratic_form(p, 1));
    CHECK(s.gap_minus == Approx(sol.gaps(0)).epsilon(1e-12));
    CHECK(s.gap_plus == Approx(sol.gaps(1)).epsilon(1e-12));
}

TEST_CASE("critical exponents close to λ_cr") {
    std::vector<double> d, gap, hp, s;
    for (int i = 0; i < 25; ++i) {
        const double x = 0.05 * std::pow(1e-4 / 0.05, i / 24.0);
        d.push_back(x);
        gap.push_back(solve_thermo({1.0, 1.0, 0.5 - x}).gap_minus);
    }
    // λ ∈ [0.45, 0.4999]
    CHECK(std::abs(fit_critical_exponent(d, gap).exponent - 0.5) <= 0.01);

    std::vector<double> dn, lx;
    for (int i = 0; i < 25; ++i) {
        const double x = std::pow(10.0, -8.0 + 3.0 * i / 24.0);
        dn.push_back(x);
        lx.push_back(std::log2(x));
        hp.push_back(hp_thermo({1.0, 1.0, 0.5 - x}).hp);
        s.push_back(entropy_thermo({1.0, 1.0, 0.5 - x}, false).s_vn);
    }
    CHECK(std::abs(fit_critical_exponent(dn, hp).exponent + 0.25) <= 0.01);
    CHECK(std::abs(fit_linear(lx, s).slope + 0.25) <= 0.02);
}

TEST_CASE("entropy examples") {
    CHECK(entropy_thermo({1.0, 1.0, 0.0}, false).s_vn == 0.0);
    CHECK(entropy_thermo({1.0, 1.0, 1.0}, true).s_vn ==
          Approx(entropy_from_hp(hp_thermo({1.0, 1.0, 1.0}).hp) + 1.0).epsilon(1e-14));
}
