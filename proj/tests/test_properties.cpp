// Randomized property checks. Each case reports its seed on failure.

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "dickehp/dicke_ed.hpp"
#include "dickehp/dicke_thermo.hpp"
#include "dickehp/double_dicke.hpp"
#include "oracles.hpp"

using namespace dickehp;
using doctest::Approx;

namespace {

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    DoubleDickeParams double_params() {
        DoubleDickeParams p;
        p.omega_cav = uniform(0.5, 2.0);
        p.omega0_c = uniform(0.5, 2.0);
        p.omega0_i = uniform(0.5, 2.0);
        p.lambda_c = uniform(0.0, 2.0) * p.lambda_c_cr();
        p.lambda_i = uniform(0.0, 2.0) * p.lambda_i_cr();
        return p;
    }
};

constexpr int kCases = 60;

}  // namespace

TEST_CASE("property: hp is invariant under a global phase of the mode") {
    for (std::uint64_t seed = 1; seed <= kCases; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        RawMoments m;
        m.mean_a = cplx(g.uniform(-2, 2), g.uniform(-2, 2));
        const double n_c = g.uniform(0.0, 3.0);
        const double r = g.uniform(0.0, 0.99) * std::sqrt(n_c * (n_c + 1.0));
        const double ph = g.uniform(0.0, 2 * std::numbers::pi);
        m.n_raw = n_c + std::norm(m.mean_a);
        m.a2 = std::polar(r, ph) + m.mean_a * m.mean_a;
        const auto a = heisenberg_product(m);
        const auto b = heisenberg_product(rotate_moments(m, g.uniform(-10, 10)));
        CHECK(a.hp >= 0.5);
        CHECK(b.hp == Approx(a.hp).epsilon(1e-10));
        // The minimal rotation may land on either principal axis.
        CHECK(std::min(b.dx, b.dp) == Approx(std::min(a.dx, a.dp)).epsilon(1e-9));
        CHECK(std::max(b.dx, b.dp) == Approx(std::max(a.dx, a.dp)).epsilon(1e-9));
    }
}

TEST_CASE("property: relabeling and rephasing other modes leave mode 0 alone") {
    for (std::uint64_t seed = 1; seed <= kCases; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        const auto f = oracle::random_form(g.rng, 3, 0.3, 0.2);
        const double hp = photon_moments_from_solution(symplectic_diagonalize(f)).hp;
        CHECK(hp >= 0.5 - 1e-12);

        // Swap modes 1 and 2 and rephase mode 1 by e^{iφ}.
        Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(3, 3);
        u(0, 0) = 1.0;
        u(1, 2) = 1.0;
        u(2, 1) = std::polar(1.0, g.uniform(0, 6.28));
        QuadraticForm h(3);
        h.A = u.adjoint() * f.A * u;
        h.B = u.transpose() * f.B * u;
        h.d = u.transpose() * f.d;
        h.e0 = f.e0;
        CHECK(photon_moments_from_solution(symplectic_diagonalize(h)).hp == Approx(hp).epsilon(1e-10));
    }
}

TEST_CASE("property: Rényi entropies decrease with the order and bracket von Neumann") {
    for (std::uint64_t seed = 1; seed <= kCases; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        const double hp = 0.5 + std::exp(g.uniform(-8, 6));
        const double s1 = entropy_from_hp(hp);
        CHECK(renyi_entropy(hp, 0.5) >= s1);
        CHECK(renyi_entropy(hp, 2.0) <= s1);
        CHECK(renyi_entropy(hp, 3.0) <= renyi_entropy(hp, 2.0));
        CHECK(entropy_from_hp(hp * 1.01) > s1);
    }
}

TEST_CASE("property: Dicke branches are equivalent") {
    for (std::uint64_t seed = 1; seed <= kCases; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        DickeParams p{g.uniform(0.3, 3.0), g.uniform(0.3, 3.0), 0.0};
        p.lambda = p.lambda_cr() * g.uniform(1.01, 4.0);
        const auto a = solve_thermo(p, 1), b = solve_thermo(p, -1);
        CHECK(a.gap_minus == Approx(b.gap_minus).epsilon(1e-12));
        CHECK(a.alpha_coh == Approx(-b.alpha_coh).epsilon(1e-12));
        const auto fa = photon_moments_from_solution(symplectic_diagonalize(dicke_quadratic_form(p, 1)));
        const auto fb = photon_moments_from_solution(symplectic_diagonalize(dicke_quadratic_form(p, -1)));
        CHECK(fa.hp == Approx(fb.hp).epsilon(1e-10));
        CHECK(fa.hp == Approx(hp_thermo(p).hp).epsilon(1e-10));
    }
}

TEST_CASE("property: double-model branches, duality and reduction") {
    for (std::uint64_t seed = 1; seed <= kCases; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        const auto p = g.double_params();
        const auto info = classify_double_phase(p);
        if (info.critical()) continue;
        const auto a = hp_double(p);
        const auto s = p.swapped();
        const auto b = hp_double(s);
        CHECK(b.hp == Approx(a.hp).epsilon(1e-9));
        CHECK(b.dx == Approx(a.dp).epsilon(1e-9));
        CHECK(b.dp == Approx(a.dx).epsilon(1e-9));

        const bool bc = p.lambda_c > p.lambda_c_cr(), bi = p.lambda_i > p.lambda_i_cr();
        const auto ref = photon_moments_from_solution(
            symplectic_diagonalize(build_double_quadratic_form(p, bc ? 1 : 0, bi ? 1 : 0)));
        const auto flipped = photon_moments_from_solution(
            symplectic_diagonalize(build_double_quadratic_form(p, bc ? -1 : 0, bi ? -1 : 0)));
        CHECK(flipped.hp == Approx(ref.hp).epsilon(1e-9));

        auto r = p;
        r.lambda_i = 0.0;
        CHECK(hp_double(r).hp == Approx(hp_thermo({r.omega_cav, r.omega0_c, r.lambda_c}).hp).epsilon(1e-10));
    }
}

TEST_CASE("property: symmetries of random finite-N Hamiltonians") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CAPTURE(seed);
        Gen g(seed);
        const EDBasis b(g.integer(1, 8), g.integer(1, 8));
        CHECK(diagonal_commutator_norm(build_hamiltonian({g.uniform(0.2, 2), g.uniform(0.2, 2), g.uniform(0, 3)}, b),
                                       parity_diagonal(b)) == 0.0);
        auto p = g.double_params();
        p.n_c = g.integer(1, 4);
        p.n_i = g.integer(1, 4);
        const DoubleEDBasis db(p.n_c, p.n_i, g.integer(1, 6));
        const auto h = build_double_hamiltonian(p, db);
        CHECK(diagonal_commutator_norm(h, double_parity_diagonal(db)) == 0.0);
        CHECK(antiunitary_commutator_norm(h, chain_parity_diagonal(db, 'I')) == 0.0);
        CHECK(antiunitary_commutator_norm(h, photon_parity_diagonal(db).cwiseProduct(chain_parity_diagonal(db, 'C'))) ==
              0.0);
    }
}
