#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "dickehp/dicke_ed.hpp"
#include "dickehp/errors.hpp"
#include "dickehp/lanczos.hpp"
#include "oracles.hpp"

using namespace dickehp;
using doctest::Approx;

TEST_CASE("assembled Hamiltonian equals the Kronecker-product construction") {
    for (int n : {1, 2, 5}) {
        const DickeParams p{1.3, 0.7, 0.45};
        const EDBasis b(n, 6);
        const Eigen::MatrixXd h = Eigen::MatrixXd(build_hamiltonian(p, b));
        const Eigen::MatrixXd ref = oracle::dense_dicke(p.omega, p.omega0, p.lambda, n, 6);
        CHECK((h - ref).norm() < 1e-13);
        CHECK(static_cast<std::uint64_t>(build_hamiltonian(p, b).nonZeros()) <= b.estimated_nnz());
    }
    CHECK_THROWS_AS(EDBasis(4, 0), CutoffError);
}

TEST_CASE("ground state against dense diagonalization") {
    const DickeParams p{1.0, 1.0, 0.7};
    const int n = 6, nm = 30;
    const Eigen::MatrixXd ref = oracle::dense_dicke(p.omega, p.omega0, p.lambda, n, nm);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref);
    EDOptions opt;
    opt.dense_threshold = 0;  // force the iterative path
    const EDBasis b(n, nm);
    const auto r = solve_ed(p, b, opt);
    CHECK(r.ground_energy == Approx(es.eigenvalues()(0)).epsilon(1e-10));
    CHECK(r.gap01 == Approx(es.eigenvalues()(1) - es.eigenvalues()(0)).epsilon(1e-7));
    const Eigen::MatrixXcd rho = oracle::photon_rho(Eigen::VectorXd(es.eigenvectors().col(0)), nm + 1);
    CHECK(photon_entropy_ed(r, b) == Approx(oracle::entropy_bits(rho)).epsilon(1e-8));
    CHECK(photon_moments_ed(r, b).hp == Approx(oracle::hp_from_density(rho)).epsilon(1e-8));
    CHECK(std::abs(r.parity) == Approx(1.0));
}

TEST_CASE("parity commutes with the Hamiltonian") {
    const EDBasis b(7, 9);
    const auto h = build_hamiltonian({1.0, 2.0, 1.3}, b);
    CHECK(diagonal_commutator_norm(h, parity_diagonal(b)) == 0.0);
}

TEST_CASE("lanczos on a random sparse matrix") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int n = 900;
    std::vector<Eigen::Triplet<double>> t;
    for (int i = 0; i < n; ++i) {
        t.emplace_back(i, i, 10.0 * u(rng));
        for (int k = 0; k < 3; ++k) {
            const int j = static_cast<int>((rng() % n));
            const double v = u(rng);
            t.emplace_back(i, j, v);
            t.emplace_back(j, i, v);
        }
    }
    SparseH<double> h(n, n);
    h.setFromTriplets(t.begin(), t.end());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(h)};
    EigenOptions opt;
    opt.k = 3;
    opt.dense_threshold = 0;
    const auto ep = lowest_eigenpairs(h, opt);
    CHECK_FALSE(ep.dense);
    for (int k = 0; k < 3; ++k) CHECK(ep.values(k) == Approx(es.eigenvalues()(k)).epsilon(1e-9));
    CHECK(ep.max_residual < 1e-8);
}

TEST_CASE("budget is checked before assembly") {
    EDOptions opt;
    opt.budget_nnz = 100;
    CHECK_THROWS_AS(solve_ed({1.0, 1.0, 0.5}, EDBasis(10, 20), opt), BudgetExceeded);
    CHECK_THROWS_AS(converge_cutoff({1.0, 1.0, 0.5}, 10, 1e-6, opt), BudgetExceeded);
}

TEST_CASE("cutoff search converges and reports the larger check") {
    const auto cs = converge_cutoff({1.0, 1.0, 0.5}, 8, 1e-9);
    CHECK(std::abs(cs.hp - cs.hp_check) < 1e-9);
    CHECK(cs.result.top_occupancy <= kCutoffWarning);
    CHECK(cs.result.cutoff_converged);
    CHECK(cs.tried.size() >= 2);
    CHECK(cs.n_max <= coherent_cutoff_estimate({1.0, 1.0, 0.5}, 8) * 2);
}

TEST_CASE("weak coupling approaches the thermodynamic limit") {
    const DickeParams p{1.0, 1.0, 0.2};
    const auto big = converge_cutoff(p, 400, 1e-9);
    const auto thermo = hp_thermo(p);
    CHECK(big.hp == Approx(thermo.hp).epsilon(2e-3));
}

TEST_CASE("state export round trip") {
    const auto path = (std::filesystem::temp_directory_path() / "dickehp_state_test.bin").string();
    const EDBasis b(3, 5);
    const auto r = solve_ed({1.0, 1.0, 0.4}, b);
    export_state(path, r.state, b.fock_dim());
    const auto imp = import_state(path);
    CHECK_FALSE(imp.is_complex);
    CHECK(imp.n_fock == 6);
    CHECK(imp.env_dim == 4);
    CHECK((imp.amplitudes - r.state.cast<cplx>()).norm() == 0.0);
    std::FILE* f = std::fopen(path.c_str(), "r+b");
    std::fputc('X', f);
    std::fclose(f);
    CHECK_THROWS_AS(import_state(path), DomainError);
    std::filesystem::remove(path);
}

TEST_CASE("scaling report fit window") {
    const auto rep = scaling_at_critical({1.0, 1.0, 0.5}, {2, 4, 8, 16, 32, 64}, 1e-8);
    CHECK(rep.points.size() == 6);
    CHECK(rep.window_min >= 8);
    for (std::size_t i = 1; i < rep.points.size(); ++i) CHECK(rep.points[i].hp > rep.points[i - 1].hp);
    CHECK(rep.hp_fit.exponent > 0.0);
    CHECK_THROWS_AS(scaling_at_critical({1.0, 1.0, 0.5}, {4, 8, 16}, 1e-8), DegenerateFit);
}

TEST_CASE("uncoupled ground state is the lowest Dicke state with no photons") {
    const EDBasis b(6, 4);
    const auto h = build_hamiltonian({1.0, 1.3, 0.0}, b);
    const Eigen::MatrixXd hd = Eigen::MatrixXd(h);
    CHECK((hd - Eigen::MatrixXd(hd.diagonal().asDiagonal())).norm() == 0.0);
    const auto r = solve_ed({1.0, 1.3, 0.0}, b);
    CHECK(r.ground_energy == Approx(-1.3 * 3.0));
    CHECK(std::abs(r.state(b.index(0, 0))) == Approx(1.0));
    CHECK(photon_moments_ed(r, b).hp == Approx(0.5));
    CHECK(photon_entropy_ed(r, b) == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("small dense comparisons") {
    {
        const DickeParams p{1.0, 1.0, 0.2};
        const Eigen::MatrixXd ref = oracle::dense_dicke(1.0, 1.0, 0.2, 1, 40);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref);
        CHECK(solve_ed(p, EDBasis(1, 40)).ground_energy == Approx(es.eigenvalues()(0)).epsilon(1e-12));
    }
    {
        const Eigen::MatrixXd ref = oracle::dense_dicke(1.0, 1.0, 0.45, 8, 60);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref);
        EDOptions opt;
        opt.dense_threshold = 0;
        const auto r = solve_ed({1.0, 1.0, 0.45}, EDBasis(8, 60), opt);
        CHECK(std::abs(r.ground_energy - es.eigenvalues()(0)) < 1e-9);
    }
    const EDBasis b4(4, 20);
    CHECK(diagonal_commutator_norm(build_hamiltonian({1.0, 1.0, 0.5}, b4), parity_diagonal(b4)) < 1e-12);
}

TEST_CASE("lanczos on a diagonal matrix returns the smallest entry") {
    const int n = 700;
    SparseH<double> h(n, n);
    for (int i = 0; i < n; ++i) h.insert(i, i) = std::cos(0.37 * i) + 1e-3 * i;
    double lo = 1e300;
    for (int i = 0; i < n; ++i) lo = std::min(lo, h.coeff(i, i));
    EigenOptions opt;
    opt.dense_threshold = 0;
    CHECK(lowest_eigenpairs(h, opt).values(0) == Approx(lo).epsilon(1e-12));
}

TEST_CASE("deep superradiance splits the doublet exponentially") {
    const auto cs = converge_cutoff({1.0, 1.0, 1.0}, 16, 1e-8);
    CHECK(cs.result.gap01 < 1e-6);
    CHECK(cs.result.parity * cs.result.excited_parity < 0.0);
}

TEST_CASE("cutoff examples") {
    const auto zero = converge_cutoff({1.0, 1.0, 0.0}, 8, 1e-10);
    CHECK(zero.n_max == 1);
    CHECK(zero.hp == Approx(0.5));

    const auto c32 = converge_cutoff({1.0, 1.0, 0.5}, 32, 1e-8);
    const EDBasis wide(32, c32.n_max + 20);
    CHECK(std::abs(photon_moments_ed(solve_ed({1.0, 1.0, 0.5}, wide), wide).hp - c32.hp) < 1e-6);

    const auto c100 = converge_cutoff({1.0, 1.0, 0.5}, 100, 1e-8);
    const EDBasis b15(100, c100.n_max * 3 / 2);
    CHECK(std::abs(photon_moments_ed(solve_ed({1.0, 1.0, 0.5}, b15), b15).hp - c100.hp) < 1e-8);

    // N λ²/ω² = 144 photons need a cutoff near 600.
    CHECK(coherent_cutoff_estimate({1.0, 1.0, 3.0}, 16) >= 576);
    EDOptions small;
    small.budget_nnz = 20'000;
    CHECK_THROWS_AS(converge_cutoff({1.0, 1.0, 3.0}, 16, 1e-8, small), BudgetExceeded);
}

TEST_CASE("weak-coupling entropy follows the Gaussian formula") {
    const auto cs = converge_cutoff({1.0, 1.0, 0.3}, 8, 1e-10);
    const EDBasis b(8, cs.n_max);
    const double s = photon_entropy_ed(cs.result, b);
    CHECK(std::abs(s - entropy_from_hp(photon_moments_ed(cs.result, b).hp)) < 5e-2);
}

TEST_CASE("deep superradiant hp follows the coherent displacement") {
    const auto cs = converge_cutoff({1.0, 1.0, 3.0}, 8, 1e-8);
    CHECK(cs.hp == Approx(std::sqrt(8 * 9.0 + 0.25)).epsilon(0.02));
}

TEST_CASE("off-critical finite-size exponent vanishes") {
    const auto rep = scaling_at_critical({1.0, 1.0, 0.45}, {10, 20, 50, 100, 200, 500, 1000}, 1e-8);
    CHECK(std::abs(rep.hp_fit.exponent) < 0.02);

    std::vector<double> n, hp;
    for (double x : {10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0}) {
        n.push_back(x);
        hp.push_back(std::pow(x, 1.0 / 6.0));
    }
    CHECK(fit_power_law(n, hp).exponent == Approx(1.0 / 6.0).epsilon(1e-12));
}
