#pragma once

// Pieces shared by the single- and double-chain exact diagonalization:
// parity-sector solves, photon reduced density matrices and state export.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dickehp/gaussian.hpp"
#include "dickehp/lanczos.hpp"

namespace dickehp {

struct EDOptions {
    double tol = 1e-10;                   // eigensolver relative residual
    std::uint64_t seed = 20140101;
    std::uint64_t budget_nnz = 50'000'000;
    bool split_parity = true;
    Eigen::Index dense_threshold = 600;
};

// Finite-N ground state. The state is stored photon-major: index
// n·env_dim + (matter index).
template <class Scalar>
struct BasicEDResult {
    double ground_energy = 0.0;
    double gap01 = 0.0;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> state;
    double parity = 0.0;          // ⟨Π⟩ of the returned state
    double excited_parity = 0.0;  // ⟨Π⟩ of the first excited state
    bool cutoff_converged = false;
    int n_max_used = 0;
    double top_occupancy = 0.0;   // weight on the highest Fock level
    int matvecs = 0;
    double residual = 0.0;
};

using EDResult = BasicEDResult<double>;
using ComplexEDResult = BasicEDResult<cplx>;

// Top-Fock occupancies above this make photon moments unreliable.
inline constexpr double kCutoffWarning = 1e-8;

namespace detail {

struct Sector {
    std::vector<Eigen::Index> index;  // sector position -> full index
};

template <class Scalar>
SparseH<Scalar> restrict_to(const SparseH<Scalar>& h, const Sector& s,
                            const std::vector<Eigen::Index>& position) {
    std::vector<Eigen::Triplet<Scalar>> trip;
    trip.reserve(static_cast<std::size_t>(h.nonZeros()));
    for (std::size_t r = 0; r < s.index.size(); ++r) {
        for (typename SparseH<Scalar>::InnerIterator it(h, s.index[r]); it; ++it) {
            const Eigen::Index c = position[static_cast<std::size_t>(it.col())];
            if (c >= 0) trip.emplace_back(static_cast<Eigen::Index>(r), c, it.value());
        }
    }
    const auto n = static_cast<Eigen::Index>(s.index.size());
    SparseH<Scalar> out(n, n);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

}  // namespace detail

// Lowest eigenpairs of h without symmetry reduction. The result's parity
// fields are filled when `parity` (a ±1 diagonal) is provided.
template <class Scalar>
BasicEDResult<Scalar> ground_state(const SparseH<Scalar>& h, int k, const EDOptions& opt,
                                   const Eigen::VectorXd* parity = nullptr) {
    EigenOptions eo;
    eo.k = std::max(1, std::min<int>(k, static_cast<int>(h.rows())));
    eo.tol = opt.tol;
    eo.seed = opt.seed;
    eo.dense_threshold = opt.dense_threshold;
    const EigenPairs<Scalar> ep = lowest_eigenpairs(h, eo);

    BasicEDResult<Scalar> r;
    r.ground_energy = ep.values(0);
    r.gap01 = ep.values.size() > 1 ? ep.values(1) - ep.values(0) : 0.0;
    r.state = ep.vectors.col(0);
    r.matvecs = ep.matvecs;
    r.residual = ep.max_residual;
    if (parity != nullptr) {
        r.parity = std::real(r.state.dot(parity->cwiseProduct(r.state).template cast<Scalar>()));
        if (ep.values.size() > 1) {
            const auto v1 = ep.vectors.col(1);
            r.excited_parity = std::real(v1.dot(parity->cwiseProduct(v1).template cast<Scalar>()));
        }
    }
    return r;
}

// Solves the two parity sectors of h separately (parity must be a ±1
// diagonal commuting with h) and merges the two lowest levels. A
// quasi-degenerate pair (gap below 1e-10·|E₀|) returns its even member.
template <class Scalar>
BasicEDResult<Scalar> solve_by_parity(const SparseH<Scalar>& h, const Eigen::VectorXd& parity,
                                      const EDOptions& opt) {
    if (!opt.split_parity) return ground_state(h, 2, opt, &parity);

    const Eigen::Index n = h.rows();
    detail::Sector even, odd;
    for (Eigen::Index i = 0; i < n; ++i) (parity(i) > 0 ? even : odd).index.push_back(i);

    struct Level {
        double energy;
        double parity;
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vec;
    };
    std::vector<Level> levels;
    BasicEDResult<Scalar> r;

    for (const detail::Sector* s : {&even, &odd}) {
        if (s->index.empty()) continue;
        std::vector<Eigen::Index> pos(static_cast<std::size_t>(n), -1);
        for (std::size_t i = 0; i < s->index.size(); ++i)
            pos[static_cast<std::size_t>(s->index[i])] = static_cast<Eigen::Index>(i);
        const SparseH<Scalar> hs = detail::restrict_to(h, *s, pos);

        EigenOptions eo;
        eo.k = std::min<int>(2, static_cast<int>(hs.rows()));
        eo.tol = opt.tol;
        eo.seed = opt.seed;
        eo.dense_threshold = opt.dense_threshold;
        const EigenPairs<Scalar> ep = lowest_eigenpairs(hs, eo);
        r.matvecs += ep.matvecs;
        r.residual = std::max(r.residual, ep.max_residual);

        const double sign = s == &even ? 1.0 : -1.0;
        for (Eigen::Index c = 0; c < ep.values.size(); ++c) {
            Level lv{ep.values(c), sign, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n)};
            for (std::size_t i = 0; i < s->index.size(); ++i)
                lv.vec(s->index[i]) = ep.vectors(static_cast<Eigen::Index>(i), c);
            levels.push_back(std::move(lv));
        }
    }
    std::sort(levels.begin(), levels.end(),
              [](const Level& a, const Level& b) { return a.energy < b.energy; });

    std::size_t g = 0;
    r.gap01 = levels.size() > 1 ? levels[1].energy - levels[0].energy : 0.0;
    if (levels.size() > 1 && r.gap01 < 1e-10 * std::max(1.0, std::abs(levels[0].energy)) &&
        levels[0].parity < 0.0)
        g = 1;
    r.ground_energy = levels[g].energy;
    r.state = levels[g].vec;
    r.parity = levels[g].parity;
    if (levels.size() > 1) r.excited_parity = levels[1 - g].parity;
    return r;
}

// ‖DH − HD‖_F for a diagonal D.
template <class Scalar>
double diagonal_commutator_norm(const SparseH<Scalar>& h, const Eigen::VectorXd& d) {
    double acc = 0.0;
    for (Eigen::Index r = 0; r < h.outerSize(); ++r)
        for (typename SparseH<Scalar>::InnerIterator it(h, r); it; ++it)
            acc += std::norm((d(r) - d(it.col())) * it.value());
    return std::sqrt(acc);
}

// ρ_r[n, n'] = Σ_e ψ(n, e) ψ*(n', e).
template <class Scalar>
Eigen::MatrixXcd photon_density_matrix(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& state,
                                       Eigen::Index n_fock) {
    if (n_fock <= 0 || state.size() % n_fock != 0)
        throw DomainError("photon_density_matrix: state size is not a multiple of the Fock dimension");
    const Eigen::Index env = state.size() / n_fock;
    using RowMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMat> psi(state.data(), n_fock, env);
    const Eigen::MatrixXcd p = psi.template cast<cplx>();
    return p * p.adjoint();
}

// ⟨a⟩, ⟨a†a⟩ and ⟨a²⟩ from the photon density matrix.
RawMoments moments_from_density(const Eigen::MatrixXcd& rho);

// −Σ w log₂ w over eigenvalues w > 1e-16.
double entropy_from_density(const Eigen::MatrixXcd& rho);

// Rényi entropy log₂(Σ w^α)/(1 − α) of the density matrix, α > 0, α ≠ 1.
double renyi_from_density(const Eigen::MatrixXcd& rho, double alpha);

// Writes a state as: 8-byte magic "DHPSTATE", uint32 version (1), uint32
// complex flag, uint64 photon dimension, uint64 matter dimension, then the
// amplitudes as little-endian float64 (re, im interleaved when complex).
void export_state(const std::string& path, const Eigen::VectorXd& state, std::uint64_t n_fock);
void export_state(const std::string& path, const Eigen::VectorXcd& state, std::uint64_t n_fock);

struct ImportedState {
    bool is_complex = false;
    std::uint64_t n_fock = 0;
    std::uint64_t env_dim = 0;
    Eigen::VectorXcd amplitudes;
};

ImportedState import_state(const std::string& path);

}  // namespace dickehp
