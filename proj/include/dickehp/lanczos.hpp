#pragma once

// Thick-restart Lanczos with full reorthogonalization for the lowest few
// eigenpairs of a sparse Hermitian matrix.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <sstream>
#include <type_traits>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dickehp/errors.hpp"

namespace dickehp {

struct EigenOptions {
    int k = 1;
    double tol = 1e-10;  // residual ≤ tol·max(1, |θ|)
    int max_restarts = 2000;
    int krylov_dim = 0;  // 0 picks max(2k + 20, 40)
    std::uint64_t seed = 20140101;
    Eigen::Index dense_threshold = 600;
};

template <class Scalar>
struct EigenPairs {
    Eigen::VectorXd values;  // ascending
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
    int matvecs = 0;
    int restarts = 0;
    double max_residual = 0.0;
    bool dense = false;
};

template <class Scalar>
using SparseH = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;

namespace detail {

template <class Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> random_vector(Eigen::Index n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if constexpr (std::is_same_v<Scalar, double>) {
            v(i) = u(rng);
        } else {
            const double re = u(rng);
            v(i) = Scalar(re, u(rng));
        }
    }
    return v;
}

template <class Scalar>
EigenPairs<Scalar> dense_lowest(const SparseH<Scalar>& h, int k) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat dense = Mat(h);
    dense = (0.5 * (dense + dense.adjoint())).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(dense);
    if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed");
    EigenPairs<Scalar> out;
    out.values = es.eigenvalues().head(k);
    out.vectors = es.eigenvectors().leftCols(k);
    out.dense = true;
    return out;
}

}  // namespace detail

template <class Scalar>
EigenPairs<Scalar> lowest_eigenpairs(const SparseH<Scalar>& h, const EigenOptions& opt = {}) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    const Eigen::Index n = h.rows();
    if (h.cols() != n) throw DomainError("lowest_eigenpairs: matrix is not square");
    if (opt.k < 1 || opt.k > n) throw DomainError("lowest_eigenpairs: k out of range");
    if (n <= opt.dense_threshold) return detail::dense_lowest(h, opt.k);

    const int k = opt.k;
    const int m = static_cast<int>(std::min<Eigen::Index>(
        n, opt.krylov_dim > 0 ? opt.krylov_dim : std::max(2 * k + 20, 40)));
    const int keep = std::min(m - 1, std::max(k + 1, m / 2));

    std::mt19937_64 rng(opt.seed);
    Mat v(n, m);
    Mat t = Mat::Zero(m, m);
    Vec w = detail::random_vector<Scalar>(n, rng);
    v.col(0) = w / w.norm();

    EigenPairs<Scalar> out;
    int start = 0;  // first column whose matvec is still pending
    double beta = 0.0;
    Eigen::SelfAdjointEigenSolver<Mat> es;

    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
        for (int j = start; j < m; ++j) {
            w = h * v.col(j);
            ++out.matvecs;
            // Two passes of classical Gram-Schmidt against the whole basis.
            Vec coef = v.leftCols(j + 1).adjoint() * w;
            w.noalias() -= v.leftCols(j + 1) * coef;
            const Vec again = v.leftCols(j + 1).adjoint() * w;
            w.noalias() -= v.leftCols(j + 1) * again;
            coef += again;
            t.col(j).head(j + 1) = coef;
            t.row(j).head(j + 1) = coef.adjoint();
            beta = w.norm();
            if (j + 1 == m) break;

            if (beta <= 1e-14 * std::max(1.0, std::abs(coef(j)))) {
                // Invariant subspace: continue with a fresh orthogonal direction.
                Vec r = detail::random_vector<Scalar>(n, rng);
                for (int pass = 0; pass < 2; ++pass) r -= v.leftCols(j + 1) * (v.leftCols(j + 1).adjoint() * r);
                v.col(j + 1) = r / r.norm();
                beta = 0.0;
            } else {
                v.col(j + 1) = w / beta;
            }
        }

        Mat tt = 0.5 * (t + t.adjoint());
        es.compute(tt);
        if (es.info() != Eigen::Success) throw ConvergenceError("lowest_eigenpairs: projected eigenproblem failed");
        const Eigen::VectorXd& theta = es.eigenvalues();
        const Mat& y = es.eigenvectors();

        double worst = 0.0;
        bool done = true;
        for (int i = 0; i < k; ++i) {
            const double res = beta * std::abs(y(m - 1, i));
            worst = std::max(worst, res / std::max(1.0, std::abs(theta(i))));
            if (res > opt.tol * std::max(1.0, std::abs(theta(i)))) done = false;
        }
        out.max_residual = worst;
        out.restarts = restart;

        if (done || m == n) {
            out.values = theta.head(k);
            out.vectors = v * y.leftCols(k);
            for (int i = 0; i < k; ++i) out.vectors.col(i).normalize();
            return out;
        }

        // Thick restart: keep the lowest Ritz vectors, append the residual direction.
        const Mat ritz = v * y.leftCols(keep);
        v.leftCols(keep) = ritz;
        t.setZero();
        for (int i = 0; i < keep; ++i) t(i, i) = theta(i);
        if (beta > 0.0) {
            Vec r = w / beta;
            for (int pass = 0; pass < 2; ++pass) r -= v.leftCols(keep) * (v.leftCols(keep).adjoint() * r);
            v.col(keep) = r / r.norm();
        } else {
            Vec r = detail::random_vector<Scalar>(n, rng);
            for (int pass = 0; pass < 2; ++pass) r -= v.leftCols(keep) * (v.leftCols(keep).adjoint() * r);
            v.col(keep) = r / r.norm();
        }
        start = keep;
    }

    std::ostringstream os;
    os << "lowest_eigenpairs: no convergence after " << opt.max_restarts << " restarts ("
       << out.matvecs << " matvecs, dim " << n << ", krylov " << m
       << ", worst relative residual " << out.max_residual << ", tol " << opt.tol << ")";
    throw ConvergenceError(os.str());
}

}  // namespace dickehp
