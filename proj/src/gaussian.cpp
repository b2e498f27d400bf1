#include "dickehp/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "dickehp/errors.hpp"

namespace dickehp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp_hp(double hp, const char* where) {
    if (std::isnan(hp)) throw DomainError(std::string(where) + ": hp is NaN");
    if (hp < 0.5 - kHeisenbergTolerance) {
        std::ostringstream os;
        os << where << ": hp = " << hp << " is below the Heisenberg bound 1/2";
        throw DomainError(os.str());
    }
    return std::max(hp, 0.5);
}

// Diagnoses why the Nambu matrix is not positive definite.
[[noreturn]] void report_instability(const Eigen::MatrixXcd& nambu, Eigen::Index n,
                                     double scale) {
    Eigen::MatrixXcd dyn = nambu;
    dyn.bottomRows(n) *= -1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(dyn, false);
    const double tol = 1e-9 * std::max(scale, 1.0);
    double worst_imag = 0.0;
    double smallest = kInf;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        worst_imag = std::max(worst_imag, std::abs(es.eigenvalues()[i].imag()));
        smallest = std::min(smallest, std::abs(es.eigenvalues()[i]));
    }
    std::ostringstream os;
    if (worst_imag > tol) {
        os << "complex normal-mode frequency (|Im| = " << worst_imag << ")";
    } else if (smallest <= tol) {
        os << "vanishing normal-mode frequency (critical point, |ω| = " << smallest << ")";
    } else {
        os << "negative-norm normal mode (Hamiltonian unbounded below)";
    }
    throw InstabilityError("symplectic_diagonalize: " + os.str());
}

}  // namespace

QuadraticForm::QuadraticForm(Eigen::Index n_modes)
    : A(Eigen::MatrixXcd::Zero(n_modes, n_modes)),
      B(Eigen::MatrixXcd::Zero(n_modes, n_modes)),
      d(Eigen::VectorXcd::Zero(n_modes)) {}

Eigen::MatrixXcd QuadraticForm::nambu() const {
    const Eigen::Index n = n_modes();
    Eigen::MatrixXcd m(2 * n, 2 * n);
    m.topLeftCorner(n, n) = A;
    m.topRightCorner(n, n) = B.conjugate();
    m.bottomLeftCorner(n, n) = B;
    m.bottomRightCorner(n, n) = A.conjugate();
    return m;
}

double QuadraticForm::scale() const { return nambu().norm(); }

BogoliubovSolution symplectic_diagonalize(const QuadraticForm& form) {
    const Eigen::Index n = form.n_modes();
    if (n == 0) throw DomainError("symplectic_diagonalize: empty form");
    if (form.B.rows() != n || form.B.cols() != n || form.d.size() != n)
        throw DomainError("symplectic_diagonalize: inconsistent matrix shapes");

    const Eigen::MatrixXcd m = form.nambu();
    const double scale = m.norm();
    const double sym_tol = 1e-10 * std::max(scale, 1.0);
    if ((form.A - form.A.adjoint()).norm() > sym_tol)
        throw DomainError("symplectic_diagonalize: A is not Hermitian");
    if ((form.B - form.B.transpose()).norm() > sym_tol)
        throw DomainError("symplectic_diagonalize: B is not symmetric");

    // Symmetrize away roundoff so the Cholesky factor sees an exact Hermitian matrix.
    const Eigen::MatrixXcd herm = 0.5 * (m + m.adjoint());
    Eigen::LLT<Eigen::MatrixXcd> llt(herm);
    if (llt.info() != Eigen::Success) report_instability(herm, n, scale);

    // Colpa: herm = K† K, W = K η K† has eigenvalues (+ω, −ω).
    const Eigen::MatrixXcd k = llt.matrixU();
    Eigen::MatrixXcd eta_kt = k.adjoint();
    eta_kt.bottomRows(n) *= -1.0;
    Eigen::MatrixXcd w = k * eta_kt;
    w = 0.5 * (w + w.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w);
    if (es.info() != Eigen::Success)
        throw InstabilityError("symplectic_diagonalize: eigensolver failed");

    // Eigenvalues come ascending: the last n are the positive frequencies.
    const Eigen::VectorXd& evals = es.eigenvalues();
    const double tol = 1e-9 * std::max(scale, 1.0);
    if (evals(n) <= tol) report_instability(herm, n, scale);

    BogoliubovSolution sol;
    sol.gaps.resize(n);
    Eigen::MatrixXcd t(2 * n, 2 * n);
    const auto k_tri = k.triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double omega = evals(n + j);
        sol.gaps(j) = omega;
        Eigen::VectorXcd col = k_tri.solve(es.eigenvectors().col(n + j)) * std::sqrt(omega);

        // Phase convention: the largest a_i coefficient of e_j is real positive.
        // Row j of η T† η is (conj(col.head), -conj(col.tail)).
        Eigen::Index imax = 0;
        col.head(n).cwiseAbs().maxCoeff(&imax);
        const cplx c = col(imax);
        if (std::abs(c) > 0.0) col *= std::abs(c) / c;

        t.col(j) = col;
        t.col(n + j).head(n) = col.tail(n).conjugate();
        t.col(n + j).tail(n) = col.head(n).conjugate();
    }
    sol.inverse = t;
    // T^{-1} = η T† η
    Eigen::MatrixXcd tinv = t.adjoint();
    tinv.topRightCorner(n, n) *= -1.0;
    tinv.bottomLeftCorner(n, n) *= -1.0;
    sol.transform = tinv;

    // Linear terms: solve herm·γ = −f with f = (d*, d); γ = (⟨a⟩, ⟨a⟩*).
    Eigen::VectorXcd f(2 * n);
    f.head(n) = form.d.conjugate();
    f.tail(n) = form.d;
    const Eigen::VectorXcd gamma = -llt.solve(f);
    sol.displacements = gamma.head(n);

    const double shift = 0.5 * std::real(gamma.dot(herm * gamma));
    sol.ground_energy =
        form.e0 - 0.5 * form.A.trace().real() + 0.5 * sol.gaps.sum() - shift;
    return sol;
}

FluctuationReport photon_moments_from_solution(const BogoliubovSolution& sol,
                                               Eigen::Index mode) {
    const Eigen::Index n = sol.n_modes();
    if (mode < 0 || mode >= n) throw DomainError("photon_moments_from_solution: bad mode index");

    // ⟨α α†⟩ = T diag(1_n, 0_n) T† in the polariton vacuum.
    const auto& t = sol.inverse;
    double aad = 0.0;  // ⟨a a†⟩
    cplx aa{0.0, 0.0};
    for (Eigen::Index k = 0; k < n; ++k) {
        aad += std::norm(t(mode, k));
        aa += t(mode, k) * std::conj(t(n + mode, k));
    }
    const cplx mean = sol.displacements(mode);
    RawMoments raw;
    raw.mean_a = mean;
    raw.n_raw = (aad - 1.0) + std::norm(mean);
    raw.a2 = aa + mean * mean;
    return heisenberg_product(raw);
}

RawMoments rotate_moments(const RawMoments& moments, double theta) {
    const cplx ph = std::polar(1.0, -theta);
    RawMoments out;
    out.mean_a = moments.mean_a * ph;
    out.n_raw = moments.n_raw;
    out.a2 = moments.a2 * ph * ph;
    return out;
}

FluctuationReport heisenberg_product(const RawMoments& moments) {
    FluctuationReport r;
    r.mean_a = moments.mean_a;
    r.n_occ = moments.n_raw - std::norm(moments.mean_a);
    r.sq = moments.a2 - moments.mean_a * moments.mean_a;

    const double half = r.n_occ + 0.5;
    const double var_x = half + r.sq.real();
    const double var_p = half - r.sq.real();
    if (!(var_x > 0.0) || !(var_p > 0.0)) {
        throw UncertaintyViolation("heisenberg_product: nonpositive quadrature variance");
    }
    r.hp_raw = std::sqrt(var_x * var_p);
    r.zeta = -r.sq.imag() * r.sq.imag();

    // Smallest rotation that makes ⟨ã²⟩ real.
    double phi = 0.0;
    if (std::abs(r.sq) > 0.0) {
        phi = 0.5 * std::arg(r.sq);
        if (phi > std::numbers::pi / 4) phi -= std::numbers::pi / 2;
        if (phi <= -std::numbers::pi / 4) phi += std::numbers::pi / 2;
    }
    const double sq_rot = std::real(r.sq * std::polar(1.0, -2.0 * phi));
    r.phi = phi < 0.0 ? phi + std::numbers::pi : phi;

    const double abs_sq = std::abs(r.sq);
    const double lo = half - abs_sq;
    if (lo <= 0.0) throw UncertaintyViolation("heisenberg_product: |⟨a²⟩c| exceeds n + 1/2");
    double hp = std::sqrt(lo * (half + abs_sq));
    if (hp < 0.5 - kHeisenbergTolerance) {
        std::ostringstream os;
        os << "heisenberg_product: ΔxΔp = " << hp << " < 1/2";
        throw UncertaintyViolation(os.str());
    }
    hp = std::max(hp, 0.5);
    r.dx = std::sqrt(half + sq_rot);
    r.dp = hp / r.dx;
    r.hp = hp;
    if (r.hp_raw < r.hp) r.hp_raw = r.hp;
    return r;
}

double entropy_from_hp(double hp, int degeneracy_offset) {
    if (degeneracy_offset < 0 || degeneracy_offset > 2)
        throw DomainError("entropy_from_hp: degeneracy offset must be 0, 1 or 2");
    if (std::isinf(hp) && hp > 0) return kInf;
    const double h = clamp_hp(hp, "entropy_from_hp");
    double s = 0.0;
    if (h > 1.0) {
        // log2(h) + [(h+½) log1p(1/2h) − (h−½) log1p(−1/2h)] / ln 2
        const double x = 0.5 / h;
        s = std::log2(h) +
            ((h + 0.5) * std::log1p(x) - (h - 0.5) * std::log1p(-x)) / std::numbers::ln2;
    } else {
        s = (h + 0.5) * std::log2(h + 0.5);
        if (h > 0.5) s -= (h - 0.5) * std::log2(h - 0.5);
    }
    return s + degeneracy_offset;
}

double renyi_entropy(double hp, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("renyi_entropy: alpha must be positive");
    if (alpha == 1.0) throw DomainError("renyi_entropy: alpha = 1 is the von Neumann entropy");
    if (std::isinf(hp) && hp > 0) return kInf;
    const double h = clamp_hp(hp, "renyi_entropy");
    if (h == 0.5) return 0.0;
    // log2[(1+2h)^α − (2h−1)^α] = α log2(1+2h) + log2(1 − q^α), q = (2h−1)/(2h+1)
    const double log_q = std::log1p(-2.0 / (2.0 * h + 1.0));
    const double log_one_minus = std::log(-std::expm1(alpha * log_q));
    const double log_trace = alpha * std::log2(1.0 + 2.0 * h) + log_one_minus / std::numbers::ln2;
    return (alpha - log_trace) / (1.0 - alpha);
}

double pseudo_energy(double hp, double zeta) {
    const double x = hp * hp + zeta;
    if (std::isnan(x)) throw DomainError("pseudo_energy: NaN input");
    if (std::isinf(x)) return 0.0;
    if (x < 0.25 - kHeisenbergTolerance)
        throw DomainError("pseudo_energy: hp² + ζ must exceed 1/4");
    const double s = std::sqrt(std::max(x, 0.25));
    if (s <= 0.5) return kInf;
    return std::log1p(2.0 / (2.0 * s - 1.0));
}

EntropyReport entropy_report(double hp, int degeneracy_offset, std::span<const double> renyi_alphas) {
    EntropyReport r;
    r.degeneracy_offset = degeneracy_offset;
    r.s_vn = entropy_from_hp(hp, degeneracy_offset);
    r.pseudo_energy = pseudo_energy(std::isinf(hp) ? hp : std::max(hp, 0.5));
    for (double a : renyi_alphas) r.s_renyi[a] = renyi_entropy(hp, a);
    return r;
}

int degeneracy_to_offset(int degeneracy) {
    switch (degeneracy) {
        case 1: return 0;
        case 2: return 1;
        case 4: return 2;
        default: throw DomainError("degeneracy_to_offset: degeneracy must be 1, 2 or 4");
    }
}

}  // namespace dickehp
