#include "dickehp/double_dicke.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "dickehp/errors.hpp"

namespace dickehp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool on_line(double lambda, double lambda_cr) {
    return std::abs(lambda - lambda_cr) <= kCriticalRelTol * lambda_cr;
}

double chain_mu(double omega, double omega0, double lambda, bool broken) {
    return broken ? omega * omega0 / (4.0 * lambda * lambda) : 1.0;
}

// Spin-chain part of the expansion around a mean field with order
// parameter μ: ω̃ d†d + ρ (d + d†)² and the coupling strength κ.
struct ChainBlock {
    double w_tilde;
    double rho;
    double kappa;
};

ChainBlock chain_block(double omega0, double lambda, double mu) {
    return {omega0 * (1.0 + mu) / (2.0 * mu),
            omega0 * (1.0 - mu) * (3.0 + mu) / (8.0 * mu * (1.0 + mu)),
            lambda * mu * std::sqrt(2.0 / (1.0 + mu))};
}

void check_branch(int eps, bool broken, const char* which) {
    if (eps < -1 || eps > 1) throw BranchError(std::string("branch sign for ") + which + " must be -1, 0 or +1");
    if (!broken && eps != 0)
        throw BranchError(std::string("branch sign for ") + which + " must be 0 in the unbroken direction");
    if (broken && eps == 0)
        throw BranchError(std::string("branch sign for ") + which + " must be +1 or -1 in the broken direction");
}

// Gradient and Hessian of the classical energy in one (photon quadrature,
// spin) pair. `g` is +4λ_C for the C pair and −4λ_I for the I pair.
struct PairDerivatives {
    Eigen::Vector2d grad;
    Eigen::Matrix2d hess;
};

PairDerivatives pair_derivatives(double omega, double omega0, double g, double q, double y) {
    const double s = 1.0 - y * y;
    const double rs = std::sqrt(s);
    const double f = y * rs;
    const double f1 = (1.0 - 2.0 * y * y) / rs;
    const double f2 = y * (2.0 * y * y - 3.0) / (s * rs);
    PairDerivatives d;
    d.grad << 2.0 * omega * q + g * f, 2.0 * omega0 * y + g * q * f1;
    d.hess << 2.0 * omega, g * f1, g * f1, 2.0 * omega0 + g * q * f2;
    return d;
}

// Newton refinement of one pair starting from the closed-form minimum.
void polish_pair(double omega, double omega0, double g, double& q, double& y, int& steps,
                 double& grad_norm) {
    const double scale = std::max({omega, omega0, std::abs(g)});
    for (int it = 0; it < 50; ++it) {
        const PairDerivatives d = pair_derivatives(omega, omega0, g, q, y);
        grad_norm = d.grad.norm();
        if (grad_norm <= 1e-14 * scale) break;
        const Eigen::Vector2d step = d.hess.fullPivLu().solve(d.grad);
        if (!step.allFinite()) break;
        q -= step(0);
        y -= step(1);
        if (std::abs(y) >= 1.0) throw MeanFieldError("double_mean_field: spin displacement left |y| < 1");
        ++steps;
    }
    const PairDerivatives d = pair_derivatives(omega, omega0, g, q, y);
    grad_norm = d.grad.norm();
    if (grad_norm > 1e-10 * scale) {
        std::ostringstream os;
        os << "double_mean_field: gradient " << grad_norm << " after Newton refinement";
        throw MeanFieldError(os.str());
    }
    // A minimum needs a positive semidefinite Hessian; zero is allowed on a line.
    const double det = d.hess.determinant();
    if (d.hess(0, 0) <= 0.0 || det < -1e-9 * scale * scale)
        throw MeanFieldError("double_mean_field: stationary point is not a minimum");
}

FluctuationReport critical_line_report(bool c_line) {
    FluctuationReport r;
    r.divergent = true;
    r.divergence_exponent = -0.25;
    r.hp = r.hp_raw = kInf;
    r.n_occ = kInf;
    if (c_line) {
        r.dx = kInf;
        r.dp = kNaN;
    } else {
        r.dp = kInf;
        r.dx = kNaN;
    }
    return r;
}

// Fluctuations at the crossing of the two critical lines. There the two
// functionals X = x_a − 2c_I p_I and P = p_a − 2c_C p_C commute with H and
// form a canonical pair (the zero mode e₁ = (X + iP)/√2). The ground state
// is the e₁ vacuum times the Gaussian ground state of the remaining two
// modes, built in coordinates (X, P, G) with G spanning the functionals
// that commute with both.
FluctuationReport double_point_report(const DoubleDickeParams& p) {
    const QuadraticForm f = build_double_quadratic_form(p, 0, 0);
    const Eigen::MatrixXd k = quadrature_matrix(f);
    const double cc = std::sqrt(p.omega_cav / (4.0 * p.omega0_c));
    const double ci = std::sqrt(p.omega_cav / (4.0 * p.omega0_i));

    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(6, 6);
    omega.topRightCorner(3, 3).setIdentity();
    omega.bottomLeftCorner(3, 3) = -Eigen::Matrix3d::Identity();

    Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(6), pp = Eigen::RowVectorXd::Zero(6);
    x(0) = 1.0;
    x(5) = -2.0 * ci;
    pp(3) = 1.0;
    pp(4) = -2.0 * cc;

    Eigen::MatrixXd fx(2, 6);
    fx.row(0) = x * omega;
    fx.row(1) = pp * omega;
    const Eigen::MatrixXd g = Eigen::FullPivLU<Eigen::MatrixXd>(fx).kernel();
    if (g.cols() != 4) throw InstabilityError("double point: commutant has the wrong dimension");

    Eigen::MatrixXd c(6, 6);
    c.row(0) = x;
    c.row(1) = pp;
    c.bottomRows(4) = g.transpose();
    const Eigen::MatrixXd ci_mat = c.inverse();
    const Eigen::MatrixXd kc = ci_mat.transpose() * k * ci_mat;
    const Eigen::MatrixXd oc = c * omega * c.transpose();
    if (kc.topRows(2).norm() > 1e-10 * k.norm())
        throw InstabilityError("double point: zero-mode functionals are not conserved");

    const Eigen::Matrix4d k4 = 0.5 * (kc.bottomRightCorner(4, 4) + kc.bottomRightCorner(4, 4).transpose());
    const Eigen::Matrix4d o4 = oc.bottomRightCorner(4, 4);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(k4);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw InstabilityError("double point: remaining modes are not stable");
    const Eigen::Matrix4d kh = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
                               es.eigenvectors().transpose();
    const Eigen::Matrix4d kmh = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                es.eigenvectors().transpose();
    // σ = ½ K^{-½} |i K^{½} O K^{½}| K^{-½}
    const Eigen::Matrix4cd m = cplx{0.0, 1.0} * (kh * o4 * kh).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> em(m);
    const Eigen::Matrix4cd absm = em.eigenvectors() * em.eigenvalues().cwiseAbs().asDiagonal() *
                                  em.eigenvectors().adjoint();
    const Eigen::Matrix4d s4 = 0.5 * kmh * absm.real() * kmh;

    Eigen::MatrixXd sc = Eigen::MatrixXd::Zero(6, 6);
    sc(0, 0) = sc(1, 1) = 0.5;
    sc.bottomRightCorner(4, 4) = s4;
    const Eigen::MatrixXd sigma = ci_mat * sc * ci_mat.transpose();

    RawMoments raw;
    raw.n_raw = 0.5 * (sigma(0, 0) + sigma(3, 3)) - 0.5;
    raw.a2 = cplx{0.5 * (sigma(0, 0) - sigma(3, 3)), 0.5 * (sigma(0, 3) + sigma(3, 0))};
    return heisenberg_product(raw);
}

}  // namespace

double DoubleDickeParams::lambda_c_cr() const { return 0.5 * std::sqrt(omega_cav * omega0_c); }
double DoubleDickeParams::lambda_i_cr() const { return 0.5 * std::sqrt(omega_cav * omega0_i); }

void DoubleDickeParams::validate() const {
    for (double w : {omega_cav, omega0_c, omega0_i})
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("DoubleDickeParams: frequencies must be positive");
    for (double l : {lambda_c, lambda_i})
        if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("DoubleDickeParams: couplings must be >= 0");
    if (n_c < 0 || n_i < 0) throw DomainError("DoubleDickeParams: spin counts must be >= 0");
}

DoubleDickeParams DoubleDickeParams::swapped() const {
    DoubleDickeParams q = *this;
    std::swap(q.omega0_c, q.omega0_i);
    std::swap(q.lambda_c, q.lambda_i);
    std::swap(q.n_c, q.n_i);
    return q;
}

DoubleDickeParams DoubleDickeParams::with_radial(double r, double theta) const {
    DoubleDickeParams q = *this;
    q.lambda_c = r * std::cos(theta);
    q.lambda_i = r * std::sin(theta);
    // cos(π/2) is not exactly zero in floating point.
    if (std::abs(q.lambda_c) < 1e-15 * std::abs(r)) q.lambda_c = 0.0;
    if (std::abs(q.lambda_i) < 1e-15 * std::abs(r)) q.lambda_i = 0.0;
    return q;
}

std::string to_string(DoublePhase p) {
    switch (p) {
        case DoublePhase::Normal: return "normal";
        case DoublePhase::SuperradiantReal: return "superradiant-real";
        case DoublePhase::SuperradiantImag: return "superradiant-imag";
        case DoublePhase::SuperradiantDouble: return "superradiant-double";
    }
    return "?";
}

DoublePhaseInfo classify_double_phase(const DoubleDickeParams& p) {
    p.validate();
    DoublePhaseInfo info;
    info.lambda_c_cr = p.lambda_c_cr();
    info.lambda_i_cr = p.lambda_i_cr();
    info.critical_c = on_line(p.lambda_c, info.lambda_c_cr);
    info.critical_i = on_line(p.lambda_i, info.lambda_i_cr);
    const bool bc = !info.critical_c && p.lambda_c > info.lambda_c_cr;
    const bool bi = !info.critical_i && p.lambda_i > info.lambda_i_cr;
    if (bc && bi) {
        info.phase = DoublePhase::SuperradiantDouble;
        info.degeneracy = 4;
    } else if (bc) {
        info.phase = DoublePhase::SuperradiantReal;
        info.degeneracy = 2;
    } else if (bi) {
        info.phase = DoublePhase::SuperradiantImag;
        info.degeneracy = 2;
    }
    return info;
}

MeanField double_mean_field(const DoubleDickeParams& p, int eps_c, int eps_i) {
    const DoublePhaseInfo info = classify_double_phase(p);
    const bool bc = info.phase == DoublePhase::SuperradiantReal || info.phase == DoublePhase::SuperradiantDouble;
    const bool bi = info.phase == DoublePhase::SuperradiantImag || info.phase == DoublePhase::SuperradiantDouble;
    check_branch(eps_c, bc, "C");
    check_branch(eps_i, bi, "I");

    MeanField mf;
    mf.mu_c = chain_mu(p.omega_cav, p.omega0_c, p.lambda_c, bc);
    mf.mu_i = chain_mu(p.omega_cav, p.omega0_i, p.lambda_i, bi);
    // Closed-form minimum: y² = (1 − μ)/2, u = −2λ_C y_C √(1−y_C²)/ω and
    // v = +2λ_I y_I √(1−y_I²)/ω; the signs make Re⟨a⟩ and Im⟨a⟩ follow ε.
    mf.y_c = -eps_c * std::sqrt(0.5 * (1.0 - mf.mu_c));
    mf.y_i = eps_i * std::sqrt(0.5 * (1.0 - mf.mu_i));
    mf.u = -2.0 * p.lambda_c * mf.y_c * std::sqrt(1.0 - mf.y_c * mf.y_c) / p.omega_cav;
    mf.v = 2.0 * p.lambda_i * mf.y_i * std::sqrt(1.0 - mf.y_i * mf.y_i) / p.omega_cav;

    double gc = 0.0, gi = 0.0;
    polish_pair(p.omega_cav, p.omega0_c, 4.0 * p.lambda_c, mf.u, mf.y_c, mf.newton_steps, gc);
    polish_pair(p.omega_cav, p.omega0_i, -4.0 * p.lambda_i, mf.v, mf.y_i, mf.newton_steps, gi);
    mf.gradient_norm = std::hypot(gc, gi);
    return mf;
}

QuadraticForm build_double_quadratic_form(const DoubleDickeParams& p, int eps_c, int eps_i) {
    const MeanField mf = double_mean_field(p, eps_c, eps_i);
    const ChainBlock c = chain_block(p.omega0_c, p.lambda_c, mf.mu_c);
    const ChainBlock i = chain_block(p.omega0_i, p.lambda_i, mf.mu_i);
    const cplx im{0.0, 1.0};

    // ω a†a + Σ_k [ω̃_k b_k†b_k + ρ_k (b_k + b_k†)²]
    //   + κ_C (a + a†)(b_C + b_C†) + κ_I i(a − a†)(b_I + b_I†)
    QuadraticForm f(3);
    f.A(0, 0) = p.omega_cav;
    f.A(1, 1) = c.w_tilde + 2.0 * c.rho;
    f.B(1, 1) = 2.0 * c.rho;
    f.A(2, 2) = i.w_tilde + 2.0 * i.rho;
    f.B(2, 2) = 2.0 * i.rho;
    f.A(0, 1) = f.A(1, 0) = c.kappa;
    f.B(0, 1) = f.B(1, 0) = c.kappa;
    f.A(0, 2) = -im * i.kappa;
    f.A(2, 0) = im * i.kappa;
    f.B(0, 2) = f.B(2, 0) = im * i.kappa;
    f.e0 = c.rho + i.rho;
    return f;
}

QuadraticForm build_double_quadratic_form(const DoubleDickeParams& p) {
    const DoublePhaseInfo info = classify_double_phase(p);
    const bool bc = info.phase == DoublePhase::SuperradiantReal || info.phase == DoublePhase::SuperradiantDouble;
    const bool bi = info.phase == DoublePhase::SuperradiantImag || info.phase == DoublePhase::SuperradiantDouble;
    return build_double_quadratic_form(p, bc ? 1 : 0, bi ? 1 : 0);
}

Eigen::MatrixXd quadrature_matrix(const QuadraticForm& form) {
    const Eigen::Index n = form.n_modes();
    const Eigen::MatrixXd r = form.A.real(), im_a = form.A.imag();
    const Eigen::MatrixXd s = form.B.real(), t = form.B.imag();
    // a†Aa + ½(aᵀBa + h.c.) = ½xᵀ(R+S)x + ½pᵀ(R−S)p − xᵀ(Im A + Im B)p + const
    Eigen::MatrixXd k(2 * n, 2 * n);
    k.topLeftCorner(n, n) = r + s;
    k.bottomRightCorner(n, n) = r - s;
    k.topRightCorner(n, n) = -(im_a + t);
    k.bottomLeftCorner(n, n) = -(im_a + t).transpose();
    return 0.5 * (k + k.transpose());
}

DoubleThermoSolution solve_double_thermo(const DoubleDickeParams& p) {
    DoubleThermoSolution s;
    s.info = classify_double_phase(p);
    const bool bc = s.info.phase == DoublePhase::SuperradiantReal || s.info.phase == DoublePhase::SuperradiantDouble;
    const bool bi = s.info.phase == DoublePhase::SuperradiantImag || s.info.phase == DoublePhase::SuperradiantDouble;
    s.mean_field = double_mean_field(p, bc ? 1 : 0, bi ? 1 : 0);
    s.mu_c = s.mean_field.mu_c;
    s.mu_i = s.mean_field.mu_i;
    s.displacements = {cplx{s.mean_field.u, s.mean_field.v}, cplx{s.mean_field.y_c, 0.0},
                       cplx{s.mean_field.y_i, 0.0}};
    s.gaps = double_gaps(p);
    if (!s.info.critical()) {
        const BogoliubovSolution sol = symplectic_diagonalize(build_double_quadratic_form(p));
        s.polariton_transform = sol.transform;
    }
    return s;
}

Eigen::Vector3d double_gaps(const DoubleDickeParams& p) {
    const DoublePhaseInfo info = classify_double_phase(p);
    const QuadraticForm f = build_double_quadratic_form(p);
    if (!info.critical()) return symplectic_diagonalize(f).gaps;

    // K is only semidefinite here; the frequencies are the eigenvalues of
    // K^½ (iΩ) K^½, which stay well defined.
    const Eigen::MatrixXd k = quadrature_matrix(f);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd kh = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(6, 6);
    omega.topRightCorner(3, 3).setIdentity();
    omega.bottomLeftCorner(3, 3) = -Eigen::Matrix3d::Identity();
    const Eigen::MatrixXcd m = cplx{0.0, 1.0} * (kh * omega * kh).cast<cplx>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> em(m, Eigen::EigenvaluesOnly);
    // Eigenvalues come in ± pairs; the upper half are the frequencies.
    Eigen::Vector3d g = em.eigenvalues().tail(3);
    const double tol = 1e-7 * std::sqrt(k.norm());
    for (Eigen::Index i = 0; i < 3; ++i)
        if (std::abs(g(i)) < tol) g(i) = 0.0;
    std::sort(g.data(), g.data() + 3);
    return g;
}

Eigen::VectorXcd lower_polariton(const DoubleDickeParams& p) {
    const DoublePhaseInfo info = classify_double_phase(p);
    if (info.phase != DoublePhase::Normal)
        throw RegimeError("lower_polariton: the closed forms describe the normal phase only");
    Eigen::VectorXcd e(6);
    if (info.double_point()) {
        const double cc = std::sqrt(p.omega_cav / (4.0 * p.omega0_c));
        const double ci = std::sqrt(p.omega_cav / (4.0 * p.omega0_i));
        const cplx im{0.0, 1.0};
        e << 1.0, -cc, im * ci, 0.0, cc, -im * ci;
        return e;
    }
    if (info.critical())
        throw RegimeError("lower_polariton: e1 is not normalizable on a single critical line");
    const BogoliubovSolution sol = symplectic_diagonalize(build_double_quadratic_form(p, 0, 0));
    e = sol.transform.row(0).transpose();
    if (std::abs(e(0)) > 0.0) e *= std::abs(e(0)) / e(0);
    return e;
}

Eigen::VectorXcd lower_polariton_asymptotic(const DoubleDickeParams& p, double gap1) {
    p.validate();
    if (!(gap1 > 0.0)) throw DomainError("lower_polariton_asymptotic: gap must be positive");
    const double q = p.omega0_i * p.omega_cav - 4.0 * p.lambda_i * p.lambda_i;
    if (!(q > 0.0)) throw RegimeError("lower_polariton_asymptotic: requires lambda_i < lambda_i^cr");
    const double xa = p.omega0_i * gap1 / q;
    const double xc = gap1 / p.omega0_c;
    const double bi = 2.0 * std::sqrt(p.omega0_c) * p.lambda_i * gap1 / q;
    const double sc = std::sqrt(p.omega0_c), sw = std::sqrt(p.omega_cav);
    const cplx im{0.0, 1.0};
    Eigen::VectorXcd e(6);
    e << (1.0 + xa) * sc, -(1.0 + xc) * sw, im * bi, -(1.0 - xa) * sc, (1.0 - xc) * sw, -im * bi;
    const double norm = 2.0 * std::sqrt(gap1 * (p.omega0_i * p.omega0_c / q + p.omega_cav / p.omega0_c));
    return e / norm;
}

FluctuationReport hp_double(const DoubleDickeParams& p) {
    const DoublePhaseInfo info = classify_double_phase(p);
    if (info.double_point()) return double_point_report(p);
    if (info.critical()) return critical_line_report(info.critical_c);

    const DoubleThermoSolution s = solve_double_thermo(p);
    const BogoliubovSolution sol = symplectic_diagonalize(build_double_quadratic_form(p));
    FluctuationReport r = photon_moments_from_solution(sol, 0);
    r.mean_a = s.displacements[0];
    return r;
}

EntropyReport entropy_double(const DoubleDickeParams& p, bool include_degeneracy,
                             std::span<const double> renyi_alphas) {
    const DoublePhaseInfo info = classify_double_phase(p);
    const FluctuationReport r = hp_double(p);
    const int offset = include_degeneracy ? degeneracy_to_offset(info.degeneracy) : 0;
    return entropy_report(r.hp, offset, renyi_alphas);
}

std::array<double, 2> critical_radii(const DoubleDickeParams& base, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return {std::abs(c) < 1e-15 ? kInf : base.lambda_c_cr() / c,
            std::abs(s) < 1e-15 ? kInf : base.lambda_i_cr() / s};
}

}  // namespace dickehp
