#include "dickehp/ed_common.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <Eigen/Eigenvalues>

#include "dickehp/errors.hpp"

namespace dickehp {

static_assert(std::endian::native == std::endian::little, "state export assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'D', 'H', 'P', 'S', 'T', 'A', 'T', 'E'};

template <class T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw DomainError("import_state: truncated file");
    return v;
}

void write_state(const std::string& path, const double* data, std::uint64_t n_doubles,
                 bool is_complex, std::uint64_t n_fock, std::uint64_t n_amp) {
    if (n_fock == 0 || n_amp % n_fock != 0)
        throw DomainError("export_state: state size is not a multiple of the Fock dimension");
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw DomainError("export_state: cannot open " + tmp);
        os.write(kMagic, sizeof(kMagic));
        put<std::uint32_t>(os, 1);
        put<std::uint32_t>(os, is_complex ? 1 : 0);
        put<std::uint64_t>(os, n_fock);
        put<std::uint64_t>(os, n_amp / n_fock);
        os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n_doubles * sizeof(double)));
        if (!os) throw DomainError("export_state: write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

RawMoments moments_from_density(const Eigen::MatrixXcd& rho) {
    RawMoments m;
    const Eigen::Index d = rho.rows();
    for (Eigen::Index n = 0; n < d; ++n) {
        m.n_raw += n * rho(n, n).real();
        // Tr(ρ a) = Σ ρ[n, n+1] √(n+1)
        if (n + 1 < d) m.mean_a += rho(n, n + 1) * std::sqrt(static_cast<double>(n + 1));
        if (n + 2 < d) m.a2 += rho(n, n + 2) * std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    }
    return m;
}

double entropy_from_density(const Eigen::MatrixXcd& rho) {
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("entropy_from_density: eigensolver failed");
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double w = es.eigenvalues()(i);
        if (w > 1e-16) s -= w * std::log2(w);
    }
    return s;
}

double renyi_from_density(const Eigen::MatrixXcd& rho, double alpha) {
    if (!(alpha > 0.0) || alpha == 1.0) throw DomainError("renyi_from_density: alpha must be positive and != 1");
    const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("renyi_from_density: eigensolver failed");
    double tr = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double w = es.eigenvalues()(i);
        if (w > 1e-16) tr += std::pow(w, alpha);
    }
    return std::log2(tr) / (1.0 - alpha);
}

void export_state(const std::string& path, const Eigen::VectorXd& state, std::uint64_t n_fock) {
    write_state(path, state.data(), static_cast<std::uint64_t>(state.size()), false, n_fock,
                static_cast<std::uint64_t>(state.size()));
}

void export_state(const std::string& path, const Eigen::VectorXcd& state, std::uint64_t n_fock) {
    write_state(path, reinterpret_cast<const double*>(state.data()),
                2 * static_cast<std::uint64_t>(state.size()), true, n_fock,
                static_cast<std::uint64_t>(state.size()));
}

ImportedState import_state(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DomainError("import_state: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw DomainError("import_state: bad magic in " + path);
    if (get<std::uint32_t>(is) != 1) throw DomainError("import_state: unsupported version");
    ImportedState st;
    st.is_complex = get<std::uint32_t>(is) != 0;
    st.n_fock = get<std::uint64_t>(is);
    st.env_dim = get<std::uint64_t>(is);
    const auto n = static_cast<Eigen::Index>(st.n_fock * st.env_dim);
    st.amplitudes.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = get<double>(is);
        const double im = st.is_complex ? get<double>(is) : 0.0;
        st.amplitudes(i) = cplx{re, im};
    }
    return st;
}

}  // namespace dickehp
