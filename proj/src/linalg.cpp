#include "flucbound/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace flucbound {

namespace ops {

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

Matrix zero(Eigen::Index dim) { return Matrix::Zero(dim, dim); }

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << 0.0, -kI, kI, 0.0;
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Matrix sigma_minus() { return ket_bra(0, 1, 2); }

Matrix sigma_plus() { return ket_bra(1, 0, 2); }

Matrix ket_bra(Eigen::Index i, Eigen::Index j, Eigen::Index dim) {
    Matrix m = Matrix::Zero(dim, dim);
    m(i, j) = 1.0;
    return m;
}

}  // namespace ops

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_error(const Matrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return max_abs(m - m.adjoint());
}

bool is_hermitian(const Matrix& m, double tolerance) {
    return hermiticity_error(m) <= tolerance * std::max(1.0, max_abs(m));
}

bool is_finite(const Matrix& m) { return m.allFinite(); }

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_square(const Matrix& m, const std::string& what) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        std::ostringstream os;
        os << what << ": expected a non-empty square matrix, got " << m.rows() << "x"
           << m.cols();
        throw DimensionMismatch(os.str());
    }
}

void require_same_dim(const Matrix& a, const Matrix& b, const std::string& what) {
    require_square(a, what);
    require_square(b, what);
    if (a.rows() != b.rows()) {
        std::ostringstream os;
        os << what << ": dimension " << a.rows() << " vs " << b.rows();
        throw DimensionMismatch(os.str());
    }
}

void require_hermitian(const Matrix& m, const std::string& what) {
    require_square(m, what);
    if (!is_hermitian(m)) {
        std::ostringstream os;
        os << what << ": matrix is not Hermitian (max asymmetry " << hermiticity_error(m)
           << ")";
        throw InvariantViolation(os.str());
    }
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

Matrix anticommutator(const Matrix& a, const Matrix& b) {
    require_same_dim(a, b, "anticommutator");
    return a * b + b * a;
}

Complex trace(const Matrix& m) { return m.trace(); }

Matrix SpectralDecomposition::reconstruct() const {
    const auto n = eigenvectors.empty() ? 0 : eigenvectors.front().size();
    Matrix out = Matrix::Zero(n, n);
    for (std::size_t j = 0; j < eigenvalues.size(); ++j)
        out += eigenvalues[j] * eigenvectors[j] * eigenvectors[j].adjoint();
    return out;
}

Matrix SpectralDecomposition::basis() const {
    const auto n = eigenvectors.empty() ? 0 : eigenvectors.front().size();
    Matrix out(n, static_cast<Eigen::Index>(eigenvectors.size()));
    for (std::size_t j = 0; j < eigenvectors.size(); ++j)
        out.col(static_cast<Eigen::Index>(j)) = eigenvectors[j];
    return out;
}

namespace {

constexpr double kTieEps = 1e-12;

void fix_phase(Vector& v) {
    const double peak = v.cwiseAbs().maxCoeff();
    Eigen::Index k = 0;
    while (std::abs(v(k)) < peak * (1.0 - kTieEps)) ++k;
    const Complex phase = std::conj(v(k)) / std::abs(v(k));
    v *= phase;
    v(k) = Complex(v(k).real(), 0.0);
}

// Ordering among (near-)equal eigenvalues: the vector whose first nonzero
// component comes earlier wins; then larger real part of that component.
bool tie_less(const Vector& a, const Vector& b) {
    auto first_nonzero = [](const Vector& v) {
        Eigen::Index k = 0;
        while (k < v.size() && std::abs(v(k)) <= kTieEps) ++k;
        return k;
    };
    const auto ka = first_nonzero(a);
    const auto kb = first_nonzero(b);
    if (ka != kb) return ka < kb;
    if (ka == a.size()) return false;
    if (a(ka).real() != b(kb).real()) return a(ka).real() > b(kb).real();
    return a(ka).imag() > b(kb).imag();
}

}  // namespace

SpectralDecomposition hermitian_eigendecomposition(const Matrix& m) {
    require_hermitian(m, "hermitian_eigendecomposition");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
    if (solver.info() != Eigen::Success)
        throw Error("eigensolver_failure", "self-adjoint eigensolver did not converge");

    const auto n = m.rows();
    std::vector<std::pair<double, Vector>> pairs;
    pairs.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        Vector v = solver.eigenvectors().col(j);
        fix_phase(v);
        pairs.emplace_back(solver.eigenvalues()(j), std::move(v));
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    // Reorder runs of degenerate eigenvalues deterministically.
    const double scale = std::max(1.0, max_abs(m));
    for (std::size_t begin = 0; begin < pairs.size();) {
        std::size_t end = begin + 1;
        while (end < pairs.size() &&
               pairs[begin].first - pairs[end].first <= kTieEps * scale)
            ++end;
        std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(begin),
                         pairs.begin() + static_cast<std::ptrdiff_t>(end),
                         [](const auto& a, const auto& b) { return tie_less(a.second, b.second); });
        begin = end;
    }

    SpectralDecomposition out;
    for (auto& [value, vec] : pairs) {
        out.eigenvalues.push_back(value);
        out.eigenvectors.push_back(std::move(vec));
    }
    return out;
}

Matrix matrix_exponential_antihermitian(const Matrix& g, double s) {
    require_hermitian(g, "matrix_exponential_antihermitian");
    if (s == 0.0) return ops::identity(g.rows());
    const auto spec = hermitian_eigendecomposition(g);
    Matrix u = Matrix::Zero(g.rows(), g.cols());
    for (std::size_t j = 0; j < spec.eigenvalues.size(); ++j) {
        const Complex phase = std::exp(-kI * s * spec.eigenvalues[j]);
        u += phase * spec.eigenvectors[j] * spec.eigenvectors[j].adjoint();
    }
    return u;
}

DensityMatrix::DensityMatrix(const Matrix& m, double psd_tolerance) {
    const auto issues = violations(m, psd_tolerance);
    if (!issues.empty()) {
        std::string msg = "not a density matrix:";
        for (const auto& s : issues) msg += " " + s;
        throw InvariantViolation(msg);
    }
    m_ = hermitian_part(m);
}

std::vector<std::string> DensityMatrix::violations(const Matrix& m, double psd_tolerance) {
    std::vector<std::string> out;
    if (m.rows() != m.cols() || m.rows() < 1) {
        out.emplace_back("square");
        return out;
    }
    if (!is_finite(m)) {
        out.emplace_back("finite");
        return out;
    }
    const bool hermitian = is_hermitian(m);
    if (!hermitian) out.emplace_back("hermitian");
    if (std::abs(trace(m) - 1.0) > tol::trace) out.emplace_back("trace");
    if (hermitian) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -psd_tolerance)
            out.emplace_back("positive_semidefinite");
    }
    return out;
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
    const double norm = psi.norm();
    if (!(norm > 0.0)) throw DomainError("pure state from a zero vector");
    const Vector unit = psi / norm;
    return DensityMatrix(unit * unit.adjoint());
}

DensityMatrix DensityMatrix::basis_state(Eigen::Index i, Eigen::Index dim) {
    return DensityMatrix(ops::ket_bra(i, i, dim));
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
    return DensityMatrix(ops::identity(dim) / static_cast<double>(dim));
}

}  // namespace flucbound
