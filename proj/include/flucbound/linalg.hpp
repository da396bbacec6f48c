#pragma once

// Dense complex matrix algebra for small Hilbert spaces (dim <= ~16).
//
// Matrices are plain Eigen dynamic complex matrices; the domain-level
// invariants (Hermiticity, unit trace, positivity) are enforced by the
// DensityMatrix type and by the checks each operation performs on entry.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flucbound/errors.hpp"

namespace flucbound {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

namespace tol {
inline constexpr double herm = 1e-10;    // relative to max(1, max|entry|)
inline constexpr double trace = 1e-8;
inline constexpr double psd = 1e-10;
inline constexpr double orth = 1e-10;
inline constexpr double recon = 1e-9;
inline constexpr double unit = 1e-10;
}  // namespace tol

namespace ops {
Matrix identity(Eigen::Index dim);
Matrix zero(Eigen::Index dim);
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();
/// |0><1|, the lowering operator in the {|0>, |1>} basis.
Matrix sigma_minus();
/// |1><0|
Matrix sigma_plus();
/// |i><j| in a dim-dimensional space.
Matrix ket_bra(Eigen::Index i, Eigen::Index j, Eigen::Index dim);
}  // namespace ops

double max_abs(const Matrix& m);
/// max_ij |m_ij - conj(m_ji)|
double hermiticity_error(const Matrix& m);
bool is_hermitian(const Matrix& m, double tolerance = tol::herm);
bool is_finite(const Matrix& m);
/// (m + m^dagger) / 2
Matrix hermitian_part(const Matrix& m);

void require_square(const Matrix& m, const std::string& what);
void require_same_dim(const Matrix& a, const Matrix& b, const std::string& what);
void require_hermitian(const Matrix& m, const std::string& what);

Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);
Complex trace(const Matrix& m);

struct SpectralDecomposition {
    /// Descending.
    std::vector<double> eigenvalues;
    /// Orthonormal, phase-fixed so the largest-magnitude component is real positive.
    std::vector<Vector> eigenvectors;

    Matrix reconstruct() const;
    /// Columns are the eigenvectors, in eigenvalue order.
    Matrix basis() const;
};

/// Throws InvariantViolation for non-Hermitian input. Decomposes the
/// symmetrized (m + m^dagger)/2.
SpectralDecomposition hermitian_eigendecomposition(const Matrix& m);

/// exp(-i s g) for Hermitian g, via the spectral decomposition of g.
Matrix matrix_exponential_antihermitian(const Matrix& g, double s);

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
/// The stored matrix is the exactly symmetrized input.
class DensityMatrix {
public:
    explicit DensityMatrix(const Matrix& m, double psd_tolerance = tol::psd);

    /// Names every violated invariant ("square", "finite", "hermitian",
    /// "trace", "positive_semidefinite"); empty when m is a valid state.
    static std::vector<std::string> violations(const Matrix& m,
                                               double psd_tolerance = tol::psd);

    static DensityMatrix pure(const Vector& psi);
    static DensityMatrix basis_state(Eigen::Index i, Eigen::Index dim);
    static DensityMatrix maximally_mixed(Eigen::Index dim);

    const Matrix& matrix() const noexcept { return m_; }
    Eigen::Index dim() const noexcept { return m_.rows(); }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

private:
    Matrix m_;
};

}  // namespace flucbound
