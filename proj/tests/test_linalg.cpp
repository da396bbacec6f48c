#include "doctest.h"

#include <numbers>

#include "flucbound/linalg.hpp"
#include "test_support.hpp"

using namespace flucbound;
using namespace flucbound::testing;

TEST_CASE("commutator: Pauli algebra and self-commutation") {
    CHECK(max_abs_diff(commutator(ops::sigma_x(), ops::sigma_y()), 2.0 * kI * ops::sigma_z()) ==
          doctest::Approx(0.0));

    std::mt19937_64 rng(1);
    const Matrix m = random_complex(rng, 4);
    CHECK(max_abs(commutator(m, m)) < 1e-14);
}

TEST_CASE("commutator: [sigma_z, A(0)] against a brute-force product") {
    // A(t) = cos t sigma_x + sin t sigma_y, so A(0) = sigma_x.
    const Matrix a0 = std::cos(0.0) * ops::sigma_x() + std::sin(0.0) * ops::sigma_y();
    const Matrix oracle = brute_mul(ops::sigma_z(), a0) - brute_mul(a0, ops::sigma_z());
    CHECK(max_abs_diff(oracle, 2.0 * kI * ops::sigma_y()) == 0.0);
    CHECK(max_abs_diff(commutator(ops::sigma_z(), a0), oracle) < 1e-15);
}

TEST_CASE("commutator and anticommutator reject mismatched dimensions") {
    CHECK_THROWS_AS(commutator(ops::identity(2), ops::identity(3)), DimensionMismatch);
    CHECK_THROWS_AS(anticommutator(ops::identity(2), ops::identity(3)), DimensionMismatch);
}

TEST_CASE("anticommutator examples") {
    CHECK(max_abs_diff(anticommutator(ops::sigma_x(), ops::sigma_x()), 2.0 * ops::identity(2)) == 0.0);
    const Matrix proj1 = ops::ket_bra(1, 1, 2);
    CHECK(max_abs_diff(anticommutator(ops::sigma_plus() * ops::sigma_minus(), proj1), 2.0 * proj1) ==
          0.0);

    // Example-2 observable with <A> = 0: Delta A = A. The anticommutator equals
    // twice the symmetrized product, which vanishes because {sigma_x, sigma_y} = 0.
    for (double t : {0.0, 0.3, 1.7, 4.0}) {
        const Matrix a = std::cos(t) * ops::sigma_x() + std::sin(t) * ops::sigma_y();
        const Matrix da = -std::sin(t) * ops::sigma_x() + std::cos(t) * ops::sigma_y();
        const Matrix sym = 0.5 * (brute_mul(a, da) + brute_mul(da, a));
        CHECK(max_abs_diff(anticommutator(a, da), 2.0 * sym) < 1e-15);
        CHECK(max_abs(anticommutator(a, da)) < 1e-15);
    }
}

TEST_CASE("trace examples") {
    CHECK(trace(ops::identity(2)) == Complex(2.0, 0.0));
    CHECK(trace(ops::sigma_z()) == Complex(0.0, 0.0));
}

TEST_CASE("Hermitian inputs: commutator anti-Hermitian, anticommutator Hermitian") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = 2 + trial % 7;
        const Matrix a = random_hermitian(rng, n);
        const Matrix b = random_hermitian(rng, n);
        const Matrix c = commutator(a, b);
        const Matrix ac = anticommutator(a, b);
        CHECK(max_abs_diff(c.adjoint(), -c) <= tol::herm * std::max(1.0, max_abs(c)));
        CHECK(max_abs_diff(ac.adjoint(), ac) <= tol::herm * std::max(1.0, max_abs(ac)));
    }
}

TEST_CASE("cyclic trace on random triples up to dim 8") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = 1 + trial % 8;
        const Matrix a = random_complex(rng, n);
        const Matrix b = random_complex(rng, n);
        const Matrix c = random_complex(rng, n);
        const Complex abc = trace(a * b * c);
        const double scale = std::max(1.0, std::abs(abc));
        CHECK(std::abs(abc - trace(b * c * a)) <= 1e-12 * scale);
        CHECK(std::abs(abc - trace(c * a * b)) <= 1e-12 * scale);
    }
}

TEST_CASE("eigendecomposition: sigma_z and diagonal states") {
    const auto s = hermitian_eigendecomposition(ops::sigma_z());
    REQUIRE(s.eigenvalues.size() == 2);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(-1.0));
    CHECK(max_abs_diff(s.eigenvectors[0], Vector::Unit(2, 0)) < 1e-15);
    CHECK(max_abs_diff(s.eigenvectors[1], Vector::Unit(2, 1)) < 1e-15);

    // rho(t) = diag(1 - e^{-t}, e^{-t}) for unit decay rate.
    for (double t : {0.1, 0.5, 2.0}) {
        Matrix rho = Matrix::Zero(2, 2);
        rho(0, 0) = 1.0 - std::exp(-t);
        rho(1, 1) = std::exp(-t);
        const auto d = hermitian_eigendecomposition(rho);
        CHECK(d.eigenvalues[0] == doctest::Approx(std::max(1.0 - std::exp(-t), std::exp(-t))));
        CHECK(d.eigenvalues[1] == doctest::Approx(std::min(1.0 - std::exp(-t), std::exp(-t))));
    }
}

TEST_CASE("eigendecomposition: reconstruction, orthonormality, ordering and phase") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = 2 + trial % 7;
        const Matrix m = random_hermitian(rng, n);
        const auto s = hermitian_eigendecomposition(m);
        CHECK(max_abs_diff(s.reconstruct(), m) <= tol::recon);
        const Matrix v = s.basis();
        CHECK(max_abs_diff(v.adjoint() * v, Matrix::Identity(n, n)) <= tol::orth);
        for (std::size_t j = 0; j + 1 < s.eigenvalues.size(); ++j)
            CHECK(s.eigenvalues[j] >= s.eigenvalues[j + 1]);
        for (const auto& vec : s.eigenvectors) {
            Eigen::Index k;
            vec.cwiseAbs().maxCoeff(&k);
            CHECK(vec(k).imag() == 0.0);
            CHECK(vec(k).real() > 0.0);
        }
    }
}

TEST_CASE("eigendecomposition: degenerate eigenvalues are ordered deterministically") {
    const auto s = hermitian_eigendecomposition(ops::identity(3));
    for (std::size_t j = 0; j < 3; ++j)
        CHECK(max_abs_diff(s.eigenvectors[j], Vector::Unit(3, static_cast<Eigen::Index>(j))) < 1e-15);
}

TEST_CASE("eigendecomposition rejects non-Hermitian input") {
    CHECK_THROWS_AS(hermitian_eigendecomposition(ops::sigma_minus()), InvariantViolation);
}

TEST_CASE("matrix exponential") {
    const double theta = 0.37;
    Matrix expected = Matrix::Zero(2, 2);
    expected(0, 0) = std::exp(-kI * theta);
    expected(1, 1) = std::exp(kI * theta);
    CHECK(max_abs_diff(matrix_exponential_antihermitian(ops::sigma_z(), theta), expected) < 1e-15);

    CHECK(max_abs_diff(matrix_exponential_antihermitian(ops::sigma_x(), 0.0), ops::identity(2)) == 0.0);

    // exp(-i pi/2 sigma_x) = -i sigma_x, checked against a 20-term series.
    const double half_pi = std::numbers::pi / 2.0;
    const Matrix series = series_exp(ops::sigma_x(), half_pi, 20);
    CHECK(max_abs_diff(series, -kI * ops::sigma_x()) < 1e-9);
    CHECK(max_abs_diff(matrix_exponential_antihermitian(ops::sigma_x(), half_pi), -kI * ops::sigma_x()) <
          1e-14);

    CHECK_THROWS_AS(matrix_exponential_antihermitian(ops::sigma_minus(), 1.0), InvariantViolation);
}

TEST_CASE("matrix exponential is unitary and matches the series") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = 2 + trial % 7;
        const Matrix g = random_hermitian(rng, n, 0.5);
        const double s = 0.1 + 0.01 * trial;
        const Matrix u = matrix_exponential_antihermitian(g, s);
        CHECK(max_abs_diff(u.adjoint() * u, Matrix::Identity(n, n)) <= tol::unit);
        if (trial < 20) CHECK(max_abs_diff(u, series_exp(g, s, 40)) < 1e-10);
    }
}

TEST_CASE("DensityMatrix validation names each violated invariant") {
    CHECK(DensityMatrix::violations(ops::ket_bra(0, 0, 2)).empty());
    CHECK(DensityMatrix::violations(0.9 * ops::ket_bra(0, 0, 2)) == std::vector<std::string>{"trace"});
    CHECK(DensityMatrix::violations(ops::sigma_minus() + ops::ket_bra(0, 0, 2)) ==
          std::vector<std::string>{"hermitian"});
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK(DensityMatrix::violations(neg) == std::vector<std::string>{"positive_semidefinite"});
    Matrix nan = ops::ket_bra(0, 0, 2);
    nan(1, 0) = NAN;
    CHECK(DensityMatrix::violations(nan) == std::vector<std::string>{"finite"});
    CHECK(DensityMatrix::violations(Matrix::Zero(2, 3)) == std::vector<std::string>{"square"});
    CHECK_THROWS_AS(DensityMatrix{neg}, InvariantViolation);

    // Stored matrix is exactly Hermitian.
    Matrix near = ops::identity(2) / 2.0;
    near(0, 1) = Complex(0.1, 1e-13);
    near(1, 0) = Complex(0.1, 0.0);
    const DensityMatrix rho(near);
    CHECK(rho.matrix()(0, 1) == std::conj(rho.matrix()(1, 0)));
}
