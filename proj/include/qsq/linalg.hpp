#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string_view>

namespace qsq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues ascending; eigenvectors are the orthonormal columns of `eigenvectors`.
struct HermitianEigensystem {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// Unit-modulus eigenvalues with orthonormal eigenvector columns.
struct UnitaryEigensystem {
  ComplexVector eigenvalues;
  ComplexMatrix eigenvectors;
};

/// M = left * diag(singular_values) * right^dagger, singular values descending.
struct SingularValueDecomposition {
  ComplexMatrix left;
  RealVector singular_values;
  ComplexMatrix right;
};

enum class PsdExponent { kSqrt, kInverseSqrt };

/// Throws ConfigError if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, std::string_view what);
/// Throws ConfigError if `m` is not square.
void require_square(const ComplexMatrix& m, std::string_view what);

/**
 * @brief Eigendecomposition of a Hermitian matrix.
 *
 * The input is symmetrized as (M + M^dagger)/2 before the solve, so slightly
 * non-Hermitian input from roundoff is accepted.
 */
HermitianEigensystem hermitian_eigendecompose(const ComplexMatrix& m);

/// Same contract as hermitian_eigendecompose, for real symmetric input.
HermitianEigensystem symmetric_eigendecompose(const RealMatrix& m);

/**
 * @brief V diag(max(lambda, floor)^p) V^dagger for p = +1/2 or -1/2.
 *
 * Eigenvalues below `floor` are clamped up to `floor` before the power is
 * taken. `floor` must be positive.
 */
ComplexMatrix psd_power(const ComplexMatrix& m, PsdExponent exponent, double floor);

SingularValueDecomposition svd(const ComplexMatrix& m);

/**
 * @brief Eigensystem of a unitary matrix via the complex Schur form.
 *
 * For a normal matrix the Schur factor T is diagonal up to roundoff, so the
 * Schur vectors are an orthonormal eigenbasis even inside degenerate
 * clusters. Eigenvalues are rescaled to modulus one. Throws NumericalError if
 * ||M^dagger M - I||_F exceeds 1e-6.
 */
UnitaryEigensystem unitary_eigendecompose(const ComplexMatrix& m);

}  // namespace qsq
