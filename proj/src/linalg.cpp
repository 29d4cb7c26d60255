#include "qsq/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qsq/errors.hpp"

namespace qsq {

void require_finite(const ComplexMatrix& m, std::string_view what) {
  if (!m.allFinite()) {
    throw ConfigError(std::string(what) + ": matrix has non-finite entries");
  }
}

void require_square(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() != m.cols()) {
    throw ConfigError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + ", expected square");
  }
}

HermitianEigensystem hermitian_eigendecompose(const ComplexMatrix& m) {
  require_square(m, "hermitian_eigendecompose");
  require_finite(m, "hermitian_eigendecompose");
  HermitianEigensystem out;
  if (m.rows() == 0) return out;
  const ComplexMatrix h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  return out;
}

HermitianEigensystem symmetric_eigendecompose(const RealMatrix& m) {
  if (m.rows() != m.cols()) throw ConfigError("symmetric_eigendecompose: matrix is not square");
  if (!m.allFinite()) throw ConfigError("symmetric_eigendecompose: matrix has non-finite entries");
  HermitianEigensystem out;
  if (m.rows() == 0) return out;
  const RealMatrix h = (m + m.transpose()) * 0.5;
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors().cast<Complex>();
  return out;
}

ComplexMatrix psd_power(const ComplexMatrix& m, PsdExponent exponent, double floor) {
  if (!(floor > 0.0) || !std::isfinite(floor)) {
    throw ConfigError("psd_power: floor must be positive and finite");
  }
  const auto eig = hermitian_eigendecompose(m);
  const double p = exponent == PsdExponent::kSqrt ? 0.5 : -0.5;
  RealVector scaled(eig.eigenvalues.size());
  for (Eigen::Index k = 0; k < scaled.size(); ++k) {
    scaled(k) = std::pow(std::max(eig.eigenvalues(k), floor), p);
  }
  ComplexMatrix out = eig.eigenvectors * scaled.asDiagonal() * eig.eigenvectors.adjoint();
  return (out + out.adjoint()) * 0.5;
}

SingularValueDecomposition svd(const ComplexMatrix& m) {
  require_square(m, "svd");
  require_finite(m, "svd");
  Eigen::JacobiSVD<ComplexMatrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

UnitaryEigensystem unitary_eigendecompose(const ComplexMatrix& m) {
  require_square(m, "unitary_eigendecompose");
  require_finite(m, "unitary_eigendecompose");
  const auto n = m.rows();
  const double defect = (m.adjoint() * m - ComplexMatrix::Identity(n, n)).norm();
  if (defect > 1e-6) {
    throw NumericalError("unitary_eigendecompose: input is not unitary (||M^H M - I||_F = " +
                         std::to_string(defect) + ")");
  }
  UnitaryEigensystem out;
  if (n == 0) return out;
  Eigen::ComplexSchur<ComplexMatrix> schur(m, /*computeU=*/true);
  if (schur.info() != Eigen::Success) {
    throw NumericalError("unitary_eigendecompose: Schur iteration did not converge");
  }
  out.eigenvalues = schur.matrixT().diagonal();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double r = std::abs(out.eigenvalues(k));
    if (r == 0.0) throw NumericalError("unitary_eigendecompose: zero eigenvalue");
    out.eigenvalues(k) /= r;
  }
  out.eigenvectors = schur.matrixU();
  return out;
}

}  // namespace qsq
