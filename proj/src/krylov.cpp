#include "qsq/krylov.hpp"

#include <algorithm>
#include <cmath>

#include "qsq/errors.hpp"

namespace qsq {

double default_eta(int /*dim*/, double noise_sigma) { return std::max(kNoiselessEta, noise_sigma); }

KrylovPair assemble(const MomentSequence& m, int d) {
  if (d < 1) throw ConfigError("Krylov dimension must be >= 1");
  if (d > m.degree()) {
    throw ConfigError("Krylov dimension " + std::to_string(d) + " needs moments up to X_" + std::to_string(d) +
                      " but only " + std::to_string(m.degree()) + " are available");
  }
  KrylovPair out{ComplexMatrix(d, d), ComplexMatrix(d, d)};
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out.shift(i, j) = m.at(j - i + 1);
      out.gram(i, j) = m.at(j - i);
    }
  }
  return out;
}

RegularizedGram regularize(const ComplexMatrix& gram, double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("regularization eta must be positive");
  require_square(gram, "Gram matrix");
  require_finite(gram, "Gram matrix");
  RegularizedGram out;
  out.matrix = (gram + gram.adjoint()) / 2.0;
  out.eta = eta;
  const double lambda_min = hermitian_eigendecompose(out.matrix).eigenvalues(0);
  if (lambda_min < eta) {
    out.shift = eta - lambda_min;
    out.matrix.diagonal().array() += out.shift;
  }
  return out;
}

ComplexMatrix orthonormalize(const ComplexMatrix& shift, const RegularizedGram& reg) {
  require_square(shift, "shift matrix");
  if (shift.rows() != reg.matrix.rows()) throw ConfigError("shift and Gram matrices differ in size");
  const ComplexMatrix inv_sqrt = psd_power(reg.matrix, PsdExponent::kInverseSqrt, reg.eta);
  return inv_sqrt * shift * inv_sqrt;
}

ComplexMatrix project_to_unitary(const ComplexMatrix& m) {
  require_square(m, "matrix to project");
  const SingularValueDecomposition f = svd(m);
  return f.left * f.right.adjoint();
}

ComplexMatrix gram_schmidt_hessenberg(const KrylovPair& pair) {
  const int d = pair.dim();
  const ComplexMatrix s = (pair.gram + pair.gram.adjoint()) / 2.0;
  const double lambda_min = hermitian_eigendecompose(s).eigenvalues(0);
  if (lambda_min <= 1e-10) {
    throw NumericalError("Gram matrix is too ill-conditioned for Gram-Schmidt (lambda_min = " +
                         std::to_string(lambda_min) + ")");
  }
  auto inner = [&s](const ComplexVector& x, const ComplexVector& y) { return x.dot(s * y); };

  // Column k of c holds the Krylov-basis coefficients of the k-th orthonormal vector.
  ComplexMatrix c = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    ComplexVector v = ComplexVector::Unit(d, k);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < k; ++i) v -= inner(c.col(i), v) * c.col(i);
    }
    const double norm = std::sqrt(std::max(inner(v, v).real(), 0.0));
    if (!(norm > 0.0)) throw NumericalError("Gram-Schmidt produced a zero vector");
    c.col(k) = v / norm;
  }
  return c.adjoint() * pair.shift * c;
}

ComplexMatrix gram_schmidt_reference(const KrylovPair& pair) {
  ComplexMatrix u = gram_schmidt_hessenberg(pair);
  const double norm = u.col(u.cols() - 1).norm();
  if (!(norm > 0.0)) throw NumericalError("last Hessenberg column vanished");
  u.col(u.cols() - 1) /= norm;
  return u;
}

}  // namespace qsq
