#pragma once

#include "qsq/linalg.hpp"
#include "qsq/moments.hpp"

namespace qsq {

/// Toeplitz pair built from moments: shift(i,j) = X_{j-i+1}, gram(i,j) = X_{j-i}.
struct KrylovPair {
  ComplexMatrix shift;
  ComplexMatrix gram;
  int dim() const { return static_cast<int>(gram.rows()); }
};

/// Gram matrix after the Tikhonov shift. `shift` is 0 when no shift was needed.
struct RegularizedGram {
  ComplexMatrix matrix;
  double eta = 0.0;
  double shift = 0.0;
};

/// Regularization used when no moment noise is declared.
inline constexpr double kNoiselessEta = 3e-11;

/// max(kNoiselessEta, sigma). `dim` is accepted for callers that want a dimension-aware rule later.
double default_eta(int dim, double noise_sigma);

/// Throws ConfigError if d < 1 or d exceeds the moment degree.
KrylovPair assemble(const MomentSequence& m, int d);

/**
 * @brief Shifts S' by (eta - lambda_min) I when lambda_min < eta.
 *
 * S' is re-Hermitized first. Throws ConfigError for eta <= 0.
 */
RegularizedGram regularize(const ComplexMatrix& gram, double eta);

/// S~^{-1/2} U' S~^{-1/2}, with eigenvalues clamped at reg.eta.
ComplexMatrix orthonormalize(const ComplexMatrix& shift, const RegularizedGram& reg);

/// P Q^dagger from the SVD M = P D Q^dagger.
ComplexMatrix project_to_unitary(const ComplexMatrix& m);

/**
 * @brief C^dagger U' C where the columns of C are the Gram-Schmidt
 * orthonormalization of the Krylov basis under <x, y> = x^dagger S y.
 *
 * Upper Hessenberg. The last column is left unnormalized. Throws
 * NumericalError when lambda_min(S) <= 1e-10.
 */
ComplexMatrix gram_schmidt_hessenberg(const KrylovPair& pair);

/// gram_schmidt_hessenberg with the last column scaled to unit norm.
ComplexMatrix gram_schmidt_reference(const KrylovPair& pair);

}  // namespace qsq
