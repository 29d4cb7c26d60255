#pragma once

#include <string>
#include <vector>

#include "qsq/moments.hpp"
#include "qsq/pauli_model.hpp"
#include "qsq/spectral_function.hpp"

namespace qsq {

/// sum_j coefficients[j + degree] z^j for |j| <= degree, with the error the method reports.
struct LaurentApproximation {
  std::vector<Complex> coefficients;
  double error = 0.0;
  std::string method;

  int degree() const { return static_cast<int>(coefficients.size() / 2); }
  SpectralFunction as_function() const { return SpectralFunction::laurent(coefficients); }
};

/**
 * @brief Truncated Fourier series of exp(-beta E) = exp(beta theta / dt), theta in [-pi, pi).
 *
 * Coefficients for |j| <= d-1. `error` is the L2 truncation error on the
 * circle with normalized arc length.
 */
LaurentApproximation fourier_coefficients(double beta, double dt, int d);

/// sum_j a_j X_j, using X_{-j} = conj(X_j).
Complex estimate_from_moments(const MomentSequence& m, const LaurentApproximation& approx);

struct FixedBound {
  double bound = 0.0;       // min over gamma of 4 exp(beta h / gamma - (d/2)(1 - gamma))
  double gamma_star = 0.0;  // minimizer
  double relative = 0.0;    // bound / exp(beta h)
};

/// `d` is the Laurent degree. Golden-section search over gamma in [1e-9, 1 - 1e-9], then compared against both ends.
FixedBound fixed_laurent_bound(double beta, double h_norm, int d);

/// 2 ceil(log(4/delta) / (1 - gamma) + beta h / gamma); gamma in (0, 1), delta in (0, 4).
int fixed_laurent_degree(double beta, double h_norm, double gamma, double delta);

enum class FitMethod { kInteriorPoint, kLawson, kLeastSquares };
enum class FitSupport { kAllEigenvalues, kStateSupport };

/**
 * @brief Best approximation of `values` at `points` by a Laurent polynomial of degree d-1.
 *
 * kInteriorPoint solves min t s.t. |residual_i| <= t with a log-barrier
 * method; its max residual is within 1e-12 * max|values| of the optimum.
 * kLawson is reweighted least squares (w <- w |r|, at most 500 iterations),
 * which stalls when several residuals are nearly tied. kLeastSquares stops
 * after the uniform-weight solve. With no more points than coefficients the
 * interpolant is exact. `error` is the max residual.
 */
LaurentApproximation minimax_laurent(const std::vector<Complex>& points, const std::vector<Complex>& values, int d,
                                     FitMethod method = FitMethod::kInteriorPoint);

struct OptimalLaurentOptions {
  FitMethod method = FitMethod::kInteriorPoint;
  FitSupport support = FitSupport::kAllEigenvalues;
  const StateVector* state = nullptr;  // required for kStateSupport
  double support_threshold = 1e-12;
  double degeneracy_tol = 1e-8;
};

/// minimax_laurent of f over the distinct eigenvalues of U = exp(-i H dt).
LaurentApproximation optimal_laurent(const SpectralData& spectrum, const SpectralFunction& f, int d,
                                     const OptimalLaurentOptions& options = {});

}  // namespace qsq
