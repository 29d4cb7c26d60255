#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsq/linalg.hpp"

namespace qsq {

/// sum_j a_j z^j for j = -degree..degree; coefficients[k] holds a_{k - degree}.
struct Laurent {
  std::vector<Complex> coefficients;
  int degree() const { return static_cast<int>(coefficients.size() / 2); }
  Complex at(int j) const { return coefficients[static_cast<std::size_t>(j + degree())]; }
};

struct Monomial {
  int power = 0;
};

/// exp(-beta E) with E = -arg(z)/dt.
struct Gibbs {
  double beta = 0.0;
  double dt = 1.0;
};

/// 1/(E - omega - i chi) with E = -arg(z)/dt.
struct Greens {
  double omega = 0.0;
  double chi = 0.1;
  double dt = 1.0;
};

/// A scalar function on the unit circle, evaluated at quadrature nodes and at
/// the eigenvalues of U.
class SpectralFunction {
 public:
  using Variant = std::variant<Laurent, Monomial, Gibbs, Greens>;

  static SpectralFunction laurent(std::vector<Complex> coefficients);
  static SpectralFunction monomial(int power);
  static SpectralFunction gibbs(double beta, double dt);
  /// chi = 0 is accepted; evaluating exactly on the pole then throws.
  static SpectralFunction greens(double omega, double chi, double dt);

  /// Requires |z| = 1 within 1e-8.
  Complex operator()(Complex z) const;

  const Variant& variant() const { return value_; }
  /// True for Laurent and Monomial, whose matrix function is a finite sum of powers.
  bool is_laurent_polynomial() const;
  /// Coefficients as a Laurent polynomial; throws for Gibbs and Greens.
  Laurent as_laurent() const;
  std::string describe() const;

 private:
  explicit SpectralFunction(Variant v) : value_(std::move(v)) {}
  Variant value_;
};

/// Same as f(z); kept as a free function for call sites that read better that way.
inline Complex eval(const SpectralFunction& f, Complex z) { return f(z); }

/// E = -arg(z)/dt with arg taken in [-pi, pi), so z = -1 maps to +pi/dt.
double node_to_energy(Complex z, double dt);

/// z = exp(-i E dt).
Complex energy_to_node(double energy, double dt);

/**
 * @brief Random Laurent polynomial of exact degree `degree`.
 *
 * Coefficients are i.i.d. complex standard Gaussians scaled so that
 * sum |a_j| = 1. Deterministic per seed.
 */
SpectralFunction random_laurent(int degree, std::uint64_t seed);

/**
 * @brief Parses `monomial:5`, `gibbs:beta=1`, `greens:omega=-3.2,chi=0.1` or
 * `laurent:path.json`.
 *
 * `dt` is attached to the energy-based variants.
 */
SpectralFunction parse_function(std::string_view spec, double dt);

}  // namespace qsq
