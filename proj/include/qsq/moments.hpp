#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qsq/linalg.hpp"
#include "qsq/pauli_model.hpp"
#include "qsq/spectral_function.hpp"

namespace qsq {

/// A normalized state on n qubits.
class StateVector {
 public:
  /// Throws ConfigError unless ||amplitudes|| = 1 within 1e-12.
  explicit StateVector(ComplexVector amplitudes);
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Eigen::Index size() const { return amplitudes_.size(); }

 private:
  ComplexVector amplitudes_;
};

enum class ComboPhase { kPlus, kMinus, kPlusI, kMinusI };
Complex phase_value(ComboPhase phase);

struct StateSpec;

struct Antiferromagnet {};
struct BasisState {
  std::string bits;  // bits[q] is qubit q
};
struct RandomState {
  std::uint64_t seed = 0;
};
struct ComboState {
  std::shared_ptr<const StateSpec> first;
  std::shared_ptr<const StateSpec> second;
  ComboPhase phase = ComboPhase::kPlus;
};

struct StateSpec {
  std::variant<Antiferromagnet, BasisState, RandomState, ComboState> kind;
};

/// The combination (psi0 + phase*psi1)/norm together with norm = ||psi0 + phase*psi1||.
struct Combination {
  StateVector state;
  double norm;
};

/// Throws ConfigError if the combination has zero norm.
Combination combine(const StateVector& psi0, const StateVector& psi1, ComboPhase phase);

/**
 * @brief Builds an initial state.
 *
 * The antiferromagnet is the basis state 1010...10 (qubit 0 set). Random
 * states draw i.i.d. complex standard Gaussian amplitudes and normalize.
 */
StateVector prepare_state(const StateSpec& spec, int qubits);

/// Parses `antiferromagnet`, `basis:0110`, `random:7`.
StateSpec parse_state(std::string_view text);

/// Moments X_j = <psi0|U^j|psi0>, j = 0..degree, with X_{-j} = conj(X_j) implied.
class MomentSequence {
 public:
  /// values[0] must be exactly 1.
  MomentSequence(std::vector<Complex> values, double dt, std::string model, double noise_sigma = 0.0);

  int degree() const { return static_cast<int>(values_.size()) - 1; }
  /// X_j for |j| <= degree.
  Complex at(int j) const;
  const std::vector<Complex>& values() const { return values_; }
  double dt() const { return dt_; }
  const std::string& model() const { return model_; }
  /// Standard deviation of the Gaussian noise applied per real component; 0 if exact.
  double noise_sigma() const { return noise_sigma_; }

 private:
  std::vector<Complex> values_;
  double dt_;
  std::string model_;
  double noise_sigma_;
};

struct NoiseModel {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Exact moments from the spectral decomposition; X_0 is set to 1.
MomentSequence moments(const SpectralData& spectrum, const StateVector& psi0, int degree);

/// Adds independent N(0, sigma^2) noise to the real and imaginary parts of X_1..X_d.
MomentSequence apply_noise(const MomentSequence& m, const NoiseModel& noise);

/// sum_j conj(<e_j|psi1>) <e_j|psi0> f(zeta_j), zeta_j = exp(-i E_j dt).
Complex exact_functional(const SpectralData& spectrum, const StateVector& psi0, const StateVector& psi1,
                         const SpectralFunction& f);

/// The products conj(<e_j|psi1>) <e_j|psi0>, for evaluating many functions against one pair of states.
ComplexVector spectral_weights(const SpectralData& spectrum, const StateVector& psi0, const StateVector& psi1);
Complex exact_functional(const SpectralData& spectrum, const ComplexVector& weights, const SpectralFunction& f);

/// Eigen-amplitude probabilities |<e_j|psi0>|^2 in eigenvector order.
RealVector eigen_populations(const SpectralData& spectrum, const StateVector& psi0);

/**
 * @brief Support statistics of psi0 in the energy eigenbasis.
 *
 * Raw counts treat every returned eigenvector separately. Merged counts sum
 * the populations of each degenerate energy cluster (gap below
 * `degeneracy_tol`) and count clusters, which is basis-independent.
 */
struct SupportCounts {
  int raw_support = 0;
  int raw_covering = 0;
  int merged_support = 0;
  int merged_covering = 0;
  double min_energy = 0.0;  // over the covering set
  double max_energy = 0.0;
};

SupportCounts support_counts(const SpectralData& spectrum, const StateVector& psi0,
                             double threshold = 1e-12, double mass = 0.999,
                             double degeneracy_tol = 1e-8);

}  // namespace qsq
