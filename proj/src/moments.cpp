#include "qsq/moments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "qsq/errors.hpp"

namespace qsq {

StateVector::StateVector(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (!amplitudes_.allFinite()) throw ConfigError("state has non-finite amplitudes");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw ConfigError("state is not normalized (norm = " + std::to_string(norm) + ")");
  }
}

Complex phase_value(ComboPhase phase) {
  switch (phase) {
    case ComboPhase::kPlus: return {1.0, 0.0};
    case ComboPhase::kMinus: return {-1.0, 0.0};
    case ComboPhase::kPlusI: return {0.0, 1.0};
    case ComboPhase::kMinusI: return {0.0, -1.0};
  }
  return {1.0, 0.0};
}

Combination combine(const StateVector& psi0, const StateVector& psi1, ComboPhase phase) {
  if (psi0.size() != psi1.size()) throw ConfigError("combined states have different dimensions");
  ComplexVector v = psi0.amplitudes() + phase_value(phase) * psi1.amplitudes();
  const double norm = v.norm();
  if (norm < 1e-12) throw ConfigError("state combination has zero norm");
  v /= norm;
  // Renormalizing once more keeps the StateVector tolerance satisfied after the division.
  v /= v.norm();
  return {StateVector(std::move(v)), norm};
}

StateVector prepare_state(const StateSpec& spec, int qubits) {
  if (qubits < 1 || qubits > 30) throw ConfigError("qubit count out of range");
  const auto dim = Eigen::Index{1} << qubits;
  auto basis = [&](const std::string& bits) {
    if (bits.size() != static_cast<std::size_t>(qubits)) {
      throw ConfigError("bitstring '" + bits + "' has length " + std::to_string(bits.size()) +
                        ", expected " + std::to_string(qubits));
    }
    Eigen::Index index = 0;
    for (char b : bits) {
      if (b != '0' && b != '1') throw ConfigError("bitstring '" + bits + "' has non-binary characters");
      index = (index << 1) | (b == '1' ? 1 : 0);
    }
    ComplexVector v = ComplexVector::Zero(dim);
    v(index) = 1.0;
    return StateVector(std::move(v));
  };

  return std::visit(
      [&](const auto& kind) -> StateVector {
        using T = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<T, Antiferromagnet>) {
          std::string bits(static_cast<std::size_t>(qubits), '0');
          for (std::size_t q = 0; q < bits.size(); q += 2) bits[q] = '1';
          return basis(bits);
        } else if constexpr (std::is_same_v<T, BasisState>) {
          return basis(kind.bits);
        } else if constexpr (std::is_same_v<T, RandomState>) {
          std::mt19937_64 rng(kind.seed);
          std::normal_distribution<double> gauss(0.0, 1.0);
          ComplexVector v(dim);
          for (Eigen::Index k = 0; k < dim; ++k) {
            const double re = gauss(rng);
            v(k) = Complex(re, gauss(rng));
          }
          v /= v.norm();
          return StateVector(std::move(v));
        } else {
          if (!kind.first || !kind.second) throw ConfigError("combo state is missing a component");
          return combine(prepare_state(*kind.first, qubits), prepare_state(*kind.second, qubits), kind.phase)
              .state;
        }
      },
      spec.kind);
}

StateSpec parse_state(std::string_view text) {
  if (text == "antiferromagnet") return {Antiferromagnet{}};
  if (text.starts_with("basis:")) return {BasisState{std::string(text.substr(6))}};
  if (text.starts_with("random:")) {
    const auto body = text.substr(7);
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), seed);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
      throw ConfigError("cannot parse random state seed from '" + std::string(body) + "'");
    }
    return {RandomState{seed}};
  }
  throw ConfigError("unknown state spec '" + std::string(text) +
                    "' (expected antiferromagnet, basis:<bits> or random:<seed>)");
}

MomentSequence::MomentSequence(std::vector<Complex> values, double dt, std::string model, double noise_sigma)
    : values_(std::move(values)), dt_(dt), model_(std::move(model)), noise_sigma_(noise_sigma) {
  if (values_.empty()) throw ConfigError("moment sequence is empty");
  if (values_[0] != Complex(1.0, 0.0)) throw ConfigError("moment sequence must start with X_0 = 1");
  for (const auto& x : values_) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw ConfigError("non-finite moment");
  }
  if (!(dt_ > 0.0)) throw ConfigError("moment sequence dt must be positive");
  if (!(noise_sigma_ >= 0.0)) throw ConfigError("noise sigma must be >= 0");
}

Complex MomentSequence::at(int j) const {
  if (std::abs(j) > degree()) {
    throw ConfigError("moment X_" + std::to_string(j) + " requested but degree is " + std::to_string(degree()));
  }
  return j >= 0 ? values_[static_cast<std::size_t>(j)] : std::conj(values_[static_cast<std::size_t>(-j)]);
}

RealVector eigen_populations(const SpectralData& spectrum, const StateVector& psi0) {
  if (psi0.size() != spectrum.dimension()) throw ConfigError("state and spectrum dimensions differ");
  const ComplexVector gamma = spectrum.eigenvectors.adjoint() * psi0.amplitudes();
  return gamma.cwiseAbs2();
}

MomentSequence moments(const SpectralData& spectrum, const StateVector& psi0, int degree) {
  if (degree < 1) throw ConfigError("moment degree must be >= 1");
  const RealVector pop = eigen_populations(spectrum, psi0);
  std::vector<Complex> values(static_cast<std::size_t>(degree) + 1);
  values[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    Complex sum = 0.0;
    for (Eigen::Index m = 0; m < pop.size(); ++m) {
      if (pop(m) == 0.0) continue;
      sum += pop(m) * std::polar(1.0, -static_cast<double>(j) * spectrum.energies(m) * spectrum.dt);
    }
    values[static_cast<std::size_t>(j)] = sum;
  }
  return MomentSequence(std::move(values), spectrum.dt, spectrum.model);
}

MomentSequence apply_noise(const MomentSequence& m, const NoiseModel& noise) {
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) throw ConfigError("noise sigma must be >= 0");
  std::vector<Complex> values = m.values();
  if (noise.sigma > 0.0) {
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, noise.sigma);
    for (std::size_t j = 1; j < values.size(); ++j) {
      const double re = gauss(rng);
      values[j] += Complex(re, gauss(rng));
    }
  }
  const double sigma = std::hypot(m.noise_sigma(), noise.sigma);
  return MomentSequence(std::move(values), m.dt(), m.model(), sigma);
}

ComplexVector spectral_weights(const SpectralData& spectrum, const StateVector& psi0, const StateVector& psi1) {
  if (psi0.size() != spectrum.dimension() || psi1.size() != spectrum.dimension()) {
    throw ConfigError("state and spectrum dimensions differ");
  }
  const ComplexVector g0 = spectrum.eigenvectors.adjoint() * psi0.amplitudes();
  const ComplexVector g1 = spectrum.eigenvectors.adjoint() * psi1.amplitudes();
  return g1.conjugate().cwiseProduct(g0);
}

Complex exact_functional(const SpectralData& spectrum, const ComplexVector& weights, const SpectralFunction& f) {
  if (weights.size() != spectrum.dimension()) throw ConfigError("weights and spectrum dimensions differ");
  Complex sum = 0.0;
  for (Eigen::Index m = 0; m < weights.size(); ++m) {
    if (weights(m) == Complex(0.0, 0.0)) continue;
    sum += weights(m) * f(energy_to_node(spectrum.energies(m), spectrum.dt));
  }
  return sum;
}

Complex exact_functional(const SpectralData& spectrum, const StateVector& psi0, const StateVector& psi1,
                         const SpectralFunction& f) {
  return exact_functional(spectrum, spectral_weights(spectrum, psi0, psi1), f);
}

SupportCounts support_counts(const SpectralData& spectrum, const StateVector& psi0, double threshold,
                             double mass, double degeneracy_tol) {
  const RealVector pop = eigen_populations(spectrum, psi0);
  const auto n = static_cast<std::size_t>(pop.size());

  auto covering = [mass](std::vector<double> p) {
    std::sort(p.begin(), p.end(), std::greater<>());
    double acc = 0.0;
    int count = 0;
    for (double v : p) {
      if (acc >= mass) break;
      acc += v;
      ++count;
    }
    return count;
  };

  SupportCounts out;
  std::vector<double> raw(pop.data(), pop.data() + n);
  out.raw_support = static_cast<int>(std::count_if(raw.begin(), raw.end(), [&](double v) { return v > threshold; }));
  out.raw_covering = covering(raw);

  // Energies are ascending, so degenerate clusters are contiguous.
  std::vector<double> merged;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0 && spectrum.energies(static_cast<Eigen::Index>(k)) -
                         spectrum.energies(static_cast<Eigen::Index>(k - 1)) < degeneracy_tol) {
      merged.back() += raw[k];
    } else {
      merged.push_back(raw[k]);
    }
  }
  out.merged_support =
      static_cast<int>(std::count_if(merged.begin(), merged.end(), [&](double v) { return v > threshold; }));
  out.merged_covering = covering(merged);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return raw[a] > raw[b]; });
  out.min_energy = std::numeric_limits<double>::infinity();
  out.max_energy = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < out.raw_covering; ++k) {
    const double e = spectrum.energies(static_cast<Eigen::Index>(order[static_cast<std::size_t>(k)]));
    out.min_energy = std::min(out.min_energy, e);
    out.max_energy = std::max(out.max_energy, e);
  }
  return out;
}

}  // namespace qsq
