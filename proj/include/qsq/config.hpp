#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsq/pauli_model.hpp"

namespace qsq {

/**
 * @brief Everything an experiment needs, parsed from `key = value` lines.
 *
 * Empty lists mean "use the experiment's default". Recognized keys:
 * rows, cols, h, j1, j2, j3, dt, max_qubits, state, dims, degrees, trials,
 * seed, eta, sigmas, betas, power, chi, omega_min, omega_max, omega_points.
 * Integer lists accept ranges such as `1..12`.
 */
struct ExperimentConfig {
  LatticeShape shape{2, 3};
  HeisenbergCouplings couplings;
  std::optional<double> dt;
  int max_qubits = kDefaultMaxQubits;

  std::string state = "antiferromagnet";
  std::vector<int> dims;
  std::vector<int> degrees;
  int trials = 10;
  std::uint64_t seed = 0;

  std::optional<double> eta;
  std::vector<double> sigmas;
  std::vector<double> betas;
  int power = 5;
  double chi = 0.1;
  std::optional<double> omega_min;
  std::optional<double> omega_max;
  int omega_points = 2001;
};

/// Applies one key=value pair. Throws ConfigError for unknown keys and bad values.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

/// Parses `key = value` lines; `#` starts a comment. The result is validated.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Checks ranges and cross-field consistency; throws ConfigError.
void validate(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace qsq
