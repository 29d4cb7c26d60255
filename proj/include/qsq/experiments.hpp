#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qsq/config.hpp"
#include "qsq/moments.hpp"
#include "qsq/pauli_model.hpp"

namespace qsq {

/// |approx - exact| / |exact|; the absolute error when exact is 0.
double relative_error(Complex approx, Complex exact);

/// Model, spectrum and initial state resolved from a config.
struct ModelSetup {
  Hamiltonian hamiltonian;
  SpectralData spectrum;
  StateVector state;
};

ModelSetup build_setup(const ExperimentConfig& config);

/// One output table. Cells are preformatted so files are byte-stable.
struct Dataset {
  std::string name;  // file stem
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Parses a numeric column back into doubles; throws ConfigError for an unknown column.
  std::vector<double> column(std::string_view name) const;
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

struct ExperimentResult {
  std::vector<Dataset> datasets;
  nlohmann::json sidecar;  // resolved config, eta, dt, ||H|| and warnings
};

const std::vector<std::string>& experiment_names();

/// Throws ConfigError for an unknown name or an invalid config; nothing is computed before validation.
ExperimentResult run_experiment(std::string_view name, const ExperimentConfig& config);

enum class OutputFormat { kCsv, kJson };

/// Writes <stem>.csv (or <stem>.json) plus <stem>.meta.json per dataset; returns the data paths.
std::vector<std::filesystem::path> write_experiment(const ExperimentResult& result, const std::filesystem::path& dir,
                                                    OutputFormat format = OutputFormat::kCsv);

}  // namespace qsq
