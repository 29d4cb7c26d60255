#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

#include "qsq/baselines.hpp"
#include "qsq/krylov.hpp"
#include "qsq/moments.hpp"
#include "qsq/szego_rule.hpp"

namespace qsq {

/// Shortest form that round-trips (printf %.17g).
std::string format_double(double v);

nlohmann::json complex_to_json(Complex z);
/// Throws ConfigError unless `j` is an object with numeric "re" and "im".
Complex complex_from_json(const nlohmann::json& j);

/// {"d", "dt", "moments": [{"re","im"}...], "model", "noise_sigma"}; index 0 is X_0.
nlohmann::json to_json(const MomentSequence& m);
MomentSequence moments_from_json(const nlohmann::json& j);

/// {"d", "dt", "nodes", "weights", "diagnostics": {"raw_weight_sum", "eta", "shift"}}.
nlohmann::json to_json(const SzegoRule& rule);
SzegoRule rule_from_json(const nlohmann::json& j);

/// {"degree", "method", "coefficients", "error"}.
nlohmann::json to_json(const LaurentApproximation& approx);

/// {"d", "shift": rows of {"re","im"}, "gram": rows of {"re","im"}}.
nlohmann::json to_json(const KrylovPair& pair);

std::string read_text(const std::filesystem::path& path);
/// Creates parent directories. Throws ConfigError when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qsq
