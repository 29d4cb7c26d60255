#include "qsq/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsq/errors.hpp"

namespace qsq {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const json& j) {
  if (!j.is_object() || !j.contains("re") || !j.contains("im") || !j["re"].is_number() || !j["im"].is_number()) {
    throw ConfigError("expected {\"re\": number, \"im\": number}, got " + j.dump());
  }
  return {j["re"].get<double>(), j["im"].get<double>()};
}

json to_json(const MomentSequence& m) {
  json values = json::array();
  for (const auto& x : m.values()) values.push_back(complex_to_json(x));
  return json{{"d", m.degree()}, {"dt", m.dt()}, {"model", m.model()}, {"noise_sigma", m.noise_sigma()},
              {"moments", values}};
}

MomentSequence moments_from_json(const json& j) {
  try {
    std::vector<Complex> values;
    for (const auto& x : j.at("moments")) values.push_back(complex_from_json(x));
    if (j.contains("d") && j.at("d").get<int>() + 1 != static_cast<int>(values.size())) {
      throw ConfigError("moment file declares d = " + j.at("d").dump() + " but holds " +
                        std::to_string(values.size()) + " values");
    }
    return MomentSequence(std::move(values), j.at("dt").get<double>(), j.value("model", std::string{}),
                          j.value("noise_sigma", 0.0));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed moment file: ") + e.what());
  }
}

json to_json(const SzegoRule& rule) {
  json nodes = json::array();
  for (const auto& z : rule.nodes) nodes.push_back(complex_to_json(z));
  return json{{"d", rule.size()},
              {"dt", rule.dt},
              {"nodes", nodes},
              {"weights", rule.weights},
              {"diagnostics",
               {{"raw_weight_sum", rule.diagnostics.raw_weight_sum},
                {"eta", rule.diagnostics.eta},
                {"shift", rule.diagnostics.shift}}}};
}

SzegoRule rule_from_json(const json& j) {
  try {
    SzegoRule rule;
    rule.dt = j.at("dt").get<double>();
    for (const auto& z : j.at("nodes")) rule.nodes.push_back(complex_from_json(z));
    rule.weights = j.at("weights").get<std::vector<double>>();
    if (rule.nodes.size() != rule.weights.size()) throw ConfigError("rule has mismatched nodes and weights");
    const auto& diag = j.at("diagnostics");
    rule.diagnostics = {diag.at("raw_weight_sum").get<double>(), diag.at("eta").get<double>(),
                        diag.at("shift").get<double>()};
    return rule;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed rule file: ") + e.what());
  }
}

json to_json(const LaurentApproximation& approx) {
  json coeffs = json::array();
  for (const auto& c : approx.coefficients) coeffs.push_back(complex_to_json(c));
  return json{{"degree", approx.degree()}, {"method", approx.method}, {"coefficients", coeffs},
              {"error", approx.error}};
}

json to_json(const KrylovPair& pair) {
  auto matrix = [](const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  return json{{"d", pair.dim()}, {"shift", matrix(pair.shift)}, {"gram", matrix(pair.gram)}};
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

}  // namespace qsq
