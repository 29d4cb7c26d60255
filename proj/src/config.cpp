#include "qsq/config.hpp"

#include <charconv>
#include <cmath>

#include "qsq/errors.hpp"
#include "qsq/io.hpp"
#include "qsq/moments.hpp"

namespace qsq {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_scalar(std::string_view key, std::string_view text) {
  text = trim(text);
  T v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError("invalid value '" + std::string(text) + "' for '" + std::string(key) + "'");
  }
  return v;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view key, std::string_view text) {
  std::vector<int> out;
  for (auto item : split_list(text)) {
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(parse_scalar<int>(key, item));
      continue;
    }
    const int lo = parse_scalar<int>(key, item.substr(0, dots));
    const int hi = parse_scalar<int>(key, item.substr(dots + 2));
    if (hi < lo) throw ConfigError("empty range '" + std::string(item) + "' for '" + std::string(key) + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

std::vector<double> parse_double_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_scalar<double>(key, item));
  return out;
}

}  // namespace

void set_config_value(ExperimentConfig& c, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "rows") c.shape.rows = parse_scalar<int>(key, value);
  else if (key == "cols") c.shape.cols = parse_scalar<int>(key, value);
  else if (key == "h") c.couplings.h = parse_scalar<double>(key, value);
  else if (key == "j1") c.couplings.j1 = parse_scalar<double>(key, value);
  else if (key == "j2") c.couplings.j2 = parse_scalar<double>(key, value);
  else if (key == "j3") c.couplings.j3 = parse_scalar<double>(key, value);
  else if (key == "dt") c.dt = parse_scalar<double>(key, value);
  else if (key == "max_qubits") c.max_qubits = parse_scalar<int>(key, value);
  else if (key == "state") c.state = std::string(value);
  else if (key == "dims") c.dims = parse_int_list(key, value);
  else if (key == "degrees") c.degrees = parse_int_list(key, value);
  else if (key == "trials") c.trials = parse_scalar<int>(key, value);
  else if (key == "seed") c.seed = parse_scalar<std::uint64_t>(key, value);
  else if (key == "eta") c.eta = parse_scalar<double>(key, value);
  else if (key == "sigmas") c.sigmas = parse_double_list(key, value);
  else if (key == "betas") c.betas = parse_double_list(key, value);
  else if (key == "power") c.power = parse_scalar<int>(key, value);
  else if (key == "chi") c.chi = parse_scalar<double>(key, value);
  else if (key == "omega_min") c.omega_min = parse_scalar<double>(key, value);
  else if (key == "omega_max") c.omega_max = parse_scalar<double>(key, value);
  else if (key == "omega_points") c.omega_points = parse_scalar<int>(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(c, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  require(c.shape.rows >= 1 && c.shape.cols >= 1, "rows and cols must be >= 1");
  require(c.max_qubits >= 1 && c.max_qubits <= 20, "max_qubits must lie in 1..20");
  require(c.shape.sites() <= c.max_qubits, "lattice has " + std::to_string(c.shape.sites()) +
                                               " sites, above max_qubits = " + std::to_string(c.max_qubits));
  for (double v : {c.couplings.h, c.couplings.j1, c.couplings.j2, c.couplings.j3}) {
    require(std::isfinite(v), "couplings must be finite");
  }
  require(!c.dt || (*c.dt > 0.0 && std::isfinite(*c.dt)), "dt must be positive");
  prepare_state(parse_state(c.state), c.shape.sites());
  for (int d : c.dims) require(d >= 1, "dims must be >= 1");
  for (int g : c.degrees) require(g >= 0, "degrees must be >= 0");
  require(c.trials >= 1, "trials must be >= 1");
  require(!c.eta || (*c.eta > 0.0 && std::isfinite(*c.eta)), "eta must be positive");
  for (double s : c.sigmas) require(s >= 0.0 && std::isfinite(s), "sigmas must be >= 0");
  for (double b : c.betas) require(b >= 0.0 && std::isfinite(b), "betas must be >= 0");
  require(c.chi >= 0.0 && std::isfinite(c.chi), "chi must be >= 0");
  require(c.omega_points >= 2, "omega_points must be >= 2");
  if (c.omega_min && c.omega_max) require(*c.omega_min < *c.omega_max, "omega_min must be below omega_max");
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j{
      {"rows", c.shape.rows},   {"cols", c.shape.cols},         {"h", c.couplings.h},
      {"j1", c.couplings.j1},   {"j2", c.couplings.j2},         {"j3", c.couplings.j3},
      {"max_qubits", c.max_qubits}, {"state", c.state},         {"dims", c.dims},
      {"degrees", c.degrees},   {"trials", c.trials},           {"seed", c.seed},
      {"sigmas", c.sigmas},     {"betas", c.betas},             {"power", c.power},
      {"chi", c.chi},           {"omega_points", c.omega_points}};
  j["dt"] = c.dt ? nlohmann::json(*c.dt) : nlohmann::json(nullptr);
  j["eta"] = c.eta ? nlohmann::json(*c.eta) : nlohmann::json(nullptr);
  j["omega_min"] = c.omega_min ? nlohmann::json(*c.omega_min) : nlohmann::json(nullptr);
  j["omega_max"] = c.omega_max ? nlohmann::json(*c.omega_max) : nlohmann::json(nullptr);
  return j;
}

}  // namespace qsq
