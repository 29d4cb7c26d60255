#include "qsq/spectral_function.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "qsq/errors.hpp"

namespace qsq {
namespace {

Complex int_power(Complex z, int p) {
  if (p < 0) {
    z = std::conj(z);
    p = -p;
  }
  Complex result(1.0, 0.0);
  Complex base = z;
  for (unsigned e = static_cast<unsigned>(p); e != 0; e >>= 1) {
    if (e & 1u) result *= base;
    base *= base;
  }
  return result;
}

void require_unit(Complex z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-8) {
    throw ConfigError("spectral function evaluated off the unit circle (|z| = " +
                      std::to_string(std::abs(z)) + ")");
  }
}

void require_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive and finite");
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

std::map<std::string, double> parse_params(std::string_view body) {
  std::map<std::string, double> out;
  while (!body.empty()) {
    const auto comma = body.find(',');
    const auto item = body.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected key=value in function parameters, got '" + std::string(item) + "'");
    }
    const std::string key(item.substr(0, eq));
    out[key] = parse_number(item.substr(eq + 1), key);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

double take(std::map<std::string, double>& params, const std::string& key, std::optional<double> fallback) {
  auto it = params.find(key);
  if (it == params.end()) {
    if (!fallback) throw ConfigError("missing function parameter '" + key + "'");
    return *fallback;
  }
  const double v = it->second;
  params.erase(it);
  return v;
}

}  // namespace

SpectralFunction SpectralFunction::laurent(std::vector<Complex> coefficients) {
  if (coefficients.size() % 2 != 1) {
    throw ConfigError("Laurent coefficient vector must have odd length 2*degree+1");
  }
  for (const auto& c : coefficients) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw ConfigError("Laurent coefficients must be finite");
    }
  }
  return SpectralFunction(Laurent{std::move(coefficients)});
}

SpectralFunction SpectralFunction::monomial(int power) { return SpectralFunction(Monomial{power}); }

SpectralFunction SpectralFunction::gibbs(double beta, double dt) {
  require_dt(dt);
  if (!std::isfinite(beta)) throw ConfigError("Gibbs beta must be finite");
  return SpectralFunction(Gibbs{beta, dt});
}

SpectralFunction SpectralFunction::greens(double omega, double chi, double dt) {
  require_dt(dt);
  if (!std::isfinite(omega)) throw ConfigError("Green's function omega must be finite");
  if (!(chi >= 0.0) || !std::isfinite(chi)) throw ConfigError("Green's function chi must be >= 0");
  return SpectralFunction(Greens{omega, chi, dt});
}

Complex SpectralFunction::operator()(Complex z) const {
  require_unit(z);
  return std::visit(
      [z](const auto& f) -> Complex {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Laurent>) {
          const int deg = f.degree();
          Complex sum = f.at(0);
          Complex up(1.0, 0.0);
          Complex down(1.0, 0.0);
          const Complex zc = std::conj(z);
          for (int j = 1; j <= deg; ++j) {
            up *= z;
            down *= zc;
            sum += f.at(j) * up + f.at(-j) * down;
          }
          return sum;
        } else if constexpr (std::is_same_v<T, Monomial>) {
          return int_power(z, f.power);
        } else if constexpr (std::is_same_v<T, Gibbs>) {
          return std::exp(-f.beta * node_to_energy(z, f.dt));
        } else {
          const double e = node_to_energy(z, f.dt);
          if (f.chi == 0.0 && e == f.omega) {
            throw NumericalError("Green's function evaluated on its pole (chi = 0, E = omega)");
          }
          return 1.0 / Complex(e - f.omega, -f.chi);
        }
      },
      value_);
}

bool SpectralFunction::is_laurent_polynomial() const {
  return std::holds_alternative<Laurent>(value_) || std::holds_alternative<Monomial>(value_);
}

Laurent SpectralFunction::as_laurent() const {
  if (const auto* l = std::get_if<Laurent>(&value_)) return *l;
  if (const auto* m = std::get_if<Monomial>(&value_)) {
    const int deg = std::abs(m->power);
    Laurent out{std::vector<Complex>(static_cast<std::size_t>(2 * deg + 1))};
    out.coefficients[static_cast<std::size_t>(m->power + deg)] = 1.0;
    return out;
  }
  throw ConfigError("function " + describe() + " is not a Laurent polynomial");
}

std::string SpectralFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&os](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Laurent>) {
          os << "laurent:degree=" << f.degree();
        } else if constexpr (std::is_same_v<T, Monomial>) {
          os << "monomial:" << f.power;
        } else if constexpr (std::is_same_v<T, Gibbs>) {
          os << "gibbs:beta=" << f.beta;
        } else {
          os << "greens:omega=" << f.omega << ",chi=" << f.chi;
        }
      },
      value_);
  return os.str();
}

double node_to_energy(Complex z, double dt) {
  double phase = std::arg(z);  // (-pi, pi]
  if (phase >= std::numbers::pi) phase = -std::numbers::pi;
  return -phase / dt;
}

Complex energy_to_node(double energy, double dt) { return std::polar(1.0, -energy * dt); }

SpectralFunction random_laurent(int degree, std::uint64_t seed) {
  if (degree < 0) throw ConfigError("random_laurent: degree must be >= 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto n = static_cast<std::size_t>(2 * degree + 1);
  std::vector<Complex> coeffs(n);
  for (auto& c : coeffs) {
    const double re = gauss(rng);
    c = Complex(re, gauss(rng));
  }
  auto l1 = [&coeffs] {
    double s = 0.0;
    for (const auto& c : coeffs) s += std::abs(c);
    return s;
  };
  // Exact degree: resample the boundary pair until one of them is non-negligible
  // after normalization.
  while (degree > 0 && std::max(std::abs(coeffs.front()), std::abs(coeffs.back())) <= 1e-6 * l1()) {
    for (auto* c : {&coeffs.front(), &coeffs.back()}) {
      const double re = gauss(rng);
      *c = Complex(re, gauss(rng));
    }
  }
  const double s = l1();
  for (auto& c : coeffs) c /= s;
  return SpectralFunction::laurent(std::move(coeffs));
}

SpectralFunction parse_function(std::string_view spec, double dt) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("function spec '" + std::string(spec) + "' must look like kind:params");
  }
  const std::string kind(spec.substr(0, colon));
  const auto body = spec.substr(colon + 1);

  if (kind == "monomial") {
    return SpectralFunction::monomial(static_cast<int>(parse_number(body, "monomial power")));
  }
  if (kind == "laurent") {
    std::ifstream in{std::string(body)};
    if (!in) throw ConfigError("cannot open Laurent coefficient file '" + std::string(body) + "'");
    nlohmann::json j;
    try {
      in >> j;
      std::vector<Complex> coeffs;
      for (const auto& c : j.at("coefficients")) {
        coeffs.emplace_back(c.at("re").get<double>(), c.at("im").get<double>());
      }
      return SpectralFunction::laurent(std::move(coeffs));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("malformed Laurent coefficient file: " + std::string(e.what()));
    }
  }
  auto params = parse_params(body);
  SpectralFunction out = [&] {
    if (kind == "gibbs") return SpectralFunction::gibbs(take(params, "beta", std::nullopt), dt);
    if (kind == "greens") {
      const double omega = take(params, "omega", std::nullopt);
      return SpectralFunction::greens(omega, take(params, "chi", 0.1), dt);
    }
    throw ConfigError("unknown function kind '" + kind + "'");
  }();
  if (!params.empty()) throw ConfigError("unknown parameter '" + params.begin()->first + "' for " + kind);
  return out;
}

}  // namespace qsq
