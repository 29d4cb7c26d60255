#include "qsq/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qsq/baselines.hpp"
#include "qsq/errors.hpp"
#include "qsq/io.hpp"
#include "qsq/szego_rule.hpp"

namespace qsq {
namespace {

using nlohmann::json;

std::vector<int> or_default(const std::vector<int>& v, std::vector<int> fallback) {
  return v.empty() ? fallback : v;
}
std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback) {
  return v.empty() ? fallback : v;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

// Shared state of one experiment run: setup, the eta actually used and any warnings.
class Run {
 public:
  Run(std::string name, const ExperimentConfig& config)
      : name_(std::move(name)), config_(config), setup_(build_setup(config)) {}

  const ModelSetup& setup() const { return setup_; }
  const SpectralData& spectrum() const { return setup_.spectrum; }
  const StateVector& state() const { return setup_.state; }
  const ExperimentConfig& config() const { return config_; }

  SzegoRule rule(const MomentSequence& m, int d) {
    RuleOptions options;
    options.eta = config_.eta.value_or(default_eta(d, m.noise_sigma()));
    etas_.insert(*options.eta);
    SzegoRule r = build_rule(m, d, options);
    for (const Complex& z : r.nodes) {
      if (std::arg(z) > std::numbers::pi - 1e-6 || std::arg(z) < -std::numbers::pi + 1e-6) {
        warnings_.insert("dim " + std::to_string(d) + ": a node lies within 1e-6 of arg = -pi; its energy is aliased");
        break;
      }
    }
    return r;
  }

  json sidecar(json extra) const {
    json j{{"experiment", name_},
           {"config", to_json(config_)},
           {"model", setup_.hamiltonian.description()},
           {"dt", setup_.spectrum.dt},
           {"h_norm", setup_.spectrum.norm},
           {"eta_override", config_.eta ? json(*config_.eta) : json(nullptr)},
           {"eta_default_rule", "max(" + format_double(kNoiselessEta) + ", sigma)"},
           {"eta_used", std::vector<double>(etas_.begin(), etas_.end())},
           {"warnings", std::vector<std::string>(warnings_.begin(), warnings_.end())}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    return j;
  }

 private:
  std::string name_;
  ExperimentConfig config_;
  ModelSetup setup_;
  std::set<double> etas_;
  std::set<std::string> warnings_;
};

std::string cell(double v) { return format_double(v); }
std::string cell(int v) { return std::to_string(v); }

ExperimentResult laurent_exactness(Run& run) {
  const auto& c = run.config();
  const auto degrees = or_default(c.degrees, {1, 2, 4, 6});
  const auto dims = or_default(c.dims, range(1, 8));
  const MomentSequence m = moments(run.spectrum(), run.state(), *std::max_element(dims.begin(), dims.end()));

  std::vector<SzegoRule> rules;
  for (int d : dims) rules.push_back(run.rule(m, d));

  Dataset out{"laurent-exactness", {"degree", "dim", "trial", "rel_error"}, {}};
  for (int g : degrees) {
    for (int t = 0; t < c.trials; ++t) {
      const SpectralFunction f = random_laurent(g, c.seed + static_cast<std::uint64_t>(t));
      const Complex exact = exact_functional(run.spectrum(), run.state(), run.state(), f);
      for (std::size_t k = 0; k < dims.size(); ++k) {
        out.rows.push_back({cell(g), cell(dims[k]), cell(t), cell(relative_error(apply_rule(rules[k], f), exact))});
      }
    }
  }
  return {{out}, run.sidecar({{"trials", c.trials}, {"seeds", "seed + trial"}})};
}

ExperimentResult noisy_monomial(Run& run) {
  const auto& c = run.config();
  const auto sigmas = or_default(c.sigmas, {0.0, 1e-8, 1e-6, 1e-4});
  const auto dims = or_default(c.dims, range(1, 12));
  const MomentSequence exact_m =
      moments(run.spectrum(), run.state(), *std::max_element(dims.begin(), dims.end()));
  const SpectralFunction f = SpectralFunction::monomial(c.power);
  const Complex exact = exact_functional(run.spectrum(), run.state(), run.state(), f);

  Dataset out{"noisy-monomial", {"sigma", "dim", "trial", "rel_error"}, {}};
  for (double sigma : sigmas) {
    for (int t = 0; t < c.trials; ++t) {
      const MomentSequence m = apply_noise(exact_m, {sigma, c.seed + static_cast<std::uint64_t>(t)});
      for (int d : dims) {
        out.rows.push_back({cell(sigma), cell(d), cell(t), cell(relative_error(apply_rule(run.rule(m, d), f), exact))});
      }
    }
  }
  return {{out}, run.sidecar({{"trials", c.trials}, {"power", c.power}, {"seeds", "seed + trial"}})};
}

ExperimentResult gibbs_sweep(Run& run) {
  const auto& c = run.config();
  const auto betas = or_default(c.betas, {0.0, 0.5, 1.0});
  const auto dims = or_default(c.dims, range(1, 12));
  const MomentSequence m = moments(run.spectrum(), run.state(), *std::max_element(dims.begin(), dims.end()));

  Dataset out{"gibbs-sweep", {"beta", "dim", "rel_error"}, {}};
  std::vector<SzegoRule> rules;
  for (int d : dims) rules.push_back(run.rule(m, d));
  for (double beta : betas) {
    const SpectralFunction f = SpectralFunction::gibbs(beta, run.spectrum().dt);
    const Complex exact = exact_functional(run.spectrum(), run.state(), run.state(), f);
    for (std::size_t k = 0; k < dims.size(); ++k) {
      out.rows.push_back({cell(beta), cell(dims[k]), cell(relative_error(apply_rule(rules[k], f), exact))});
    }
  }
  return {{out}, run.sidecar({})};
}

ExperimentResult gibbs_compare(Run& run) {
  const auto& c = run.config();
  const auto betas = or_default(c.betas, {1.0});
  if (betas.size() != 1) throw ConfigError("gibbs-compare takes exactly one beta");
  const double beta = betas.front();
  const auto dims = or_default(c.dims, range(1, 12));
  const SpectralData& spec = run.spectrum();
  const MomentSequence m = moments(spec, run.state(), *std::max_element(dims.begin(), dims.end()));
  const SpectralFunction f = SpectralFunction::gibbs(beta, spec.dt);
  const Complex exact = exact_functional(spec, run.state(), run.state(), f);
  // ||exp(-beta H)|| over the spectrum, used to turn spectral-norm errors into relative ones.
  const double f_norm = std::exp(-beta * spec.energies(0));

  Dataset out{"gibbs-compare", {"dim", "method", "rel_error"}, {}};
  for (int d : dims) {
    const double qsq = relative_error(apply_rule(run.rule(m, d), f), exact);
    const double fourier = relative_error(estimate_from_moments(m, fourier_coefficients(beta, spec.dt, d)), exact);
    const double fixed = fixed_laurent_bound(beta, spec.norm, d - 1).relative;
    const double optimal = optimal_laurent(spec, f, d).error / f_norm;
    out.rows.push_back({cell(d), "qsq", cell(qsq)});
    out.rows.push_back({cell(d), "fourier", cell(fourier)});
    out.rows.push_back({cell(d), "fixed_bound", cell(fixed)});
    out.rows.push_back({cell(d), "optimal_laurent", cell(optimal)});
  }
  return {{out}, run.sidecar({{"beta", beta},
                              {"fixed_bound_degree", "dim - 1"},
                              {"optimal_laurent_fit", "Lawson minimax over all distinct eigenvalues"},
                              {"spectral_norm_of_f", f_norm}})};
}

struct OmegaGrid {
  double lo, hi;
  std::vector<double> points;
};

OmegaGrid omega_grid(const Run& run) {
  const auto& c = run.config();
  const double lo = c.omega_min.value_or(-run.spectrum().norm - 1.0);
  const double hi = c.omega_max.value_or(run.spectrum().norm + 1.0);
  if (!(lo < hi)) throw ConfigError("omega range is empty");
  OmegaGrid g{lo, hi, {}};
  const int n = c.omega_points;
  for (int i = 0; i < n; ++i) g.points.push_back(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
  return g;
}

std::vector<Complex> exact_greens(const Run& run, const OmegaGrid& grid) {
  const ComplexVector weights = spectral_weights(run.spectrum(), run.state(), run.state());
  std::vector<Complex> out;
  out.reserve(grid.points.size());
  for (double w : grid.points) {
    out.push_back(exact_functional(run.spectrum(), weights,
                                   SpectralFunction::greens(w, run.config().chi, run.spectrum().dt)));
  }
  return out;
}

json greens_extra(const Run& run, const OmegaGrid& grid) {
  return {{"chi", run.config().chi},
          {"omega_min", grid.lo},
          {"omega_max", grid.hi},
          {"omega_points", grid.points.size()},
          {"omega_range_default", "[-||H|| - 1, ||H|| + 1]"}};
}

ExperimentResult greens_curve(Run& run) {
  const auto& c = run.config();
  const auto dims = or_default(c.dims, {4, 8});
  const OmegaGrid grid = omega_grid(run);
  const std::vector<Complex> exact = exact_greens(run, grid);
  const MomentSequence m = moments(run.spectrum(), run.state(), *std::max_element(dims.begin(), dims.end()));

  ExperimentResult result;
  for (int d : dims) {
    const SzegoRule rule = run.rule(m, d);
    Dataset out{"greens-curve-d" + std::to_string(d), {"omega", "re_exact", "im_exact", "re_approx", "im_approx"}, {}};
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      const Complex approx =
          apply_rule(rule, SpectralFunction::greens(grid.points[i], c.chi, run.spectrum().dt));
      out.rows.push_back({cell(grid.points[i]), cell(exact[i].real()), cell(exact[i].imag()), cell(approx.real()),
                          cell(approx.imag())});
    }
    result.datasets.push_back(std::move(out));
  }
  result.sidecar = run.sidecar(greens_extra(run, grid));
  return result;
}

ExperimentResult greens_l1(Run& run) {
  const auto& c = run.config();
  const auto dims = or_default(c.dims, range(1, 12));
  const OmegaGrid grid = omega_grid(run);
  const std::vector<Complex> exact = exact_greens(run, grid);
  const MomentSequence m = moments(run.spectrum(), run.state(), *std::max_element(dims.begin(), dims.end()));

  Dataset out{"greens-l1", {"dim", "l1_error"}, {}};
  for (int d : dims) {
    const SzegoRule rule = run.rule(m, d);
    std::vector<double> err(grid.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      err[i] = std::abs(apply_rule(rule, SpectralFunction::greens(grid.points[i], c.chi, run.spectrum().dt)) -
                        exact[i]);
    }
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < err.size(); ++i) {
      l1 += 0.5 * (grid.points[i + 1] - grid.points[i]) * (err[i] + err[i + 1]);
    }
    out.rows.push_back({cell(d), cell(l1)});
  }
  return {{out}, run.sidecar(greens_extra(run, grid))};
}

}  // namespace

double relative_error(Complex approx, Complex exact) {
  const double diff = std::abs(approx - exact);
  const double scale = std::abs(exact);
  return scale == 0.0 ? diff : diff / scale;
}

ModelSetup build_setup(const ExperimentConfig& config) {
  Hamiltonian h = build_heisenberg(config.shape, config.couplings, config.max_qubits);
  SpectralData spectrum = spectral_decompose(h, config.dt, config.max_qubits);
  StateVector state = prepare_state(parse_state(config.state), h.qubit_count());
  return {std::move(h), std::move(spectrum), std::move(state)};
}

std::vector<double> Dataset::column(std::string_view col) const {
  const auto it = std::find(header.begin(), header.end(), col);
  if (it == header.end()) throw ConfigError("dataset " + name + " has no column '" + std::string(col) + "'");
  const auto k = static_cast<std::size_t>(it - header.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(std::stod(row[k]));
  return out;
}

std::string Dataset::to_csv() const {
  std::string s;
  auto line = [&s](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) s += ',';
      s += cells[k];
    }
    s += '\n';
  };
  line(header);
  for (const auto& row : rows) line(row);
  return s;
}

json Dataset::to_json() const {
  json rows_json = json::array();
  for (const auto& row : rows) {
    json obj = json::object();
    for (std::size_t k = 0; k < header.size(); ++k) {
      char* end = nullptr;
      const double v = std::strtod(row[k].c_str(), &end);
      obj[header[k]] = (end && *end == '\0' && !row[k].empty()) ? json(v) : json(row[k]);
    }
    rows_json.push_back(std::move(obj));
  }
  return json{{"name", name}, {"columns", header}, {"rows", rows_json}};
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"laurent-exactness", "noisy-monomial", "gibbs-sweep",
                                              "gibbs-compare",     "greens-curve",   "greens-l1"};
  return names;
}

ExperimentResult run_experiment(std::string_view name, const ExperimentConfig& config) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ConfigError("unknown experiment '" + std::string(name) + "'");
  }
  validate(config);
  if (name == "gibbs-compare" && config.betas.size() > 1) throw ConfigError("gibbs-compare takes exactly one beta");

  Run run{std::string(name), config};
  if (name == "laurent-exactness") return laurent_exactness(run);
  if (name == "noisy-monomial") return noisy_monomial(run);
  if (name == "gibbs-sweep") return gibbs_sweep(run);
  if (name == "gibbs-compare") return gibbs_compare(run);
  if (name == "greens-curve") return greens_curve(run);
  return greens_l1(run);
}

std::vector<std::filesystem::path> write_experiment(const ExperimentResult& result, const std::filesystem::path& dir,
                                                    OutputFormat format) {
  std::vector<std::filesystem::path> paths;
  for (const auto& ds : result.datasets) {
    const auto data = dir / (ds.name + (format == OutputFormat::kCsv ? ".csv" : ".json"));
    write_text(data, format == OutputFormat::kCsv ? ds.to_csv() : ds.to_json().dump(2) + "\n");
    json meta = result.sidecar;
    meta["dataset"] = ds.name;
    write_text(dir / (ds.name + ".meta.json"), meta.dump(2) + "\n");
    paths.push_back(data);
  }
  return paths;
}

}  // namespace qsq
