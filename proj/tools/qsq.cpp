#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qsq/config.hpp"
#include "qsq/errors.hpp"
#include "qsq/experiments.hpp"
#include "qsq/io.hpp"
#include "qsq/szego_rule.hpp"

namespace {

using nlohmann::json;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string format;  // csv or json; empty picks the command default
  std::string state;
  std::vector<std::string> overrides;
};

qsq::ExperimentConfig resolve_config(const Globals& g) {
  qsq::ExperimentConfig c = g.config_path.empty() ? qsq::ExperimentConfig{} : qsq::load_config(g.config_path);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw qsq::ConfigError("--set expects key=value, got '" + kv + "'");
    qsq::set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) c.seed = *g.seed;
  if (!g.state.empty()) c.state = g.state;
  qsq::validate(c);
  return c;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void emit_csv(const std::vector<std::string>& header, const std::vector<std::string>& row) {
  qsq::Dataset ds{"", header, {row}};
  std::cout << ds.to_csv();
}

int run_model(const Globals& g) {
  const auto c = resolve_config(g);
  const auto setup = qsq::build_setup(c);
  const auto counts = qsq::support_counts(setup.spectrum, setup.state);
  json j{{"model", setup.hamiltonian.description()},
         {"qubits", setup.hamiltonian.qubit_count()},
         {"terms", setup.hamiltonian.terms().size()},
         {"h_norm", setup.spectrum.norm},
         {"dt", setup.spectrum.dt},
         {"state", c.state},
         {"support",
          {{"raw", counts.raw_support},
           {"raw_covering_999", counts.raw_covering},
           {"merged", counts.merged_support},
           {"merged_covering_999", counts.merged_covering},
           {"covering_energy_min", counts.min_energy},
           {"covering_energy_max", counts.max_energy}}}};
  if (g.format == "csv") {
    emit_csv({"qubits", "terms", "h_norm", "dt", "support", "covering_999"},
             {std::to_string(setup.hamiltonian.qubit_count()), std::to_string(setup.hamiltonian.terms().size()),
              qsq::format_double(setup.spectrum.norm), qsq::format_double(setup.spectrum.dt),
              std::to_string(counts.raw_support), std::to_string(counts.raw_covering)});
  } else {
    emit(j);
  }
  return 0;
}

qsq::MomentSequence noisy_moments(const qsq::ExperimentConfig& c, const qsq::ModelSetup& setup,
                                  const qsq::StateVector& state, int dim, double sigma) {
  qsq::MomentSequence m = qsq::moments(setup.spectrum, state, dim);
  if (sigma > 0.0) m = qsq::apply_noise(m, {sigma, c.seed});
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Szego quadrature rules from simulated Krylov moment data"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "key=value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "seed for random states and noise");
  app.add_option("--out", g.out_dir, "output directory for experiment files");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--state", g.state, "antiferromagnet, basis:<bits> or random:<seed>");
  app.add_option("--set", g.overrides, "override a config key (key=value), repeatable");

  auto* model = app.add_subcommand("model", "print model, norm, dt and support statistics");

  int moments_dim = 8;
  double moments_sigma = 0.0;
  auto* moments_cmd = app.add_subcommand("moments", "print the moment sequence X_0..X_d");
  moments_cmd->add_option("--dim", moments_dim, "highest moment index")->check(CLI::PositiveNumber);
  moments_cmd->add_option("--noise-sigma", moments_sigma, "Gaussian noise per real component")
      ->check(CLI::NonNegativeNumber);

  int rule_dim = 8;
  std::optional<double> rule_eta;
  double rule_sigma = 0.0;
  bool renormalize = false, merge = false;
  auto* rule_cmd = app.add_subcommand("rule", "build a quadrature rule");
  rule_cmd->add_option("--dim", rule_dim, "Krylov dimension")->check(CLI::PositiveNumber);
  rule_cmd->add_option("--eta", rule_eta, "regularization floor");
  rule_cmd->add_option("--noise-sigma", rule_sigma, "Gaussian noise per real component")
      ->check(CLI::NonNegativeNumber);
  rule_cmd->add_flag("--renormalize", renormalize, "rescale weights to sum to one");
  rule_cmd->add_flag("--merge-degenerate", merge, "merge nodes closer than 1e-8");

  int eval_dim = 8;
  std::string function_spec;
  std::string psi1_spec;
  std::optional<double> eval_eta;
  auto* eval_cmd = app.add_subcommand("evaluate", "apply a rule to a function and compare with the exact value");
  eval_cmd->add_option("--function", function_spec, "monomial:p, laurent:file.json, gibbs:beta=.., greens:omega=..,chi=..")
      ->required();
  eval_cmd->add_option("--dim", eval_dim, "Krylov dimension")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--psi1", psi1_spec, "second state for <psi1|f(U)|psi0>");
  eval_cmd->add_option("--eta", eval_eta, "regularization floor");

  std::string experiment_name;
  auto* exp_cmd = app.add_subcommand("experiment", "run a named experiment and write its datasets");
  exp_cmd->add_option("name", experiment_name, "experiment name")
      ->required()
      ->check(CLI::IsMember(qsq::experiment_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (model->parsed()) return run_model(g);

    if (moments_cmd->parsed()) {
      const auto c = resolve_config(g);
      const auto setup = qsq::build_setup(c);
      const auto m = noisy_moments(c, setup, setup.state, moments_dim, moments_sigma);
      if (g.format == "csv") {
        qsq::Dataset ds{"", {"j", "re", "im"}, {}};
        for (int j = 0; j <= m.degree(); ++j) {
          ds.rows.push_back({std::to_string(j), qsq::format_double(m.at(j).real()), qsq::format_double(m.at(j).imag())});
        }
        std::cout << ds.to_csv();
      } else {
        emit(qsq::to_json(m));
      }
      return 0;
    }

    if (rule_cmd->parsed()) {
      const auto c = resolve_config(g);
      const auto setup = qsq::build_setup(c);
      const auto m = noisy_moments(c, setup, setup.state, rule_dim, rule_sigma);
      qsq::RuleOptions options;
      options.eta = rule_eta ? rule_eta : c.eta;
      options.renormalize = renormalize;
      options.merge_degenerate = merge;
      const auto rule = qsq::build_rule(m, rule_dim, options);
      if (g.format == "csv") {
        qsq::Dataset ds{"", {"re", "im", "weight"}, {}};
        for (int k = 0; k < rule.size(); ++k) {
          ds.rows.push_back({qsq::format_double(rule.nodes[k].real()), qsq::format_double(rule.nodes[k].imag()),
                             qsq::format_double(rule.weights[k])});
        }
        std::cout << ds.to_csv();
      } else {
        emit(qsq::to_json(rule));
      }
      return 0;
    }

    if (eval_cmd->parsed()) {
      const auto c = resolve_config(g);
      const auto setup = qsq::build_setup(c);
      const auto f = qsq::parse_function(function_spec, setup.spectrum.dt);
      qsq::RuleOptions options;
      options.eta = eval_eta ? eval_eta : c.eta;
      const int n = setup.hamiltonian.qubit_count();

      qsq::Complex approx, exact;
      if (psi1_spec.empty()) {
        approx = qsq::apply_rule(qsq::build_rule(qsq::moments(setup.spectrum, setup.state, eval_dim), eval_dim, options), f);
        exact = qsq::exact_functional(setup.spectrum, setup.state, setup.state, f);
      } else {
        const auto psi1 = qsq::prepare_state(qsq::parse_state(psi1_spec), n);
        std::array<std::optional<qsq::SzegoRule>, 4> rules;
        std::array<double, 4> norms{};
        const qsq::ComboPhase phases[] = {qsq::ComboPhase::kPlus, qsq::ComboPhase::kMinus, qsq::ComboPhase::kPlusI,
                                          qsq::ComboPhase::kMinusI};
        for (std::size_t k = 0; k < 4; ++k) {
          const qsq::Complex p = qsq::phase_value(phases[k]);
          norms[k] = (setup.state.amplitudes() + p * psi1.amplitudes()).norm();
          if (norms[k] < 1e-12) {
            norms[k] = 0.0;
            continue;
          }
          const auto combo = qsq::combine(setup.state, psi1, phases[k]);
          rules[k] = qsq::build_rule(qsq::moments(setup.spectrum, combo.state, eval_dim), eval_dim, options);
        }
        approx = qsq::general_matrix_element(rules, norms, f);
        exact = qsq::exact_functional(setup.spectrum, setup.state, psi1, f);
      }
      const double rel = qsq::relative_error(approx, exact);
      if (g.format == "csv") {
        emit_csv({"re_approx", "im_approx", "re_exact", "im_exact", "rel_error"},
                 {qsq::format_double(approx.real()), qsq::format_double(approx.imag()),
                  qsq::format_double(exact.real()), qsq::format_double(exact.imag()), qsq::format_double(rel)});
      } else {
        emit(json{{"function", f.describe()},
                  {"dim", eval_dim},
                  {"approx", qsq::complex_to_json(approx)},
                  {"exact", qsq::complex_to_json(exact)},
                  {"rel_error", rel}});
      }
      return 0;
    }

    if (exp_cmd->parsed()) {
      const auto c = resolve_config(g);
      const auto result = qsq::run_experiment(experiment_name, c);
      const auto format = g.format == "json" ? qsq::OutputFormat::kJson : qsq::OutputFormat::kCsv;
      for (const auto& w : result.sidecar.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << "\n";
      for (const auto& path : qsq::write_experiment(result, g.out_dir, format)) std::cout << path.string() << "\n";
      return 0;
    }
  } catch (const qsq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qsq::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
