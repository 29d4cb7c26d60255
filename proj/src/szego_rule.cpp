#include "qsq/szego_rule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qsq/errors.hpp"

namespace qsq {
namespace {

double canonical_phase(Complex z) {
  const double phase = std::arg(z);
  return phase >= std::numbers::pi ? -std::numbers::pi : phase;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, int p) {
  ComplexMatrix base = p < 0 ? ComplexMatrix(m.adjoint()) : m;
  ComplexMatrix result = ComplexMatrix::Identity(m.rows(), m.cols());
  for (unsigned e = static_cast<unsigned>(std::abs(p)); e != 0; e >>= 1) {
    if (e & 1u) result = result * base;
    if (e > 1) base = base * base;
  }
  return result;
}

}  // namespace

RulePipeline run_pipeline(const MomentSequence& m, int d, std::optional<double> eta) {
  RulePipeline p;
  p.pair = assemble(m, d);
  p.gram = regularize(p.pair.gram, eta.value_or(default_eta(d, m.noise_sigma())));
  p.orthonormal = orthonormalize(p.pair.shift, p.gram);
  p.unitary = project_to_unitary(p.orthonormal);
  return p;
}

SzegoRule rule_from_pipeline(const RulePipeline& p, double dt, const RuleOptions& options) {
  const UnitaryEigensystem eig = unitary_eigendecompose(p.unitary.transpose());
  const ComplexMatrix sqrt_gram = psd_power(p.gram.matrix, PsdExponent::kSqrt, p.gram.eta);
  const ComplexVector s0 = sqrt_gram.row(0).transpose();

  const auto d = static_cast<std::size_t>(eig.eigenvalues.size());
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return canonical_phase(eig.eigenvalues(static_cast<Eigen::Index>(a))) <
           canonical_phase(eig.eigenvalues(static_cast<Eigen::Index>(b)));
  });

  SzegoRule rule;
  rule.dt = dt;
  rule.diagnostics.eta = p.gram.eta;
  rule.diagnostics.shift = p.gram.shift;
  for (std::size_t k : order) {
    const auto col = static_cast<Eigen::Index>(k);
    rule.nodes.push_back(eig.eigenvalues(col));
    rule.weights.push_back(std::norm(s0.dot(eig.eigenvectors.col(col))));
  }
  rule.diagnostics.raw_weight_sum = std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0);

  if (options.renormalize) {
    const double sum = rule.diagnostics.raw_weight_sum;
    if (!(sum > 0.0)) throw NumericalError("cannot renormalize a rule with zero total weight");
    for (double& w : rule.weights) w /= sum;
  }
  if (options.merge_degenerate) rule = merge_degenerate(rule);
  return rule;
}

SzegoRule build_rule(const MomentSequence& m, int d, const RuleOptions& options) {
  return rule_from_pipeline(run_pipeline(m, d, options.eta), m.dt(), options);
}

Complex apply_rule(const SzegoRule& rule, const SpectralFunction& f) {
  Complex sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) sum += rule.weights[k] * f(rule.nodes[k]);
  return sum;
}

SzegoRule merge_degenerate(const SzegoRule& rule, double gap) {
  SzegoRule out;
  out.dt = rule.dt;
  out.diagnostics = rule.diagnostics;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    if (!out.nodes.empty() && std::abs(rule.nodes[k] - out.nodes.back()) < gap) {
      out.weights.back() += rule.weights[k];
    } else {
      out.nodes.push_back(rule.nodes[k]);
      out.weights.push_back(rule.weights[k]);
    }
  }
  // Phase order puts -pi and just below +pi at opposite ends.
  if (out.nodes.size() > 1 && std::abs(out.nodes.front() - out.nodes.back()) < gap) {
    out.weights.front() += out.weights.back();
    out.nodes.pop_back();
    out.weights.pop_back();
  }
  return out;
}

Complex matrix_function_element(const ComplexMatrix& unitary, const RegularizedGram& gram,
                                const SpectralFunction& f) {
  require_square(unitary, "unitary matrix");
  if (unitary.rows() != gram.matrix.rows()) throw ConfigError("unitary and Gram matrices differ in size");
  const ComplexMatrix t = unitary.transpose();
  const ComplexVector s0 = psd_power(gram.matrix, PsdExponent::kSqrt, gram.eta).row(0).transpose();

  ComplexMatrix fm;
  if (f.is_laurent_polynomial()) {
    const Laurent l = f.as_laurent();
    fm = ComplexMatrix::Zero(t.rows(), t.cols());
    for (int j = -l.degree(); j <= l.degree(); ++j) {
      if (l.at(j) != Complex(0.0, 0.0)) fm += l.at(j) * matrix_power(t, j);
    }
  } else {
    const UnitaryEigensystem eig = unitary_eigendecompose(t);
    ComplexVector fl(eig.eigenvalues.size());
    for (Eigen::Index k = 0; k < fl.size(); ++k) fl(k) = f(eig.eigenvalues(k));
    fm = eig.eigenvectors * fl.asDiagonal() * eig.eigenvectors.adjoint();
  }
  return s0.dot(fm * s0);
}

Complex general_matrix_element(const std::array<std::optional<SzegoRule>, 4>& rules,
                               const std::array<double, 4>& norms, const SpectralFunction& f) {
  std::array<Complex, 4> v{};
  for (std::size_t k = 0; k < 4; ++k) {
    if (!(norms[k] >= 0.0)) throw ConfigError("combination norms must be >= 0");
    if (norms[k] == 0.0) continue;
    if (!rules[k]) throw ConfigError("missing rule for a combination with nonzero norm");
    // Rules are for unit vectors; the combinations enter scaled by 1/sqrt(2).
    v[k] = 0.5 * norms[k] * norms[k] * apply_rule(*rules[k], f);
  }
  return (v[0] - v[1] + Complex(0.0, 1.0) * (v[2] - v[3])) / 2.0;
}

}  // namespace qsq
