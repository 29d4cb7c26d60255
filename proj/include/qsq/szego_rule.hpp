#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qsq/krylov.hpp"
#include "qsq/moments.hpp"
#include "qsq/spectral_function.hpp"

namespace qsq {

struct RuleDiagnostics {
  double raw_weight_sum = 0.0;
  double eta = 0.0;
  double shift = 0.0;
};

/// Quadrature rule f -> sum_k weights[k] f(nodes[k]) on the unit circle.
struct SzegoRule {
  std::vector<Complex> nodes;  // ascending phase in [-pi, pi)
  std::vector<double> weights;
  double dt = 0.0;
  RuleDiagnostics diagnostics;

  int size() const { return static_cast<int>(nodes.size()); }
};

struct RuleOptions {
  std::optional<double> eta;  // default_eta(d, noise sigma of the moments) when unset
  bool renormalize = false;
  bool merge_degenerate = false;
};

/// Intermediate matrices of the stable pipeline, kept for tests and diagnostics.
struct RulePipeline {
  KrylovPair pair;
  RegularizedGram gram;
  ComplexMatrix orthonormal;  // S~^{-1/2} U' S~^{-1/2}
  ComplexMatrix unitary;      // nearest unitary to `orthonormal`
};

RulePipeline run_pipeline(const MomentSequence& m, int d, std::optional<double> eta = std::nullopt);

/**
 * @brief Nodes are the eigenvalues of U~^T; weights are |<s0, v_k>|^2 with
 * s0 the zeroth row of S~^{1/2} and v_k the unit eigenvectors of U~^T.
 */
SzegoRule rule_from_pipeline(const RulePipeline& p, double dt, const RuleOptions& options = {});

SzegoRule build_rule(const MomentSequence& m, int d, const RuleOptions& options = {});

Complex apply_rule(const SzegoRule& rule, const SpectralFunction& f);

/// Sums the weights of nodes closer than `gap` onto the first node of each cluster.
SzegoRule merge_degenerate(const SzegoRule& rule, double gap = 1e-8);

/// s0^dagger f(U~^T) s0 computed from the matrix itself rather than from nodes and weights.
Complex matrix_function_element(const ComplexMatrix& unitary, const RegularizedGram& gram,
                                const SpectralFunction& f);

/**
 * @brief <psi1|f(U)|psi0> from rules for the combinations psi0 + p psi1,
 * p in (+1, -1, +i, -i), in that order.
 *
 * norms[k] = ||psi0 + p psi1||. A combination with zero norm contributes
 * nothing and needs no rule; a missing rule with nonzero norm throws ConfigError.
 */
Complex general_matrix_element(const std::array<std::optional<SzegoRule>, 4>& rules,
                               const std::array<double, 4>& norms, const SpectralFunction& f);

}  // namespace qsq
