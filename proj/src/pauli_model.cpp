#include "qsq/pauli_model.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <numbers>
#include <utility>

#include "qsq/errors.hpp"

namespace qsq {
namespace {

void check_qubits(int n, int max_qubits) {
  if (n > max_qubits) {
    throw ConfigError("model has " + std::to_string(n) + " qubits, above the dense limit of " +
                      std::to_string(max_qubits));
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PauliTerm single(int n, int q, Pauli p, double c) {
  PauliTerm t{c, std::vector<Pauli>(static_cast<std::size_t>(n), Pauli::I)};
  t.word[static_cast<std::size_t>(q)] = p;
  return t;
}

PauliTerm pair(int n, int a, int b, Pauli p, double c) {
  PauliTerm t = single(n, a, p, c);
  t.word[static_cast<std::size_t>(b)] = p;
  return t;
}

}  // namespace

Hamiltonian::Hamiltonian(LatticeShape shape, std::vector<PauliTerm> terms, std::string description)
    : shape_(shape), terms_(std::move(terms)), description_(std::move(description)) {
  if (shape_.rows < 1 || shape_.cols < 1) throw ConfigError("lattice rows and cols must be >= 1");
  for (const auto& t : terms_) {
    if (t.word.size() != static_cast<std::size_t>(qubit_count())) {
      throw ConfigError("Pauli word length does not match qubit count");
    }
    if (!std::isfinite(t.coefficient)) throw ConfigError("Pauli coefficient is not finite");
  }
}

Hamiltonian build_heisenberg(LatticeShape shape, const HeisenbergCouplings& k, int max_qubits) {
  if (shape.rows < 1 || shape.cols < 1) throw ConfigError("lattice rows and cols must be >= 1");
  const int n = shape.sites();
  check_qubits(n, max_qubits);
  for (double v : {k.h, k.j1, k.j2, k.j3}) {
    if (!std::isfinite(v)) throw ConfigError("Heisenberg couplings must be finite");
  }

  std::vector<PauliTerm> terms;
  terms.reserve(static_cast<std::size_t>(n + 3 * shape.edge_count()));
  for (int q = 0; q < n; ++q) terms.push_back(single(n, q, Pauli::Z, k.h));

  auto add_edge = [&](int a, int b) {
    terms.push_back(pair(n, a, b, Pauli::X, k.j1));
    terms.push_back(pair(n, a, b, Pauli::Y, k.j2));
    terms.push_back(pair(n, a, b, Pauli::Z, k.j3));
  };
  for (int r = 0; r < shape.rows; ++r) {
    for (int c = 0; c < shape.cols; ++c) {
      const int q = r * shape.cols + c;
      if (c + 1 < shape.cols) add_edge(q, q + 1);
      if (r + 1 < shape.rows) add_edge(q, q + shape.cols);
    }
  }

  std::string description = "heisenberg rows=" + std::to_string(shape.rows) +
                            " cols=" + std::to_string(shape.cols) + " h=" + format_double(k.h) +
                            " j1=" + format_double(k.j1) + " j2=" + format_double(k.j2) +
                            " j3=" + format_double(k.j3);
  return Hamiltonian(shape, std::move(terms), std::move(description));
}

ComplexMatrix materialize_dense(const Hamiltonian& hamiltonian, int max_qubits) {
  const int n = hamiltonian.qubit_count();
  check_qubits(n, max_qubits);
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));

  const Complex i_unit(0.0, 1.0);
  for (const auto& term : hamiltonian.terms()) {
    // Qubit q is bit (n-1-q) of the basis index.
    std::size_t flip = 0, y_mask = 0, z_mask = 0;
    int y_count = 0;
    for (int q = 0; q < n; ++q) {
      const std::size_t bit = std::size_t{1} << (n - 1 - q);
      switch (term.word[static_cast<std::size_t>(q)]) {
        case Pauli::I: break;
        case Pauli::X: flip |= bit; break;
        case Pauli::Y: flip |= bit; y_mask |= bit; ++y_count; break;
        case Pauli::Z: z_mask |= bit; break;
      }
    }
    // Y|0> = i|1>, Y|1> = -i|0>: each Y contributes i * (-1)^bit.
    Complex base = term.coefficient;
    for (int k = 0; k < y_count; ++k) base *= i_unit;
    const std::size_t sign_mask = z_mask | y_mask;
    for (std::size_t col = 0; col < dim; ++col) {
      const int parity = __builtin_popcountll(col & sign_mask);
      const Complex amp = (parity & 1) ? -base : base;
      out(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) += amp;
    }
  }
  return out;
}

namespace {

std::vector<std::vector<Eigen::Index>> coupled_blocks(const ComplexMatrix& m) {
  const Eigen::Index n = m.rows();
  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&parent](Eigen::Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (Eigen::Index col = 0; col < n; ++col) {
    for (Eigen::Index row = col + 1; row < n; ++row) {
      if (m(row, col) == Complex(0.0, 0.0)) continue;
      const Eigen::Index a = find(row), b = find(col);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  std::map<Eigen::Index, std::vector<Eigen::Index>> groups;
  for (Eigen::Index k = 0; k < n; ++k) groups[find(k)].push_back(k);
  std::vector<std::vector<Eigen::Index>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

}  // namespace

SpectralData spectral_decompose(const Hamiltonian& hamiltonian, std::optional<double> dt, int max_qubits) {
  const ComplexMatrix dense = materialize_dense(hamiltonian, max_qubits);
  const bool real_valued = dense.imag().isZero(0.0);
  const Eigen::Index dim = dense.rows();

  // Basis states that H never connects live in separate blocks; solving each block on its
  // own is exact and far cheaper than one dense solve.
  std::vector<double> energies;
  std::vector<std::pair<std::size_t, Eigen::Index>> origin;  // (block, column within block)
  std::vector<HermitianEigensystem> parts;
  const auto blocks = coupled_blocks(dense);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    const auto size = static_cast<Eigen::Index>(idx.size());
    ComplexMatrix sub(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      for (Eigen::Index j = 0; j < size; ++j) sub(i, j) = dense(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    parts.push_back(real_valued ? symmetric_eigendecompose(sub.real()) : hermitian_eigendecompose(sub));
    for (Eigen::Index k = 0; k < size; ++k) {
      energies.push_back(parts.back().eigenvalues(k));
      origin.emplace_back(b, k);
    }
  }
  std::vector<std::size_t> order(energies.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });

  SpectralData out;
  out.energies.resize(dim);
  out.eigenvectors = ComplexMatrix::Zero(dim, dim);
  for (std::size_t col = 0; col < order.size(); ++col) {
    const auto [b, k] = origin[order[col]];
    const auto c = static_cast<Eigen::Index>(col);
    out.energies(c) = energies[order[col]];
    const auto& idx = blocks[b];
    for (std::size_t i = 0; i < idx.size(); ++i) {
      out.eigenvectors(idx[i], c) = parts[b].eigenvectors(static_cast<Eigen::Index>(i), k);
    }
  }
  out.model = hamiltonian.description();
  out.norm = out.energies.size() == 0
                 ? 0.0
                 : std::max(std::abs(out.energies(0)), std::abs(out.energies(out.energies.size() - 1)));

  if (dt) {
    if (!(*dt > 0.0) || !std::isfinite(*dt)) throw ConfigError("dt must be positive and finite");
    if (out.norm > 0.0 && *dt > std::numbers::pi / out.norm + 1e-12) {
      throw ConfigError("dt = " + format_double(*dt) + " exceeds pi/||H|| = " +
                        format_double(std::numbers::pi / out.norm));
    }
    out.dt = *dt;
  } else {
    if (out.norm == 0.0) throw ConfigError("||H|| = 0: dt must be supplied explicitly");
    out.dt = std::numbers::pi / out.norm;
  }
  return out;
}

}  // namespace qsq
