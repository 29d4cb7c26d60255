#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsq/linalg.hpp"

namespace qsq {

enum class Pauli : std::uint8_t { I, X, Y, Z };

struct PauliTerm {
  double coefficient = 0.0;
  std::vector<Pauli> word;  // word[q] acts on qubit q
};

struct LatticeShape {
  int rows = 1;
  int cols = 1;
  int sites() const { return rows * cols; }
  /// Nearest-neighbour pairs with open boundaries.
  int edge_count() const { return rows * (cols - 1) + cols * (rows - 1); }
};

struct HeisenbergCouplings {
  double h = 1.0;
  double j1 = 1.0;
  double j2 = 1.0;
  double j3 = 2.0;
};

/// Dense materialization is refused above this many qubits unless overridden.
inline constexpr int kDefaultMaxQubits = 14;

/// A weighted sum of Pauli strings on a rows x cols lattice.
class Hamiltonian {
 public:
  Hamiltonian(LatticeShape shape, std::vector<PauliTerm> terms, std::string description);

  int qubit_count() const { return shape_.sites(); }
  const LatticeShape& shape() const { return shape_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  /// Human-readable model fingerprint carried into moment provenance.
  const std::string& description() const { return description_; }

 private:
  LatticeShape shape_;
  std::vector<PauliTerm> terms_;
  std::string description_;
};

/**
 * @brief XXZ-type Heisenberg model on an open rows x cols grid.
 *
 * Site (r, c) is qubit r*cols + c. Terms are emitted as one h*Z per site
 * followed by j1*XX, j2*YY, j3*ZZ per edge.
 */
Hamiltonian build_heisenberg(LatticeShape shape, const HeisenbergCouplings& couplings,
                             int max_qubits = kDefaultMaxQubits);

/// 2^n x 2^n matrix; qubit 0 is the leftmost Kronecker factor.
ComplexMatrix materialize_dense(const Hamiltonian& hamiltonian, int max_qubits = kDefaultMaxQubits);

/// Full eigendecomposition of H together with the time step of U = exp(-i H dt).
struct SpectralData {
  RealVector energies;         // ascending
  ComplexMatrix eigenvectors;  // column k has energy energies(k)
  double norm = 0.0;           // max |E|
  double dt = 0.0;
  std::string model;

  Eigen::Index dimension() const { return energies.size(); }
};

/**
 * @brief Full eigendecomposition of the dense Hamiltonian.
 *
 * Basis states are grouped into blocks that H couples, and each block is
 * diagonalized on its own, so an eigenvector never spans two blocks. dt
 * defaults to pi/||H||; a supplied dt must be positive and at most pi/||H||.
 */
SpectralData spectral_decompose(const Hamiltonian& hamiltonian, std::optional<double> dt = std::nullopt,
                                int max_qubits = kDefaultMaxQubits);

}  // namespace qsq
