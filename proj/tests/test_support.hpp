#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>

#include "qsq/experiments.hpp"
#include "qsq/linalg.hpp"
#include "qsq/moments.hpp"
#include "qsq/pauli_model.hpp"

namespace qsq::test {

inline ComplexMatrix random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix random_hermitian(int n, std::uint64_t seed) {
  const ComplexMatrix a = random_matrix(n, seed);
  return (a + a.adjoint()) * 0.5;
}

inline ComplexMatrix random_unitary(int n, std::uint64_t seed) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, seed));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

/// The 2x3 XXZ model with the antiferromagnetic state, built once per process.
inline const ModelSetup& desk_setup() {
  static const ModelSetup s = build_setup(ExperimentConfig{});
  return s;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* env = std::getenv("QSQ_TMP");
  std::filesystem::path base = env ? env : std::filesystem::temp_directory_path() / "qsq_tests";
  auto dir = base / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace qsq::test
