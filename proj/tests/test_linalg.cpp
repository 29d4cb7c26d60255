#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "qsq/errors.hpp"
#include "qsq/linalg.hpp"
#include "test_support.hpp"

using namespace qsq;
using qsq::test::max_abs;

TEST_SUITE("linalg") {
  TEST_CASE("diagonal input gives ascending eigenvalues") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 2.0;
    m(1, 1) = 1.0;
    const auto eig = hermitian_eigendecompose(m);
    CHECK(eig.eigenvalues(0) == doctest::Approx(1.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(2.0));
  }

  TEST_CASE("Pauli X eigenpairs") {
    ComplexMatrix x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    const auto eig = hermitian_eigendecompose(x);
    CHECK(eig.eigenvalues(0) == doctest::Approx(-1.0));
    CHECK(eig.eigenvalues(1) == doctest::Approx(1.0));
    const ComplexVector v0 = eig.eigenvectors.col(0);
    const ComplexVector v1 = eig.eigenvectors.col(1);
    // up to phase: (1, -1)/sqrt2 and (1, 1)/sqrt2
    CHECK(std::abs(v0(0) + v0(1)) < 1e-12);
    CHECK(std::abs(v1(0) - v1(1)) < 1e-12);
    CHECK(std::abs(v0(0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  }

  TEST_CASE("random Hermitian reconstructs") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const ComplexMatrix h = test::random_hermitian(8, seed);
      const auto eig = hermitian_eigendecompose(h);
      const ComplexMatrix r = eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.adjoint();
      CHECK(max_abs(r - h) < 1e-10);
      CHECK(max_abs(eig.eigenvectors.adjoint() * eig.eigenvectors - ComplexMatrix::Identity(8, 8)) < 1e-12);
      for (int k = 1; k < 8; ++k) CHECK(eig.eigenvalues(k - 1) <= eig.eigenvalues(k));
    }
  }

  TEST_CASE("real symmetric path agrees with the complex path") {
    const RealMatrix a = test::random_hermitian(10, 3).real();
    const RealMatrix s = (a + a.transpose()) * 0.5;
    const auto r = symmetric_eigendecompose(s);
    const auto c = hermitian_eigendecompose(s.cast<Complex>());
    CHECK((r.eigenvalues - c.eigenvalues).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("bad input is rejected") {
    CHECK_THROWS_AS(hermitian_eigendecompose(ComplexMatrix::Zero(2, 3)), ConfigError);
    ComplexMatrix nan = ComplexMatrix::Identity(2, 2);
    nan(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(hermitian_eigendecompose(nan), ConfigError);
    CHECK_THROWS_AS(svd(nan), ConfigError);
    CHECK_THROWS_AS(psd_power(ComplexMatrix::Identity(2, 2), PsdExponent::kSqrt, 0.0), ConfigError);
  }

  TEST_CASE("psd powers") {
    CHECK(max_abs(psd_power(ComplexMatrix::Identity(3, 3), PsdExponent::kInverseSqrt, 1e-12) -
                  ComplexMatrix::Identity(3, 3)) < 1e-14);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    const ComplexMatrix r = psd_power(d, PsdExponent::kSqrt, 1e-12);
    CHECK(std::abs(r(0, 0) - 2.0) < 1e-14);
    CHECK(std::abs(r(1, 1) - 3.0) < 1e-14);
    CHECK(std::abs(r(0, 1)) < 1e-14);

    ComplexMatrix four(1, 1);
    four(0, 0) = 4.0;
    CHECK(std::abs(psd_power(four, PsdExponent::kInverseSqrt, 1e-12)(0, 0) - 0.5) < 1e-15);

    // floor clamps the negative eigenvalue
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = -1.0;
    neg(1, 1) = 4.0;
    const ComplexMatrix c = psd_power(neg, PsdExponent::kSqrt, 1.0);
    CHECK(std::abs(c(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(c(1, 1) - 2.0) < 1e-14);

    const ComplexMatrix a = test::random_matrix(6, 11);
    const ComplexMatrix pd = a * a.adjoint() + ComplexMatrix::Identity(6, 6);
    const ComplexMatrix root = psd_power(pd, PsdExponent::kSqrt, 1e-12);
    const ComplexMatrix inv = psd_power(pd, PsdExponent::kInverseSqrt, 1e-12);
    CHECK(max_abs(root * root - pd) < 1e-10);
    CHECK(max_abs(root * inv - ComplexMatrix::Identity(6, 6)) < 1e-10);
  }

  TEST_CASE("svd examples") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 0.5;
    const auto s = svd(d);
    CHECK(s.singular_values(0) == doctest::Approx(1.0));
    CHECK(s.singular_values(1) == doctest::Approx(0.5));
    CHECK(std::abs(s.left(0, 1)) < 1e-14);
    CHECK(std::abs(std::abs(s.left(0, 0)) - 1.0) < 1e-14);

    const auto u = svd(test::random_unitary(5, 2));
    CHECK((u.singular_values - RealVector::Ones(5)).cwiseAbs().maxCoeff() < 1e-10);

    const ComplexMatrix m = test::random_matrix(6, 4);
    const auto f = svd(m);
    CHECK(max_abs(f.left * f.singular_values.asDiagonal() * f.right.adjoint() - m) < 1e-10);
    for (int k = 1; k < 6; ++k) CHECK(f.singular_values(k - 1) >= f.singular_values(k));
  }

  TEST_CASE("unitary eigensystems") {
    const auto id = unitary_eigendecompose(ComplexMatrix::Identity(3, 3));
    for (int k = 0; k < 3; ++k) CHECK(std::abs(id.eigenvalues(k) - 1.0) < 1e-14);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = Complex(0, 1);
    d(1, 1) = Complex(0, -1);
    const auto de = unitary_eigendecompose(d);
    const Complex a = de.eigenvalues(0), b = de.eigenvalues(1);
    CHECK(std::abs(a * b - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(a.imag()) - 1.0) < 1e-14);

    const double theta = 0.7;
    ComplexMatrix rot(2, 2);
    rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const auto re = unitary_eigendecompose(rot);
    const double p0 = std::arg(re.eigenvalues(0)), p1 = std::arg(re.eigenvalues(1));
    CHECK(std::abs(std::abs(p0) - theta) < 1e-12);
    CHECK(std::abs(p0 + p1) < 1e-12);
  }

  TEST_CASE("random and degenerate unitaries give orthonormal eigenbases") {
    const ComplexMatrix u = test::random_unitary(7, 9);
    const auto e = unitary_eigendecompose(u);
    CHECK(max_abs(u * e.eigenvectors - e.eigenvectors * e.eigenvalues.asDiagonal()) < 1e-12);
    CHECK(max_abs(e.eigenvectors.adjoint() * e.eigenvectors - ComplexMatrix::Identity(7, 7)) < 1e-12);

    const ComplexMatrix w = test::random_unitary(4, 10);
    ComplexVector lam(4);
    lam << 1.0, 1.0, Complex(0, 1), Complex(0, 1);
    const ComplexMatrix deg = w * lam.asDiagonal() * w.adjoint();
    const auto g = unitary_eigendecompose(deg);
    CHECK(max_abs(g.eigenvectors.adjoint() * g.eigenvectors - ComplexMatrix::Identity(4, 4)) < 1e-12);
    CHECK(max_abs(deg * g.eigenvectors - g.eigenvectors * g.eigenvalues.asDiagonal()) < 1e-12);
  }

  TEST_CASE("non-unitary input throws") {
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(0, 0) = 2.0;
    CHECK_THROWS_AS(unitary_eigendecompose(m), NumericalError);
  }
}
