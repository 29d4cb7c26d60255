#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "qsq/errors.hpp"
#include "qsq/spectral_function.hpp"
#include "test_support.hpp"

using namespace qsq;
using std::numbers::pi;

TEST_SUITE("spectral_function") {
  TEST_CASE("point evaluations") {
    CHECK(std::abs(SpectralFunction::gibbs(1.3, 0.2)(1.0) - 1.0) < 1e-15);
    CHECK(std::abs(SpectralFunction::monomial(5)(Complex(0, 1)) - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(SpectralFunction::monomial(-1)(Complex(0, 1)) - Complex(0, -1)) < 1e-15);
    const auto one = SpectralFunction::laurent({0.0, 1.0, 0.0});
    CHECK(std::abs(one(std::polar(1.0, 2.1)) - 1.0) < 1e-15);

    // exp(-beta E) at E = 2
    const double dt = 0.3;
    CHECK(std::abs(SpectralFunction::gibbs(0.5, dt)(energy_to_node(2.0, dt)) - std::exp(-1.0)) < 1e-14);
    const auto g = SpectralFunction::greens(-1.0, 0.1, dt);
    CHECK(std::abs(g(energy_to_node(2.0, dt)) - 1.0 / Complex(3.0, -0.1)) < 1e-13);
  }

  TEST_CASE("Laurent evaluation is linear and matches the power sum") {
    const auto f = random_laurent(3, 4);
    const auto lf = f.as_laurent();
    const Complex z = std::polar(1.0, 0.9);
    Complex direct = 0.0;
    for (int j = -3; j <= 3; ++j) direct += lf.at(j) * std::pow(z, j);
    CHECK(std::abs(f(z) - direct) < 1e-14);
  }

  TEST_CASE("off-circle and pole evaluations throw") {
    CHECK_THROWS_AS(SpectralFunction::monomial(1)(Complex(1.1, 0)), ConfigError);
    const auto g = SpectralFunction::greens(0.0, 0.0, 1.0);
    CHECK_THROWS_AS(g(1.0), NumericalError);
    CHECK_THROWS_AS(SpectralFunction::greens(0.0, -0.1, 1.0), ConfigError);
    CHECK_THROWS_AS(SpectralFunction::laurent({1.0, 2.0}), ConfigError);
    CHECK_THROWS_AS(SpectralFunction::gibbs(1.0, 1.0).as_laurent(), ConfigError);
  }

  TEST_CASE("random Laurent polynomials") {
    const auto l0 = random_laurent(0, 1).as_laurent();
    REQUIRE(l0.coefficients.size() == 1);
    CHECK(std::abs(l0.at(0)) == doctest::Approx(1.0));

    CHECK(random_laurent(4, 9).as_laurent().coefficients == random_laurent(4, 9).as_laurent().coefficients);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto l5 = random_laurent(5, seed).as_laurent();
      double s = 0.0;
      for (const auto& c : l5.coefficients) s += std::abs(c);
      CHECK(std::abs(s - 1.0) < 1e-12);
      CHECK(std::max(std::abs(l5.at(5)), std::abs(l5.at(-5))) > 1e-6);
    }
  }

  TEST_CASE("energy and node conversion") {
    const double dt = 0.25;
    CHECK(node_to_energy(1.0, dt) == 0.0);
    CHECK(node_to_energy(std::polar(1.0, -2.0 * dt), dt) == doctest::Approx(2.0));
    CHECK(node_to_energy(-1.0, dt) == doctest::Approx(pi / dt));
    for (double e = -12.0; e < 12.5; e += 0.5) {
      CHECK(node_to_energy(energy_to_node(e, dt), dt) == doctest::Approx(e).epsilon(1e-12));
    }
  }

  TEST_CASE("parsing") {
    const double dt = 0.1;
    CHECK(std::abs(parse_function("monomial:5", dt)(Complex(0, 1)) - Complex(0, 1)) < 1e-15);
    const auto g = parse_function("gibbs:beta=1", dt);
    CHECK(std::holds_alternative<Gibbs>(g.variant()));
    CHECK(std::get<Gibbs>(g.variant()).dt == dt);
    const auto gr = parse_function("greens:omega=-3.2,chi=0.2", dt);
    CHECK(std::get<Greens>(gr.variant()).omega == -3.2);
    CHECK(std::get<Greens>(gr.variant()).chi == 0.2);
    CHECK(std::get<Greens>(parse_function("greens:omega=1", dt).variant()).chi == 0.1);

    CHECK_THROWS_AS(parse_function("sine:1", dt), ConfigError);
    CHECK_THROWS_AS(parse_function("gibbs:beta=1,gamma=2", dt), ConfigError);
    CHECK_THROWS_AS(parse_function("gibbs:", dt), ConfigError);
    CHECK_THROWS_AS(parse_function("monomial", dt), ConfigError);

    const auto dir = test::scratch_dir("laurent_file");
    const auto path = (dir / "f.json").string();
    std::ofstream(path) << R"({"coefficients":[{"re":0.5,"im":0},{"re":1,"im":0},{"re":0,"im":2}]})";
    const auto lf = parse_function("laurent:" + path, dt).as_laurent();
    CHECK(lf.degree() == 1);
    CHECK(lf.at(1) == Complex(0, 2));
    CHECK_THROWS_AS(parse_function("laurent:" + (dir / "missing.json").string(), dt), ConfigError);
  }
}
