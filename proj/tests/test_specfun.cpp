#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "hfbm/errors.hpp"
#include "hfbm/specfun.hpp"
#include "oracles.hpp"

using namespace hfbm;

using specfun::lower_incomplete_gamma;
using specfun::tricomi_psi;
using specfun::upper_incomplete_gamma;

TEST_CASE("gamma at known points") {
  CHECK(specfun::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(specfun::gamma(4.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(specfun::gamma(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("gamma recurrence") {
  for (double x = 0.1; x <= 50.0; x += 0.37) {
    const double lhs = specfun::gamma(x + 1.0);
    const double rhs = x * specfun::gamma(x);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
  }
}

TEST_CASE("gamma errors") {
  CHECK_THROWS_AS(specfun::gamma(0.0), DomainError);
  CHECK_THROWS_AS(specfun::gamma(-1.5), DomainError);
  CHECK_THROWS_AS(specfun::gamma(171.0), OverflowError);
  CHECK_NOTHROW(specfun::gamma(170.0));
}

TEST_CASE("lower incomplete gamma closed cases") {
  for (double x : {0.0, 0.1, 1.0, 3.0, 12.0, 40.0}) {
    CHECK(lower_incomplete_gamma(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-14));
  }
  CHECK(lower_incomplete_gamma(0.3, 0.0) == 0.0);
  CHECK(lower_incomplete_gamma(2.5, INFINITY) == doctest::Approx(specfun::gamma(2.5)).epsilon(1e-15));
}

TEST_CASE("lower incomplete gamma against brute-force quadrature") {
  // γ(1/2, 1) = 2 ∫_0^1 e^{-u²} du after z = u².
  const double ref = 2.0 * oracle::simpson([](double u) { return std::exp(-u * u); }, 0.0, 1.0);
  CHECK(std::abs(lower_incomplete_gamma(0.5, 1.0) - ref) <= 1e-10);
}

TEST_CASE("incomplete gamma against Boost") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.01, 20.0), ux(0.0, 60.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = ua(rng), x = ux(rng);
    const double p = boost::math::tgamma_lower(a, x);
    const double q = boost::math::tgamma(a, x);
    CHECK(std::abs(lower_incomplete_gamma(a, x) - p) <= 1e-12 * std::abs(p) + 1e-300);
    CHECK(std::abs(upper_incomplete_gamma(a, x) - q) <= 1e-12 * std::abs(q) + 1e-300);
  }
}

TEST_CASE("incomplete gamma: the two parts add to gamma") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(1e-3, 3.0), ux(0.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = ua(rng), x = ux(rng);
    const double g = specfun::gamma(a);
    CHECK(std::abs(lower_incomplete_gamma(a, x) + upper_incomplete_gamma(a, x) - g) <= 1e-13 * g);
  }
}

TEST_CASE("lower incomplete gamma is monotone in x") {
  for (double a : {0.2, 1.0, 2.7}) {
    double prev = 0.0;
    for (double x = 0.05; x < 30.0; x += 0.05) {
      const double v = lower_incomplete_gamma(a, x);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("incomplete gamma errors") {
  CHECK_THROWS_AS(lower_incomplete_gamma(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(lower_incomplete_gamma(1.0, -0.1), DomainError);
  CHECK_THROWS_AS(upper_incomplete_gamma(-1.0, 1.0), DomainError);
}

TEST_CASE("tricomi psi reduces to a power when b = a + 1") {
  CHECK(tricomi_psi(0.25, 1.25, 2.0) == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-11));
  CHECK(tricomi_psi(0.7, 1.7, 0.3) == doctest::Approx(std::pow(0.3, -0.7)).epsilon(1e-11));
}

TEST_CASE("tricomi psi against brute-force quadrature") {
  // Ψ(1/4, 1/2; 1) = (4/Γ(1/4)) ∫_0^∞ e^{-v^4} (1+v^4)^{-3/4} dv after s = v^4.
  auto f = [](double v) {
    const double s = v * v * v * v;
    return std::exp(-s) * std::pow(1.0 + s, -0.75);
  };
  const double ref = 4.0 / std::tgamma(0.25) * oracle::simpson(f, 0.0, 6.0);
  CHECK(std::abs(tricomi_psi(0.25, 0.5, 1.0) - ref) <= 1e-9);
}

TEST_CASE("tricomi psi large argument") {
  const double v = tricomi_psi(0.25, 0.5, 50.0);
  CHECK(std::abs(v / std::pow(50.0, -0.25) - 1.0) <= 0.02);
}

TEST_CASE("tricomi psi is positive and decreasing in z") {
  for (double a : {0.05, 0.25, 0.45}) {
    const double b = 1.0 - 2.0 * a;
    double prev = INFINITY;
    for (double z = 0.01; z < 20.0; z *= 1.3) {
      const double v = tricomi_psi(a, b, z);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("tricomi psi errors") {
  CHECK_THROWS_AS(tricomi_psi(0.0, 0.5, 1.0), DomainError);
  CHECK_THROWS_AS(tricomi_psi(0.25, 0.5, 0.0), DomainError);
  QuadratureConfig tight;
  tight.max_subdivisions = 1;
  tight.abs_tol = 1e-300;
  tight.rel_tol = 1e-300;
  CHECK_THROWS_AS(tricomi_psi(0.25, 0.5, 1.0, tight), NonConvergenceError);
}

TEST_CASE("quadrature config validation") {
  QuadratureConfig c;
  CHECK_NOTHROW(c.validate());
  c.abs_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = {};
  c.max_subdivisions = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
}
