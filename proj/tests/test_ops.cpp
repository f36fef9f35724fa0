#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hardy_littlewood.hpp"
#include "hfbm/errors.hpp"
#include "hfbm/ops.hpp"
#include "hfbm/specfun.hpp"
#include "oracles.hpp"

using namespace hfbm;
using namespace hfbm::ops;

TEST_CASE("step function") {
  const StepFunction f({0.0, 1.0, 2.5}, {2.0, -1.0});
  CHECK(f(0.0) == 2.0);
  CHECK(f(0.99) == 2.0);
  CHECK(f(1.0) == -1.0);
  CHECK(f(2.5) == 0.0);
  CHECK(f(3.0) == 0.0);
  CHECK(f.pieces() == 2);
  CHECK_THROWS_AS(StepFunction({0.0, 1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(StepFunction({1.0, 1.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(StepFunction({-1.0, 1.0}, {1.0}), DomainError);
  const StepFunction ind = StepFunction::indicator(0.5, 2.0);
  CHECK(ind(1.0) == 1.0);
  CHECK(ind(0.4) == 0.0);
}

TEST_CASE("grid function interpolates linearly") {
  const GridFunction g(TimeGrid({0.0, 1.0, 3.0}), {0.0, 2.0, 4.0});
  CHECK(g(0.5) == doctest::Approx(1.0));
  CHECK(g(2.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(GridFunction(TimeGrid({0.0, 1.0}), {1.0}), DomainError);
}

TEST_CASE("hadamard integral of an indicator") {
  CHECK(hadamard_integral_indicator(0.25, 0.0, 2.0, 2.0) == 0.0);
  CHECK(hadamard_integral_indicator(0.25, 0.0, 2.0, 3.0) == 0.0);
  CHECK(hadamard_integral_indicator(0.25, 0.0, std::numbers::e, 1.0) ==
        doctest::Approx(1.0 / std::tgamma(1.25)).epsilon(1e-14));
  CHECK_THROWS_AS(hadamard_integral_indicator(0.25, 2.0, 1.0, 0.5), DomainError);
}

TEST_CASE("hadamard integral closed form against the defining integral") {
  // (1/Γ(β)) ∫_x^∞ (log z/x)^{β-1} 1_[a,b)(z) dz/z = (1/Γ(β)) ∫_{log(a/x)_+}^{log(b/x)} u^{β-1} du,
  // computed with u = w^{1/β}.
  for (double beta : {0.25, 0.5, 0.8}) {
    for (double x : {0.2, 0.7, 1.3}) {
      const double a = 0.5, b = 1.5;
      if (x >= b) continue;
      const double lo = std::pow(std::max(0.0, std::log(a / x)), beta);
      const double hi = std::pow(std::log(b / x), beta);
      const double ref = oracle::simpson([&](double) { return 1.0 / beta; }, lo, hi, 1000) / std::tgamma(beta);
      CHECK(std::abs(hadamard_integral_indicator(beta, a, b, x) - ref) <= 1e-6);
      SupportedFunction f{[=](double z) { return z >= a && z < b ? 1.0 : 0.0; }, b, 0.0, {a, b}, {}};
      CHECK(std::abs(hadamard_integral(beta, f, x) - ref) <= 1e-6);
    }
  }
}

TEST_CASE("hadamard derivative of an indicator") {
  CHECK(hadamard_derivative_indicator(0.25, 0.0, 2.0, 2.5) == 0.0);
  CHECK(hadamard_derivative_indicator(0.25, 0.0, std::numbers::e, 1.0) ==
        doctest::Approx(1.0 / std::tgamma(0.75)).epsilon(1e-14));
  CHECK_THROWS_AS(hadamard_derivative_indicator(0.25, 0.0, 2.0, 2.0), DomainError);
  CHECK_THROWS_AS(hadamard_derivative_indicator(0.25, 1.0, 2.0, 1.0), DomainError);
}

TEST_CASE("numeric derivative matches the closed form") {
  for (double beta : {0.25, 0.5}) {
    SupportedFunction f{[](double z) { return z < 1.0 ? 1.0 : 0.0; }, 1.0, 0.0, {}, {}};
    for (double x : {0.2, 0.5, 0.9}) {
      CHECK(std::abs(hadamard_derivative(beta, f, x) - hadamard_derivative_indicator(beta, 0.0, 1.0, x)) <= 1e-6);
    }
  }
}

TEST_CASE("round trips on an indicator") {
  std::vector<double> xs;
  for (double x = 0.05; x < 2.0; x += 0.05)
    if (std::abs(x - 1.0) >= 0.01) xs.push_back(x);
  CHECK(operator_roundtrip_check(0.5, 1.0, xs) <= 1e-6);
  const RoundtripResult small = operator_roundtrip(0.05, 1.0, xs);
  CHECK(small.derivative_of_integral <= 1e-4);
  CHECK(small.integral_of_derivative <= 1e-4);
  // Beyond the jump both sides vanish identically.
  CHECK(operator_roundtrip_check(0.5, 1.0, {1.5, 3.0}) == 0.0);
  CHECK_THROWS_AS(operator_roundtrip_check(0.5, 1.0, {1.0}), DomainError);
}

TEST_CASE("hardy-littlewood bound") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ub(0.05, 0.95);
  for (int i = 0; i < 10; ++i) {
    const double beta = ub(rng);
    CHECK(hardy_littlewood_ratio(beta, rng) <= std::pow(2.0, beta));
  }
}

TEST_CASE("M operator") {
  const StepFunction f({0.0, 1.0, 2.0}, {1.5, -0.5});
  const LogPowerTransform id = apply_M(AlphaParam(1.0), f);
  for (double x : {0.1, 0.9, 1.4, 2.5}) CHECK(id(x) == f(x));
  const AlphaParam a(0.6);
  const LogPowerTransform m = apply_M(a, StepFunction::indicator(0.0, 2.0));
  for (double x : {0.1, 0.9, 1.9}) CHECK(m(x) == doctest::Approx(kernel(a, 2.0, x)).epsilon(1e-14));
  CHECK_THROWS_AS(apply_M(AlphaParam(2.5), f), RegimeError);
}

TEST_CASE("M bar operator") {
  const LogPowerTransform mb = apply_M_bar(AlphaParam(1.5), StepFunction::indicator(0.0, std::numbers::e));
  CHECK(mb(1.0) == doctest::Approx(1.0 / std::tgamma(0.75)).epsilon(1e-14));
  const StepFunction f({0.0, 1.0}, {3.0});
  CHECK(apply_M_bar(AlphaParam(1.0), f)(0.5) == 3.0);
  CHECK_THROWS_AS(apply_M_bar(AlphaParam(2.0), f), RegimeError);
}

TEST_CASE("isometry on indicators") {
  for (double a : {0.4, 1.6}) {
    const AlphaParam al(a);
    const double ip = m_inner_product(al, StepFunction::indicator(0.0, 1.3), StepFunction::indicator(0.0, 2.1));
    CHECK(std::abs(ip - covariance_quadrature(al, 1.3, 2.1)) <= 1e-7);
  }
}

TEST_CASE("isometry on random step functions") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 5.0), c(-1.0, 1.0);
  auto random_step = [&] {
    std::vector<double> b;
    while (b.size() < 7) {
      b.push_back(u(rng));
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
    }
    std::vector<double> v(6);
    for (double& x : v) x = c(rng);
    return StepFunction(b, v);
  };
  for (double a : {0.4, 1.0, 1.6}) {
    for (int i = 0; i < 3; ++i) {
      const StepFunction f = random_step(), g = random_step();
      const AlphaParam al(a);
      CHECK(std::abs(m_inner_product(al, f, g) - step_covariance(al, f, g)) <= 1e-6);
    }
  }
}

TEST_CASE("sonine pair") {
  for (double a : {1.2, 1.5, 1.8}) {
    const double c = sonine_constant(a);
    CHECK(std::abs(sonine_product_integral(a, 1.0, std::numbers::e) - c) <= 1e-8);
    CHECK(std::abs(sonine_product_integral(a, 2.0, 7.0) - c) <= 1e-8);
    CHECK(std::abs(sonine_product_integral(a, 1e-3, 1e3) - c) <= 1e-8);
    // Γ((α-1)/2) Γ((3-α)/2) through the reflection formula
    CHECK(c == doctest::Approx(std::tgamma(0.5 * (a - 1.0)) * std::tgamma(0.5 * (3.0 - a))).epsilon(1e-12));
    CHECK(sonine_cosine_form(a) == doctest::Approx(-c).epsilon(1e-12));
  }
  CHECK(sonine_constant(1.5) == doctest::Approx(std::numbers::pi * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sonine_product_integral(1.1, 1.0, 2.0) > sonine_product_integral(1.5, 1.0, 2.0));
  CHECK_THROWS_AS(sonine_product_integral(0.8, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(sonine_product_integral(1.5, 2.0, 1.0), DomainError);
}

TEST_CASE("wiener kernel is the mixed derivative of the covariance") {
  const double a = 1.5, r = 1.0, n = 2.0, h = 1e-3;
  const AlphaParam al(a);
  auto s = [&](double x, double y) { return covariance_quadrature(al, x, y); };
  const double fd = (s(r + h, n + h) - s(r + h, n - h) - s(r - h, n + h) + s(r - h, n - h)) / (4 * h * h);
  const double k = (a - 1) * (a - 1) / (4 * specfun::gamma(a)) * wiener_kernel(a, r, n);
  CHECK(std::abs(fd - k) <= 1e-5 * std::abs(k));
  CHECK(wiener_kernel(a, r, n) == doctest::Approx(wiener_kernel(a, n, r)).epsilon(1e-14));
  CHECK_THROWS_AS(wiener_kernel(a, 1.0, 1.0), DomainError);
}

TEST_CASE("rkhs forward transform") {
  const TimeGrid g = TimeGrid::uniform(2.0, 64);
  const GridFunction zero = GridFunction::sample(g, [](double) { return 0.0; });
  CHECK(rkhs_forward(0.5, zero, 1.3) == 0.0);
  const GridFunction one = GridFunction::sample(g, [](double) { return 1.0; });
  // t Γ((α+1)/2)/√Γ(α) at t = 2
  CHECK(rkhs_forward(0.5, one, 2.0) == doctest::Approx(2.0 * std::tgamma(0.75) / std::sqrt(std::tgamma(0.5))).epsilon(1e-12));
  const GridFunction f = GridFunction::sample(g, [](double s) { return std::cos(3 * s); });
  const GridFunction f2 = GridFunction::sample(g, [](double s) { return 2 * std::cos(3 * s); });
  for (double t : {0.3, 1.1, 1.9}) CHECK(std::abs(rkhs_forward(0.5, f2, t) - 2 * rkhs_forward(0.5, f, t)) <= 1e-10);
  CHECK_THROWS_AS(rkhs_forward(0.5, one, 2.5), GridError);
  CHECK_THROWS_AS(rkhs_forward(1.5, one, 1.0), DomainError);
  CHECK_THROWS_AS(rkhs_forward(0.5, GridFunction(TimeGrid({0.5, 1.0}), {1.0, 1.0}), 0.7), GridError);
}

TEST_CASE("rkhs forward against brute-force quadrature") {
  // f(s) = s on [0,1]: A f(1) = (1/√Γ(α)) ∫_0^∞ u^c e^{-2u} du with u = w^4.
  const double a = 0.5, c = -0.25;
  const GridFunction f = GridFunction::sample(TimeGrid::uniform(1.0, 16), [](double s) { return s; });
  auto g = [&](double w) {
    const double u = w * w * w * w;
    return 4.0 * std::pow(w, 4.0 * c + 3.0) * std::exp(-2.0 * u);
  };
  const double ref = oracle::simpson(g, 0.0, std::pow(40.0, 0.25)) / std::sqrt(std::tgamma(a));
  CHECK(std::abs(rkhs_forward(a, f, 1.0) - ref) <= 1e-10);
}

TEST_CASE("rkhs inverse") {
  const TimeGrid g = TimeGrid::uniform(1.0, 1024);
  const GridFunction zero = GridFunction::sample(g, [](double) { return 0.0; });
  CHECK(rkhs_inverse(0.5, zero, 0.5) == 0.0);
  CHECK_THROWS_AS(rkhs_inverse(0.5, GridFunction::sample(g, [](double) { return 1.0; }), 0.5), DomainError);

  double prev = INFINITY;
  for (std::size_t n : {256, 1024}) {
    const TimeGrid grid = TimeGrid::uniform(1.0, n);
    const GridFunction f = GridFunction::sample(grid, [](double s) { return std::sin(s); });
    const GridFunction F = rkhs_forward_grid(0.5, f);
    double err = 0.0;
    for (double z = 0.1; z <= 0.9; z += 0.1) err = std::max(err, std::abs(rkhs_inverse(0.5, F, z) - std::sin(z)));
    CHECK(err <= 1e-3);
    CHECK(err < prev);
    prev = err;
  }
}
