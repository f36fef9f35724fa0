#include "hfbm/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hfbm/errors.hpp"
#include "hfbm/parallel.hpp"
#include "hfbm/specfun.hpp"

namespace hfbm {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Sub: return "sub";
    case Regime::Unit: return "unit";
    case Regime::Super: return "super";
    case Regime::High: return "high";
  }
  return "unknown";
}

AlphaParam::AlphaParam(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("alpha must be a positive finite number");
  if (alpha < 1.0)
    regime_ = Regime::Sub;
  else if (alpha == 1.0)
    regime_ = Regime::Unit;
  else if (alpha < 2.0)
    regime_ = Regime::Super;
  else
    regime_ = Regime::High;
}

double AlphaParam::k_alpha() const {
  return specfun::gamma(0.5 * (alpha_ + 1.0)) / std::sqrt(specfun::gamma(alpha_));
}

double AlphaParam::c_alpha() const {
  return std::pow(2.0, 1.0 - alpha_) * std::sqrt(std::numbers::pi) / specfun::gamma(0.5 * alpha_);
}

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw GridError("TimeGrid: at least two points required");
  if (!(points_.front() >= 0.0)) throw GridError("TimeGrid: points must be non-negative");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i]) || !(points_[i] > points_[i - 1]))
      throw GridError("TimeGrid: points must be finite and strictly increasing");
  }
  const double mean = (points_.back() - points_.front()) / static_cast<double>(points_.size() - 1);
  uniform_ = true;
  for (std::size_t i = 1; i < points_.size() && uniform_; ++i)
    uniform_ = std::abs(points_[i] - points_[i - 1] - mean) <= 1e-9 * mean;
}

TimeGrid TimeGrid::uniform(double T, std::size_t n_cells) {
  if (!(T > 0.0) || !std::isfinite(T)) throw GridError("TimeGrid::uniform: T must be positive");
  if (n_cells < 1) throw GridError("TimeGrid::uniform: at least one cell required");
  std::vector<double> p(n_cells + 1);
  for (std::size_t k = 0; k <= n_cells; ++k) p[k] = T * static_cast<double>(k) / static_cast<double>(n_cells);
  p.back() = T;
  TimeGrid g(std::move(p));
  g.uniform_ = true;
  return g;
}

double TimeGrid::step() const {
  if (!uniform_) throw GridError("TimeGrid::step: grid is not uniform");
  return (points_.back() - points_.front()) / static_cast<double>(points_.size() - 1);
}

double kernel(const AlphaParam& alpha, double t, double s) {
  if (!(t > 0.0) || !(s > 0.0)) throw DomainError("kernel: t and s must be positive");
  if (s >= t) return 0.0;
  return std::pow(std::log(t / s), alpha.kernel_exponent()) / std::sqrt(specfun::gamma(alpha.value()));
}

double log_power_cell_integral(double c, double t, double a, double b) {
  if (!(c > -1.0)) throw DomainError("log_power_cell_integral: exponent must exceed -1");
  if (!(a >= 0.0) || !(a < b) || !(b <= t)) throw DomainError("log_power_cell_integral: need 0 <= a < b <= t");
  const double p = c + 1.0;
  const double xa = a == 0.0 ? INFINITY : std::log(t / a);
  const double xb = std::log(t / b);
  // Both ends in the tail: difference of small upper-gamma values avoids cancellation.
  if (xb >= 1.0) return t * (specfun::upper_incomplete_gamma(p, xb) - specfun::upper_incomplete_gamma(p, xa));
  return t * (specfun::lower_incomplete_gamma(p, xa) - specfun::lower_incomplete_gamma(p, xb));
}

namespace {

void check_times(double s, double t) {
  if (!(s >= 0.0) || !(t >= 0.0) || !std::isfinite(s) || !std::isfinite(t))
    throw DomainError("covariance: times must be finite and non-negative");
}

}  // namespace

double covariance_quadrature(const AlphaParam& alpha, double s, double t, const QuadratureConfig& cfg) {
  check_times(s, t);
  cfg.validate();
  const double m = std::min(s, t);
  if (m == 0.0) return 0.0;
  if (s == t) return t;
  const double L = std::log(std::max(s, t) / m);
  const double c = alpha.kernel_exponent();
  auto near = [&](double u) { return std::pow(u + L, c) * std::exp(-u); };
  auto far = [&](double u) { return std::pow(u, c) * std::pow(u + L, c) * std::exp(-u); };
  QuadratureConfig sub = cfg;
  sub.abs_tol = 0.5 * cfg.abs_tol;
  const double head = integrate_jacobi(near, 0.0, 1.0, c, 0.0, sub).value;
  const double tail = integrate_to_infinity(far, 1.0, sub).value;
  return m * (head + tail) / specfun::gamma(alpha.value());
}

double covariance_closed(const AlphaParam& alpha, double s, double t, const QuadratureConfig& cfg) {
  check_times(s, t);
  switch (alpha.regime()) {
    case Regime::High: throw RegimeError("covariance_closed: alpha >= 2 has no closed-form path");
    case Regime::Super: return covariance_quadrature(alpha, s, t, cfg);
    case Regime::Unit: return std::min(s, t);
    case Regime::Sub: break;
  }
  const double m = std::min(s, t);
  if (m == 0.0) return 0.0;
  if (s == t) return t;
  const double a = alpha.value();
  const double L = std::log(std::max(s, t) / m);
  return alpha.c_alpha() * m * specfun::tricomi_psi(0.5 * (1.0 - a), 1.0 - a, L, cfg);
}

CovarianceMatrix covariance_matrix(const AlphaParam& alpha, const TimeGrid& grid, const QuadratureConfig& cfg) {
  const std::size_t n = grid.size();
  CovarianceMatrix cov{grid, Eigen::MatrixXd::Zero(n, n), 0.0, {}, {}};
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = 0; j <= i; ++j) cov.entries(i, j) = covariance_quadrature(alpha, grid[i], grid[j], cfg);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) cov.entries(i, j) = cov.entries(j, i);

  for (std::size_t i = 0; i < n; ++i)
    if (grid[i] > 0.0) cov.active.push_back(i);
  const auto m = static_cast<Eigen::Index>(cov.active.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) sub(i, j) = cov.entries(cov.active[i], cov.active[j]);
  if (m == 0) return cov;

  const double base = 1e-12 * sub.diagonal().maxCoeff();
  double jitter = 0.0;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    if (attempt > 0) jitter = base * std::pow(10.0, attempt - 1);
    Eigen::MatrixXd shifted = sub;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(shifted);
    if (llt.info() == Eigen::Success) {
      cov.factor = llt.matrixL();
      cov.jitter = jitter;
      return cov;
    }
  }
  throw FactorizationError("covariance_matrix: Cholesky failed after jitter escalation to " + std::to_string(jitter));
}

IncrementVariance increment_variance(const AlphaParam& alpha, double s, double t, const QuadratureConfig& cfg) {
  check_times(s, t);
  if (!(s <= t)) throw DomainError("increment_variance: need s <= t");
  cfg.validate();
  if (s == t) return {};
  if (s == 0.0) return {0.0, t, t};
  if (alpha.regime() == Regime::Unit) return {0.0, t - s, t - s};

  const double a = alpha.value();
  const double c = alpha.kernel_exponent();
  const double g = specfun::gamma(a);
  const double L = std::log(t / s);
  const double j2 = t * specfun::lower_incomplete_gamma(a, L) / g;

  // (L+z)^c - z^c = z^c expm1(c log1p(L/z)), accurate when z >> L.
  auto rel = [&](double z) { return std::expm1(c * std::log1p(L / z)); };
  QuadratureConfig sub = cfg;
  sub.abs_tol = cfg.abs_tol / 3.0;
  const double a1 = std::min(L, 1.0);
  double near = 0.0;
  if (c < 0.0) {
    auto h = [&](double z) {
      const double r = rel(z);
      return r * r * std::exp(-z);
    };
    near = integrate_jacobi(h, 0.0, a1, 2.0 * c, 0.0, sub).value;
  } else {
    auto h = [&](double z) {
      const double d = std::pow(L + z, c) - std::pow(z, c);
      return d * d * std::exp(-z);
    };
    near = integrate(h, 0.0, a1, sub).value;
  }
  double mid = 0.0;
  if (L < 1.0) {
    auto h = [&](double w) {
      const double z = std::exp(w);
      const double d = std::pow(z, c) * rel(z);
      return d * d * std::exp(-z) * z;
    };
    mid = integrate(h, std::log(L), 0.0, sub).value;
  }
  auto far = [&](double z) {
    const double d = std::pow(z, c) * rel(z);
    return d * d * std::exp(-z);
  };
  const double tail = integrate_to_infinity(far, 1.0, sub).value;
  const double j1 = s * (near + mid + tail) / g;
  return {j1, j2, j1 + j2};
}

}  // namespace hfbm
