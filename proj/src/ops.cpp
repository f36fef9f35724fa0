#include "hfbm/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hfbm/errors.hpp"
#include "hfbm/parallel.hpp"
#include "hfbm/specfun.hpp"

namespace hfbm::ops {

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<double> coefficients)
    : breakpoints_(std::move(breakpoints)), coefficients_(std::move(coefficients)) {
  if (breakpoints_.size() < 2) throw DomainError("StepFunction: at least two breakpoints required");
  if (coefficients_.size() + 1 != breakpoints_.size())
    throw DomainError("StepFunction: need exactly one coefficient per piece");
  if (!(breakpoints_.front() >= 0.0)) throw DomainError("StepFunction: breakpoints must be non-negative");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] > breakpoints_[i - 1]) || !std::isfinite(breakpoints_[i]))
      throw DomainError("StepFunction: breakpoints must be strictly increasing");
}

StepFunction StepFunction::indicator(double a, double b) { return StepFunction({a, b}, {1.0}); }

double StepFunction::operator()(double x) const {
  if (x < breakpoints_.front() || x >= breakpoints_.back()) return 0.0;
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return coefficients_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

GridFunction::GridFunction(TimeGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw DomainError("GridFunction: one value per grid point required");
}

double GridFunction::operator()(double x) const {
  const auto& p = grid_.points();
  if (x <= p.front()) return values_.front();
  if (x >= p.back()) return values_.back();
  const auto i = static_cast<std::size_t>(std::upper_bound(p.begin(), p.end(), x) - p.begin()) - 1;
  const double w = (x - p[i]) / (p[i + 1] - p[i]);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

namespace {

void check_indicator_args(double beta, double a, double b, double x) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("Hadamard operator: beta must lie in (0,1)");
  if (!(a >= 0.0) || !(b > a)) throw DomainError("Hadamard operator: need 0 <= a < b");
  if (!(x > 0.0)) throw DomainError("Hadamard operator: x must be positive");
}

// (log t/x)_+^e, zero unless x < t.
double log_power(double t, double x, double e) {
  if (!(x < t) || t <= 0.0) return 0.0;
  return std::pow(std::log(t / x), e);
}

}  // namespace

double hadamard_integral_indicator(double beta, double a, double b, double x) {
  check_indicator_args(beta, a, b, x);
  return (log_power(b, x, beta) - log_power(a, x, beta)) / specfun::gamma(beta + 1.0);
}

double hadamard_derivative_indicator(double beta, double a, double b, double x) {
  check_indicator_args(beta, a, b, x);
  if (x == b || (a > 0.0 && x == a)) throw DomainError("hadamard_derivative_indicator: singular point");
  return (log_power(b, x, -beta) - log_power(a, x, -beta)) / specfun::gamma(1.0 - beta);
}

double hadamard_integral(double beta, const SupportedFunction& f, double x, const QuadratureConfig& cfg) {
  if (!(beta > 0.0)) throw DomainError("hadamard_integral: beta must be positive");
  if (!(x > 0.0)) throw DomainError("hadamard_integral: x must be positive");
  if (!(f.support_end > 0.0)) throw DomainError("hadamard_integral: support end must be positive");
  if (!(f.end_exponent > -1.0)) throw DomainError("hadamard_integral: end exponent must exceed -1");
  const double E = f.support_end;
  if (x >= E) return 0.0;
  const double U = std::log(E / x);
  const double q = f.end_exponent;

  std::vector<double> nodes{0.0};
  for (double bp : f.breakpoints)
    if (bp > x && bp < E) nodes.push_back(std::log(bp / x));
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  nodes.push_back(U);
  const std::size_t pieces = nodes.size() - 1;

  auto eval = [&](double u) { return f.f(x * std::exp(u)); };
  auto eval_end = [&](double u, double y) { return f.near_end ? f.near_end(y) : f.f(x * std::exp(u)); };

  QuadratureConfig sub = cfg;
  sub.abs_tol = cfg.abs_tol / static_cast<double>(pieces);
  double total = 0.0;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double lo = nodes[i];
    const double hi = nodes[i + 1];
    const bool first = i == 0;
    const bool last = i + 1 == pieces;
    if (first && last) {
      auto g = [&](double u, double, double y) { return eval_end(u, y) * std::pow(y, -q); };
      total += integrate_jacobi(g, lo, hi, beta - 1.0, q, sub).value;
    } else if (first) {
      total += integrate_jacobi(eval, lo, hi, beta - 1.0, 0.0, sub).value;
    } else if (last) {
      auto g = [&](double u, double, double y) { return std::pow(u, beta - 1.0) * eval_end(u, y) * std::pow(y, -q); };
      total += integrate_jacobi(g, lo, hi, 0.0, q, sub).value;
    } else {
      auto g = [&](double u) { return std::pow(u, beta - 1.0) * eval(u); };
      total += integrate(g, lo, hi, sub).value;
    }
  }
  return total / specfun::gamma(beta);
}

double hadamard_derivative(double beta, const SupportedFunction& f, double x, const QuadratureConfig& cfg,
                           double rel_step) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("hadamard_derivative: beta must lie in (0,1)");
  if (!(x > 0.0)) throw DomainError("hadamard_derivative: x must be positive");
  if (!(rel_step > 0.0)) throw DomainError("hadamard_derivative: step must be positive");
  double dist = std::abs(x - f.support_end);
  for (double bp : f.breakpoints)
    if (bp > 0.0) dist = std::min(dist, std::abs(x - bp));
  if (dist == 0.0) throw DomainError("hadamard_derivative: x sits on a kink of f");
  const double h = std::min(rel_step * x, 0.25 * dist);
  auto I = [&](double y) { return hadamard_integral(1.0 - beta, f, y, cfg); };
  const double d = (-I(x + 2 * h) + 8 * I(x + h) - 8 * I(x - h) + I(x - 2 * h)) / (12 * h);
  return -x * d;
}

LogPowerTransform::LogPowerTransform(StepFunction f, double exponent, double scale, bool identity)
    : f_(std::move(f)), exponent_(exponent), scale_(scale), identity_(identity) {}

double LogPowerTransform::operator()(double x) const {
  if (!(x > 0.0)) throw DomainError("LogPowerTransform: x must be positive");
  if (identity_) return f_(x);
  const auto& t = f_.breakpoints();
  const auto& a = f_.coefficients();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0 || x >= t[k + 1]) continue;
    s += a[k] * (log_power(t[k + 1], x, exponent_) - log_power(t[k], x, exponent_));
  }
  return scale_ * s;
}

double LogPowerTransform::near(double b, double db) const {
  const double x = b - db;
  if (identity_) return f_(x);
  if (!(x > 0.0)) throw DomainError("LogPowerTransform: x must be positive");
  const double lb = -std::log1p(-db / b);
  auto term = [&](double tk) {
    if (tk == b) return std::pow(lb, exponent_);
    return log_power(tk, x, exponent_);
  };
  const auto& t = f_.breakpoints();
  const auto& a = f_.coefficients();
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] == 0.0 || !(t[k + 1] >= b)) continue;
    s += a[k] * (term(t[k + 1]) - term(t[k]));
  }
  return scale_ * s;
}

LogPowerTransform apply_M(const AlphaParam& alpha, const StepFunction& f) {
  if (alpha.regime() == Regime::High) throw RegimeError("apply_M: defined for 0 < alpha < 2");
  if (alpha.regime() == Regime::Unit) return LogPowerTransform(f, 0.0, 1.0, true);
  return LogPowerTransform(f, alpha.kernel_exponent(), 1.0 / std::sqrt(specfun::gamma(alpha.value())), false);
}

LogPowerTransform apply_M_bar(const AlphaParam& alpha, const StepFunction& f) {
  if (alpha.regime() == Regime::High) throw RegimeError("apply_M_bar: defined for 0 < alpha < 2");
  if (alpha.regime() == Regime::Unit) return LogPowerTransform(f, 0.0, 1.0, true);
  const double a = alpha.value();
  return LogPowerTransform(f, 0.5 * (1.0 - a), 1.0 / specfun::gamma(0.5 * (3.0 - a)), false);
}

namespace {

// Jump of the log-power sum at breakpoint t_k: coefficient of (log t_k/x)_+^e.
bool has_jump(const StepFunction& f, double p) {
  const auto& t = f.breakpoints();
  const auto& a = f.coefficients();
  const auto it = std::lower_bound(t.begin(), t.end(), p);
  if (it == t.end() || *it != p) return false;
  const auto k = static_cast<std::size_t>(it - t.begin());
  const double left = k == 0 ? 0.0 : a[k - 1];
  const double right = k < a.size() ? a[k] : 0.0;
  return left != right;
}

}  // namespace

double m_inner_product(const AlphaParam& alpha, const StepFunction& f, const StepFunction& g,
                       const QuadratureConfig& cfg) {
  const LogPowerTransform mf = apply_M(alpha, f);
  const LogPowerTransform mg = apply_M(alpha, g);
  const double end = std::min(f.breakpoints().back(), g.breakpoints().back());
  std::vector<double> nodes{0.0};
  for (const auto* h : {&f, &g})
    for (double p : h->breakpoints())
      if (p > 0.0 && p < end) nodes.push_back(p);
  nodes.push_back(end);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  auto product = [&](double x) { return mf(x) * mg(x); };
  if (alpha.regime() == Regime::Unit || alpha.regime() == Regime::Super)
    return integrate_breaks(product, nodes, cfg).value;

  const double e = mf.exponent();
  QuadratureConfig sub = cfg;
  sub.abs_tol = cfg.abs_tol / static_cast<double>(nodes.size());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double b = nodes[i + 1];
    const int jumps = static_cast<int>(has_jump(f, b)) + static_cast<int>(has_jump(g, b));
    const double pb = e * jumps;
    auto w = [&](double, double, double db) { return mf.near(b, db) * mg.near(b, db) * std::pow(db, -pb); };
    total += integrate_jacobi(w, nodes[i], b, 0.0, pb, sub).value;
  }
  return total;
}

double step_covariance(const AlphaParam& alpha, const StepFunction& f, const StepFunction& g,
                       const QuadratureConfig& cfg) {
  const auto& t = f.breakpoints();
  const auto& u = g.breakpoints();
  Eigen::MatrixXd sigma(t.size(), u.size());
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = 0; j < u.size(); ++j) sigma(i, j) = covariance_quadrature(alpha, t[i], u[j], cfg);
  double total = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i)
    for (std::size_t j = 1; j < u.size(); ++j) {
      const double block = sigma(i, j) - sigma(i, j - 1) - sigma(i - 1, j) + sigma(i - 1, j - 1);
      total += f.coefficients()[i - 1] * g.coefficients()[j - 1] * block;
    }
  return total;
}

RoundtripResult operator_roundtrip(double beta, double t, const std::vector<double>& xs, const QuadratureConfig& cfg) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("operator_roundtrip: beta must lie in (0,1)");
  if (!(t > 0.0)) throw DomainError("operator_roundtrip: t must be positive");
  const double gi = specfun::gamma(beta + 1.0);
  const double gd = specfun::gamma(1.0 - beta);
  SupportedFunction integral{[=](double z) { return hadamard_integral_indicator(beta, 0.0, t, z); }, t, beta, {},
                             [=](double y) { return std::pow(y, beta) / gi; }};
  SupportedFunction derivative{[=](double z) { return hadamard_derivative_indicator(beta, 0.0, t, z); }, t, -beta, {},
                               [=](double y) { return std::pow(y, -beta) / gd; }};
  RoundtripResult r;
  for (double x : xs) {
    if (!(x > 0.0) || x == t) throw DomainError("operator_roundtrip: sample points must be positive and differ from t");
    const double target = x < t ? 1.0 : 0.0;
    r.derivative_of_integral =
        std::max(r.derivative_of_integral, std::abs(hadamard_derivative(beta, integral, x, cfg) - target));
    r.integral_of_derivative =
        std::max(r.integral_of_derivative, std::abs(hadamard_integral(beta, derivative, x, cfg) - target));
  }
  return r;
}

double operator_roundtrip_check(double beta, double t, const std::vector<double>& xs, const QuadratureConfig& cfg) {
  return operator_roundtrip(beta, t, xs, cfg).derivative_of_integral;
}

double sonine_product_integral(double alpha, double s, double z, const QuadratureConfig& cfg) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("sonine_product_integral: alpha must lie in (1,2)");
  if (!(s > 0.0) || !(z > s)) throw DomainError("sonine_product_integral: need 0 < s < z");
  const double L = std::log(z / s);
  return integrate_jacobi([](double) { return 1.0; }, 0.0, L, 0.5 * (1.0 - alpha), 0.5 * (alpha - 3.0), cfg).value;
}

double sonine_constant(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("sonine_constant: alpha must lie in (1,2)");
  return std::numbers::pi / std::sin(0.5 * std::numbers::pi * (alpha - 1.0));
}

double sonine_cosine_form(double alpha) { return std::numbers::pi / std::cos(0.5 * std::numbers::pi * alpha); }

double wiener_kernel(double alpha, double rho, double nu, const QuadratureConfig& cfg) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw DomainError("wiener_kernel: alpha must lie in (1,2)");
  if (!(rho > 0.0) || !(nu > 0.0) || rho == nu) throw DomainError("wiener_kernel: need distinct positive times");
  const double m = std::min(rho, nu);
  const double L = std::log(std::max(rho, nu) / m);
  const double d = 0.5 * (alpha - 3.0);
  auto near = [&](double w) { return std::pow(w + L, d) * std::exp(-w); };
  auto far = [&](double w) { return std::pow(w * (w + L), d) * std::exp(-w); };
  const double head = integrate_jacobi(near, 0.0, 1.0, d, 0.0, cfg).value;
  const double tail = integrate_to_infinity(far, 1.0, cfg).value;
  return m * (head + tail) / (rho * nu);
}

namespace {

void check_rkhs_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("RKHS transform: alpha must lie in (0,1)");
}

void check_origin(const TimeGrid& g) {
  if (g.front() != 0.0) throw GridError("RKHS transform: grid must start at 0");
}

}  // namespace

double rkhs_forward(double alpha, const GridFunction& f, double t) {
  check_rkhs_alpha(alpha);
  const TimeGrid& g = f.grid();
  check_origin(g);
  if (!(t >= 0.0)) throw DomainError("rkhs_forward: t must be non-negative");
  if (t > g.back() * (1.0 + 1e-12)) throw GridError("rkhs_forward: grid does not cover [0, t]");
  if (t == 0.0) return 0.0;
  const double c = 0.5 * (alpha - 1.0);
  const double p = c + 1.0;
  const double scale2 = std::pow(2.0, -p);
  // ∫_0^b (log t/s)^c ds and ∫_0^b s (log t/s)^c ds
  auto P0 = [&](double b) { return b <= 0.0 ? 0.0 : t * specfun::upper_incomplete_gamma(p, std::log(t / b)); };
  auto P1 = [&](double b) {
    return b <= 0.0 ? 0.0 : t * t * scale2 * specfun::upper_incomplete_gamma(p, 2.0 * std::log(t / b));
  };
  const auto& s = g.points();
  const auto& v = f.values();
  double total = 0.0;
  double p0 = 0.0;
  double p1 = 0.0;
  for (std::size_t i = 0; i + 1 < s.size() && s[i] < t; ++i) {
    const double e = std::min(s[i + 1], t);
    const double q0 = P0(e);
    const double q1 = P1(e);
    const double m0 = q0 - p0;
    const double k = (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
    total += v[i] * m0 + k * ((q1 - p1) - s[i] * m0);
    p0 = q0;
    p1 = q1;
  }
  return total / std::sqrt(specfun::gamma(alpha));
}

GridFunction rkhs_forward_grid(double alpha, const GridFunction& f) {
  check_rkhs_alpha(alpha);
  check_origin(f.grid());
  std::vector<double> out(f.grid().size());
  parallel_for(out.size(), [&](std::size_t i) { out[i] = rkhs_forward(alpha, f, f.grid()[i]); });
  return GridFunction(f.grid(), std::move(out));
}

namespace {

// G(y) = ∫_0^y (log y/t)^{-(α+1)/2} F(t)/t dt for the piecewise-linear interpolant of F.
double inverse_inner(double alpha, const GridFunction& F, double y) {
  const double p = 0.5 * (1.0 - alpha);
  auto Q = [&](double b) { return b <= 0.0 ? 0.0 : y * specfun::upper_incomplete_gamma(p, std::log(y / b)); };
  auto R = [&](double b) { return b >= y ? 0.0 : std::pow(std::log(y / b), p) / p; };
  const auto& s = F.grid().points();
  const auto& v = F.values();
  double total = 0.0;
  double q_prev = 0.0;
  double r_prev = INFINITY;
  for (std::size_t i = 0; i + 1 < s.size() && s[i] < y; ++i) {
    const double e = std::min(s[i + 1], y);
    const double q = Q(e);
    const double r = R(e);
    const double k = (v[i + 1] - v[i]) / (s[i + 1] - s[i]);
    if (i == 0) {
      total += k * q;
    } else {
      const double i1 = r_prev - r;
      total += v[i] * i1 + k * ((q - q_prev) - s[i] * i1);
    }
    q_prev = q;
    r_prev = r;
  }
  return total;
}

double stencil(double alpha, const GridFunction& F, double z, double h) {
  auto G = [&](double y) { return inverse_inner(alpha, F, y); };
  return (-G(z + 2 * h) + 8 * G(z + h) - 8 * G(z - h) + G(z - 2 * h)) / (12 * h);
}

}  // namespace

RkhsInverseValue rkhs_inverse_diagnostics(double alpha, const GridFunction& F, double z) {
  check_rkhs_alpha(alpha);
  check_origin(F.grid());
  if (F.values().front() != 0.0) throw DomainError("rkhs_inverse: F(0) must be 0");
  if (!(z > 0.0)) throw DomainError("rkhs_inverse: z must be positive");
  double h = std::max(1e-4, 1e-3 * z);
  if (z - 4 * h <= 0.0) h = z / 8.0;
  if (z + 4 * h > F.grid().back()) throw GridError("rkhs_inverse: grid does not extend past the stencil");
  const double c = std::sqrt(specfun::gamma(alpha)) * std::cos(0.5 * std::numbers::pi * alpha) / std::numbers::pi;
  const double v1 = c * stencil(alpha, F, z, h);
  const double v2 = c * stencil(alpha, F, z, 2 * h);
  return {v1, std::abs(v1 - v2)};
}

double rkhs_inverse(double alpha, const GridFunction& F, double z) {
  return rkhs_inverse_diagnostics(alpha, F, z).value;
}

}  // namespace hfbm::ops
