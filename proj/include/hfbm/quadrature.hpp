#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "hfbm/errors.hpp"

namespace hfbm {

struct QuadratureConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

namespace quad_detail {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double floor;  // roundoff part of error
};

// 21-point Gauss-Kronrod nodes and weights on [-1, 1], non-negative half.
struct Gk21Table {
  double x[11];
  double wk[11];
  double wg[5];  // Gauss weights, paired with x[1], x[3], ..., x[9]
};

const Gk21Table& gk21_table();

template <class F>
Panel gk21(F& f, double a, double b) {
  const Gk21Table& t = gk21_table();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fv[21];
  fv[0] = f(mid);
  for (int i = 1; i < 11; ++i) {
    const double dx = half * t.x[i];
    fv[2 * i - 1] = f(mid - dx);
    fv[2 * i] = f(mid + dx);
  }
  double rk = t.wk[0] * fv[0];
  double rg = 0.0;
  double resabs = std::abs(rk);
  for (int i = 1; i < 11; ++i) {
    const double s = fv[2 * i - 1] + fv[2 * i];
    rk += t.wk[i] * s;
    resabs += t.wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
    if (i % 2 == 1) rg += t.wg[i / 2] * s;
  }
  const double mean = 0.5 * rk;
  double resasc = t.wk[0] * std::abs(fv[0] - mean);
  for (int i = 1; i < 11; ++i)
    resasc += t.wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

  const double value = rk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((rk - rg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  err = std::max(err, floor);
  return {a, b, value, err, floor};
}

inline std::string detail_message(const char* what, double err, double total, double a, double b) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s (error estimate %.3g, value %.6g, worst panel [%.6g, %.6g])", what, err, total, a, b);
  return buf;
}

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

}  // namespace quad_detail

// Globally adaptive Gauss-Kronrod 21 over [breaks.front(), breaks.back()], starting
// from the panels delimited by the given breakpoints.
template <class F>
QuadratureResult integrate_breaks(F&& f, std::span<const double> breaks, const QuadratureConfig& cfg = {}) {
  using quad_detail::Panel;
  using quad_detail::detail_message;
  if (breaks.size() < 2) return {};
  std::priority_queue<Panel, std::vector<Panel>, quad_detail::ByError> heap;
  double total = 0.0;
  double err = 0.0;
  double floor = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] < breaks[i + 1])) {
      if (breaks[i] == breaks[i + 1]) continue;
      throw DomainError("integrate: breakpoints must be nondecreasing");
    }
    Panel p = quad_detail::gk21(f, breaks[i], breaks[i + 1]);
    total += p.value;
    err += p.error;
    floor += p.floor;
    heap.push(p);
  }
  if (!std::isfinite(total)) throw NonConvergenceError("integrate: non-finite integrand value");

  int subdivisions = 0;
  // Once the estimate is mostly roundoff, further bisection cannot lower it.
  auto target = [&] { return std::max({cfg.abs_tol, cfg.rel_tol * std::abs(total), 2.0 * floor}); };
  while (err > target()) {
    if (subdivisions >= cfg.max_subdivisions)
      throw NonConvergenceError(detail_message("integrate: subdivision budget exhausted", err, total, heap.top().a,
                                               heap.top().b));
    Panel p = heap.top();
    const double mid = 0.5 * (p.a + p.b);
    if (!(p.a < mid && mid < p.b))
      throw NonConvergenceError("integrate: panel width reached floating-point resolution");
    heap.pop();
    Panel l = quad_detail::gk21(f, p.a, mid);
    Panel r = quad_detail::gk21(f, mid, p.b);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    floor += l.floor + r.floor - p.floor;
    heap.push(l);
    heap.push(r);
    ++subdivisions;
    if (!std::isfinite(total)) throw NonConvergenceError("integrate: non-finite integrand value");
    if (err <= target()) {
      // Resum to clear the drift of the running totals before accepting.
      total = 0.0;
      err = 0.0;
      floor = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        total += copy.top().value;
        err += copy.top().error;
        floor += copy.top().floor;
        copy.pop();
      }
    }
  }
  return {total, err, subdivisions};
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
  const double br[2] = {a, b};
  return integrate_breaks(f, std::span<const double>(br, 2), cfg);
}

// ∫_a^∞ f(x) dx via x = a + u/(1-u).
template <class F>
QuadratureResult integrate_to_infinity(F&& f, double a, const QuadratureConfig& cfg = {}) {
  auto g = [&](double u) {
    const double w = 1.0 - u;
    const double x = a + u / w;
    if (!std::isfinite(x)) return 0.0;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v / (w * w);
  };
  return integrate(g, 0.0, 1.0, cfg);
}

// ∫_a^b (x-a)^pa (b-x)^pb g(x) dx for pa, pb > -1. Each half is mapped so that the
// endpoint power is absorbed exactly by the substitution; g is never evaluated at
// a or b. g may also take (x, x-a, b-x), with the distances computed without
// cancellation near the endpoints.
template <class G>
QuadratureResult integrate_jacobi(G&& g, double a, double b, double pa, double pb,
                                  const QuadratureConfig& cfg = {}) {
  if (!(pa > -1.0) || !(pb > -1.0)) throw DomainError("integrate_jacobi: exponents must exceed -1");
  if (!(a < b)) {
    if (a == b) return {};
    throw DomainError("integrate_jacobi: a must be below b");
  }
  const double m = 0.5 * (a + b);
  const double ka = 1.0 / (1.0 + pa);
  const double kb = 1.0 / (1.0 + pb);
  const double ha = m - a;
  const double hb = b - m;
  auto call = [&](double x, double da, double db) {
    if constexpr (std::is_invocable_v<G&, double, double, double>)
      return g(x, da, db);
    else
      return g(x);
  };
  auto left = [&](double y) {
    const double d = ha * std::pow(y, ka);
    const double x = a + d;
    const double db = (b - m) + (ha - d);
    return call(x, d, db) * std::pow(db, pb);
  };
  auto right = [&](double y) {
    const double d = hb * std::pow(y, kb);
    const double x = b - d;
    const double da = (m - a) + (hb - d);
    return call(x, da, d) * std::pow(da, pa);
  };
  QuadratureConfig half_cfg = cfg;
  half_cfg.abs_tol = 0.5 * cfg.abs_tol;
  const double sa = std::pow(ha, pa + 1.0) * ka;
  const double sb = std::pow(hb, pb + 1.0) * kb;
  QuadratureConfig lc = half_cfg;
  QuadratureConfig rc = half_cfg;
  if (sa > 0) lc.abs_tol /= sa;
  if (sb > 0) rc.abs_tol /= sb;
  QuadratureResult l = integrate(left, 0.0, 1.0, lc);
  QuadratureResult r = integrate(right, 0.0, 1.0, rc);
  return {sa * l.value + sb * r.value, sa * l.error + sb * r.error, l.subdivisions + r.subdivisions};
}

}  // namespace hfbm
