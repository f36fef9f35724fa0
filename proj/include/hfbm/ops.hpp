#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "hfbm/core.hpp"
#include "hfbm/quadrature.hpp"

namespace hfbm::ops {

// f = Σ a_k 1_[t_{k-1}, t_k)
class StepFunction {
 public:
  StepFunction(std::vector<double> breakpoints, std::vector<double> coefficients);
  static StepFunction indicator(double a, double b);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  std::size_t pieces() const { return coefficients_.size(); }
  double operator()(double x) const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> coefficients_;
};

// Values on a grid, read back by linear interpolation.
class GridFunction {
 public:
  GridFunction(TimeGrid grid, std::vector<double> values);
  template <class F>
  static GridFunction sample(const TimeGrid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
    return GridFunction(grid, std::move(v));
  }

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator()(double x) const;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
};

// Closed forms on 1_[a,b):
//   I^β: (1/Γ(β+1)) [(log b/x)_+^β - (log a/x)_+^β]
//   D^β: (1/Γ(1-β)) [(log b/x)_+^{-β} - (log a/x)_+^{-β}], singular at x = b (and x = a > 0).
double hadamard_integral_indicator(double beta, double a, double b, double x);
double hadamard_derivative_indicator(double beta, double a, double b, double x);

// Integrand for the numeric operators: f vanishes on [support_end, ∞) and may carry
// a power (log support_end/z)^end_exponent as z ↑ support_end. near_end, when set,
// evaluates f from y = log(support_end/z) and is used close to the support end.
struct SupportedFunction {
  std::function<double(double)> f;
  double support_end = 0.0;
  double end_exponent = 0.0;
  std::vector<double> breakpoints;
  std::function<double(double)> near_end;
};

// Right-sided Hadamard integral (1/Γ(β)) ∫_x^∞ (log z/x)^{β-1} f(z) dz/z by quadrature
// in u = log(z/x).
double hadamard_integral(double beta, const SupportedFunction& f, double x, const QuadratureConfig& cfg = {});

// D^β f(x) = -x d/dx (I^{1-β} f)(x), with a five-point stencil. The step is
// rel_step·x, shrunk so that the stencil does not cross the support end or a breakpoint.
double hadamard_derivative(double beta, const SupportedFunction& f, double x, const QuadratureConfig& cfg = {},
                           double rel_step = 1e-3);

// Evaluator x ↦ scale Σ a_k [(log t_k/x)_+^e - (log t_{k-1}/x)_+^e], or f itself when α = 1.
class LogPowerTransform {
 public:
  LogPowerTransform(StepFunction f, double exponent, double scale, bool identity);

  double operator()(double x) const;
  // Value at x = b - db, with log(b/x) taken from db so that points very close to a
  // breakpoint b keep full relative accuracy.
  double near(double b, double db) const;
  double exponent() const { return exponent_; }
  bool identity() const { return identity_; }
  const StepFunction& source() const { return f_; }

 private:
  StepFunction f_;
  double exponent_;
  double scale_;
  bool identity_;
};

LogPowerTransform apply_M(const AlphaParam& alpha, const StepFunction& f);
LogPowerTransform apply_M_bar(const AlphaParam& alpha, const StepFunction& f);

// ∫_0^∞ (Mf)(x) (Mg)(x) dx by quadrature.
double m_inner_product(const AlphaParam& alpha, const StepFunction& f, const StepFunction& g,
                       const QuadratureConfig& cfg = {});

// E[∫f dB^H ∫g dB^H] = Σ_i Σ_j a_i b_j [σ(t_i,u_j) - σ(t_i,u_{j-1}) - σ(t_{i-1},u_j) + σ(t_{i-1},u_{j-1})].
double step_covariance(const AlphaParam& alpha, const StepFunction& f, const StepFunction& g,
                       const QuadratureConfig& cfg = {});

struct RoundtripResult {
  double derivative_of_integral = 0.0;  // sup |D^β I^β 1_[0,t) - 1_[0,t)|
  double integral_of_derivative = 0.0;  // sup |I^β D^β 1_[0,t) - 1_[0,t)|
};

RoundtripResult operator_roundtrip(double beta, double t, const std::vector<double>& xs,
                                   const QuadratureConfig& cfg = {});

// sup over xs of |D^β I^β 1_[0,t) - 1_[0,t)|, outer operator numeric, inner closed form.
double operator_roundtrip_check(double beta, double t, const std::vector<double>& xs,
                                const QuadratureConfig& cfg = {});

// ∫_s^z (log z/t)^{(α-3)/2} (log t/s)^{(1-α)/2} dt/t for 1 < α < 2.
double sonine_product_integral(double alpha, double s, double z, const QuadratureConfig& cfg = {});

// B((α-1)/2, (3-α)/2) = π / sin(π(α-1)/2), positive on (1,2).
double sonine_constant(double alpha);

// π / cos(πα/2): the same magnitude with the opposite sign on (1,2).
double sonine_cosine_form(double alpha);

// K(ρ,ν) = (ρν)^{-1} ∫_0^{ρ∧ν} (log ρ/u · log ν/u)^{(α-3)/2} du, ρ ≠ ν, 1 < α < 2.
double wiener_kernel(double alpha, double rho, double nu, const QuadratureConfig& cfg = {});

// (Af)(t) = (1/√Γ(α)) ∫_0^t (log t/s)^{(α-1)/2} f(s) ds, exact for the piecewise-linear
// interpolant of f. The grid must start at 0 and reach t.
double rkhs_forward(double alpha, const GridFunction& f, double t);

// A f at every grid point.
GridFunction rkhs_forward_grid(double alpha, const GridFunction& f);

struct RkhsInverseValue {
  double value = 0.0;
  // |difference between the stencil at h and at 2h|; large when G is not resolved.
  double step_sensitivity = 0.0;
};

// (A^{-1}F)(z) = (√Γ(α) cos(πα/2)/π) d/dz ∫_0^z (log z/t)^{-(α+1)/2} F(t)/t dt.
double rkhs_inverse(double alpha, const GridFunction& F, double z);
RkhsInverseValue rkhs_inverse_diagnostics(double alpha, const GridFunction& F, double z);

}  // namespace hfbm::ops
