#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "hfbm/quadrature.hpp"

namespace hfbm {

enum class Regime { Sub, Unit, Super, High };

std::string to_string(Regime r);

class AlphaParam {
 public:
  explicit AlphaParam(double alpha);

  double value() const { return alpha_; }
  Regime regime() const { return regime_; }
  // (α-1)/2, the exponent of the logarithmic kernel.
  double kernel_exponent() const { return 0.5 * (alpha_ - 1.0); }
  // K_α = Γ((α+1)/2)/√Γ(α)
  double k_alpha() const;
  // C_α = 2^{1-α}√π/Γ(α/2)
  double c_alpha() const;
  // C'_α = 1/K_α
  double c_alpha_prime() const { return 1.0 / k_alpha(); }

 private:
  double alpha_;
  Regime regime_;
};

class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> points);
  static TimeGrid uniform(double T, std::size_t n_cells);

  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double front() const { return points_.front(); }
  double back() const { return points_.back(); }
  bool is_uniform() const { return uniform_; }
  // Cell width of a uniform grid.
  double step() const;

 private:
  std::vector<double> points_;
  bool uniform_ = false;
};

struct CovarianceMatrix {
  TimeGrid grid;
  Eigen::MatrixXd entries;
  // Diagonal shift added to make the factorization succeed; 0 when none was needed.
  double jitter = 0.0;
  // Indices of grid points with t > 0; rows/columns at t = 0 are identically zero.
  std::vector<std::size_t> active;
  // Lower Cholesky factor of entries restricted to `active` (plus jitter).
  Eigen::MatrixXd factor;
};

// K(t,s) = (log t/s)_+^{(α-1)/2} / √Γ(α)
double kernel(const AlphaParam& alpha, double t, double s);

double covariance_quadrature(const AlphaParam& alpha, double s, double t, const QuadratureConfig& cfg = {});

// Tricomi-Ψ closed form. Sub and Unit only; Super is routed to quadrature, High throws.
double covariance_closed(const AlphaParam& alpha, double s, double t, const QuadratureConfig& cfg = {});

CovarianceMatrix covariance_matrix(const AlphaParam& alpha, const TimeGrid& grid, const QuadratureConfig& cfg = {});

struct IncrementVariance {
  double j1 = 0.0;
  double j2 = 0.0;
  double total = 0.0;
};

// E|B(t) - B(s)|^2 split into the memory part j1 and the fresh-noise part j2.
IncrementVariance increment_variance(const AlphaParam& alpha, double s, double t, const QuadratureConfig& cfg = {});

// ∫_a^b (log t/s)^c ds for 0 ≤ a < b ≤ t and c > -1, via incomplete gamma.
double log_power_cell_integral(double c, double t, double a, double b);

}  // namespace hfbm
