#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hfbm/core.hpp"
#include "hfbm/ops.hpp"

namespace hfbm::sampler {

enum class Method { Cholesky, Volterra };

std::string to_string(Method m);
Method method_from_string(const std::string& name);

// Paths are rows; columns follow the grid.
struct PathEnsemble {
  TimeGrid grid;
  AlphaParam alpha;
  std::optional<Eigen::MatrixXd> bm_paths;
  Eigen::MatrixXd hfbm_paths;
  std::uint64_t seed = 0;
  Method method = Method::Cholesky;

  std::size_t paths() const { return static_cast<std::size_t>(hfbm_paths.rows()); }
};

struct FouParams {
  double theta = 1.0;
  double x0 = 0.0;
};

// Per-path engine seed: splitmix64 applied to (seed, path index).
std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path);

PathEnsemble sample_cholesky(const AlphaParam& alpha, const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                             const QuadratureConfig& cfg = {});

// Cell-averaged Volterra weights w_{k,1..k} of a uniform grid with cells [(j-1)Δ, jΔ).
// They do not depend on Δ.
std::vector<double> volterra_weights(const AlphaParam& alpha, std::size_t k);

// Variance of the discrete scheme at t_k: Δ Σ_j w_{k,j}^2.
double volterra_discrete_variance(const AlphaParam& alpha, double T, std::size_t n, std::size_t k);

PathEnsemble sample_volterra(const AlphaParam& alpha, const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed);

// Columns `indices` of sample_volterra(alpha, grid, n_paths, seed).hfbm_paths, bit for bit,
// without forming the other columns.
Eigen::MatrixXd sample_volterra_at(const AlphaParam& alpha, const TimeGrid& grid, std::size_t n_paths,
                                   std::uint64_t seed, const std::vector<std::size_t>& indices);

struct Inversion {
  Eigen::MatrixXd driver;
  // ‖B̂ - B‖ / ‖B‖ over all paths and grid points, when the true driver is known.
  std::optional<double> relative_l2_error;
};

// B(t) = [√Γ(α) / (Γ((α+1)/2) Γ((3-α)/2))] ∫_0^t (log t/s)^{(1-α)/2} dB^H(s) as a left-point
// Riemann-Stieltjes sum; cells where the kernel is singular use the cell average.
Inversion invert_path(const PathEnsemble& ensemble);

// X(t) = e^{-θt} x0 + e^{-θt} ∫_0^t e^{θs} dB^H(s) on a Volterra ensemble.
Eigen::MatrixXd sample_fou(const AlphaParam& alpha, const FouParams& fou, const TimeGrid& grid, std::size_t n_paths,
                           std::uint64_t seed);

double fou_mean(const FouParams& fou, double t);

// Var X(t) = t - 2θ ∫_0^t e^{-θ(t-s)} σ(s,t) ds + θ² ∬ e^{-θ(2t-u-s)} σ(u,s) du ds.
double fou_variance(const AlphaParam& alpha, double theta, double t, const QuadratureConfig& cfg = {});

// Σ a_k (X(t_k) - X(t_{k-1})) per path; breakpoints must be grid points.
Eigen::VectorXd wiener_integral(const ops::StepFunction& f, const PathEnsemble& ensemble);

// Σ_j f(t_{j-1}) (X(t_j) - X(t_{j-1})) per path.
Eigen::VectorXd riemann_stieltjes(const std::function<double(double)>& f, const PathEnsemble& ensemble);

// f(T)X(T) - f(t_0)X(t_0) - ∫ X f' ds, the integral by the trapezoid rule.
Eigen::VectorXd integrate_by_parts(const std::function<double(double)>& f, const std::function<double(double)>& fprime,
                                   const PathEnsemble& ensemble);

}  // namespace hfbm::sampler
