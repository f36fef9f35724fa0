#include "hfbm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hfbm/errors.hpp"
#include "hfbm/parallel.hpp"
#include "hfbm/specfun.hpp"

namespace hfbm::sampler {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::string to_string(Method m) { return m == Method::Cholesky ? "cholesky" : "volterra"; }

Method method_from_string(const std::string& name) {
  if (name == "cholesky") return Method::Cholesky;
  if (name == "volterra") return Method::Volterra;
  throw DomainError("unknown sampling method '" + name + "'");
}

std::uint64_t path_seed(std::uint64_t seed, std::uint64_t path) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed) ^ path);
}

namespace {

// Row p holds n standard normals from the engine of path p.
RowMatrix standard_normals(std::size_t n_paths, std::size_t n, std::uint64_t seed) {
  RowMatrix z(n_paths, n);
  parallel_for(n_paths, [&](std::size_t p) {
    std::mt19937_64 engine(path_seed(seed, p));
    std::normal_distribution<double> normal;
    for (std::size_t j = 0; j < n; ++j) z(p, j) = normal(engine);
  });
  return z;
}

void check_paths(std::size_t n_paths) {
  if (n_paths < 1) throw DomainError("sampler: at least one path required");
}

void check_volterra_grid(const TimeGrid& grid) {
  if (!grid.is_uniform()) throw GridError("Volterra sampling needs a uniform grid");
  if (grid.front() != 0.0) throw GridError("Volterra sampling needs a grid starting at 0");
}

}  // namespace

PathEnsemble sample_cholesky(const AlphaParam& alpha, const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed,
                             const QuadratureConfig& cfg) {
  check_paths(n_paths);
  const CovarianceMatrix cov = covariance_matrix(alpha, grid, cfg);
  const std::size_t m = cov.active.size();
  const RowMatrix z = standard_normals(n_paths, m, seed);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_paths), static_cast<Eigen::Index>(grid.size()));
  parallel_for(n_paths, [&](std::size_t p) {
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j <= i; ++j) s += cov.factor(i, j) * z(p, j);
      x(p, cov.active[i]) = s;
    }
  });
  return PathEnsemble{grid, alpha, std::nullopt, std::move(x), seed, Method::Cholesky};
}

std::vector<double> volterra_weights(const AlphaParam& alpha, std::size_t k) {
  if (k < 1) throw DomainError("volterra_weights: k must be at least 1");
  std::vector<double> w(k, 1.0);
  if (alpha.regime() == Regime::Unit) return w;
  const double p = 0.5 * (alpha.value() + 1.0);
  const double scale = static_cast<double>(k) / std::sqrt(specfun::gamma(alpha.value()));
  const double kd = static_cast<double>(k);
  double prev = 0.0;  // Γ(p, log(k/0)) = 0
  for (std::size_t j = 1; j <= k; ++j) {
    const double q = specfun::upper_incomplete_gamma(p, std::log(kd / static_cast<double>(j)));
    w[j - 1] = scale * (q - prev);
    prev = q;
  }
  return w;
}

double volterra_discrete_variance(const AlphaParam& alpha, double T, std::size_t n, std::size_t k) {
  if (n < 1 || k < 1 || k > n) throw DomainError("volterra_discrete_variance: need 1 <= k <= n");
  const std::vector<double> w = volterra_weights(alpha, k);
  double s = 0.0;
  for (double v : w) s += v * v;
  return s * T / static_cast<double>(n);
}

namespace {

double volterra_value(const AlphaParam& alpha, const std::vector<double>& w, const RowMatrix& db, std::size_t p,
                      std::size_t k) {
  double s = 0.0;
  if (alpha.regime() == Regime::Unit) {
    for (std::size_t j = 0; j < k; ++j) s += db(p, j);
  } else {
    for (std::size_t j = 0; j < k; ++j) s += w[j] * db(p, j);
  }
  return s;
}

RowMatrix driver_increments(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed) {
  const std::size_t n = grid.size() - 1;
  RowMatrix db = standard_normals(n_paths, n, seed);
  db *= std::sqrt(grid.step());
  return db;
}

}  // namespace

PathEnsemble sample_volterra(const AlphaParam& alpha, const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed) {
  check_paths(n_paths);
  check_volterra_grid(grid);
  const std::size_t n = grid.size() - 1;
  const auto rows = static_cast<Eigen::Index>(n_paths);
  const auto cols = static_cast<Eigen::Index>(n + 1);
  const RowMatrix db = driver_increments(grid, n_paths, seed);

  Eigen::MatrixXd bm = Eigen::MatrixXd::Zero(rows, cols);
  for (std::size_t p = 0; p < n_paths; ++p) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      s += db(p, j);
      bm(p, j + 1) = s;
    }
  }
  Eigen::MatrixXd x;
  if (alpha.regime() == Regime::Unit) {
    x = bm;
  } else {
    x = Eigen::MatrixXd::Zero(rows, cols);
    parallel_for(n, [&](std::size_t i) {
      const std::size_t k = i + 1;
      const std::vector<double> w = volterra_weights(alpha, k);
      for (std::size_t p = 0; p < n_paths; ++p) x(p, k) = volterra_value(alpha, w, db, p, k);
    });
  }
  return PathEnsemble{grid, alpha, std::move(bm), std::move(x), seed, Method::Volterra};
}

Eigen::MatrixXd sample_volterra_at(const AlphaParam& alpha, const TimeGrid& grid, std::size_t n_paths,
                                   std::uint64_t seed, const std::vector<std::size_t>& indices) {
  check_paths(n_paths);
  check_volterra_grid(grid);
  std::size_t last = 0;
  for (std::size_t k : indices) {
    if (k >= grid.size()) throw DomainError("sample_volterra_at: index outside the grid");
    last = std::max(last, k);
  }
  std::vector<std::vector<double>> w(indices.size());
  for (std::size_t c = 0; c < indices.size(); ++c)
    if (indices[c] > 0) w[c] = volterra_weights(alpha, indices[c]);
  const double scale = std::sqrt(grid.step());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_paths), static_cast<Eigen::Index>(indices.size()));
  // One path at a time, with the same draws and arithmetic as sample_volterra.
  parallel_for(n_paths, [&](std::size_t p) {
    std::mt19937_64 engine(path_seed(seed, p));
    std::normal_distribution<double> normal;
    RowMatrix db(1, static_cast<Eigen::Index>(last));
    for (std::size_t j = 0; j < last; ++j) db(0, j) = normal(engine);
    db *= scale;
    for (std::size_t c = 0; c < indices.size(); ++c)
      if (indices[c] > 0) x(p, c) = volterra_value(alpha, w[c], db, 0, indices[c]);
  });
  return x;
}

Inversion invert_path(const PathEnsemble& ensemble) {
  const AlphaParam& alpha = ensemble.alpha;
  if (alpha.regime() == Regime::High) throw RegimeError("invert_path: defined for 0 < alpha < 2");
  const TimeGrid& grid = ensemble.grid;
  check_volterra_grid(grid);
  const std::size_t n = grid.size() - 1;
  const std::size_t n_paths = ensemble.paths();
  const Eigen::MatrixXd& x = ensemble.hfbm_paths;

  Inversion out;
  if (alpha.regime() == Regime::Unit) {
    out.driver = x;
  } else {
    const double a = alpha.value();
    const double e = 0.5 * (1.0 - a);
    const double c = std::sqrt(specfun::gamma(a)) /
                     (specfun::gamma(0.5 * (a + 1.0)) * specfun::gamma(0.5 * (3.0 - a)));
    RowMatrix dx(n_paths, n);
    for (std::size_t p = 0; p < n_paths; ++p)
      for (std::size_t j = 0; j < n; ++j) dx(p, j) = x(p, j + 1) - x(p, j);

    out.driver = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    parallel_for(n, [&](std::size_t i) {
      const std::size_t k = i + 1;
      const double kd = static_cast<double>(k);
      std::vector<double> v(k);
      for (std::size_t j = 1; j <= k; ++j) {
        const bool singular = j == 1 || (e < 0.0 && j == k);
        v[j - 1] = singular ? log_power_cell_integral(e, kd, static_cast<double>(j - 1), static_cast<double>(j))
                            : std::pow(std::log(kd / static_cast<double>(j - 1)), e);
      }
      for (std::size_t p = 0; p < n_paths; ++p) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += v[j] * dx(p, j);
        out.driver(p, k) = c * s;
      }
    });
  }
  if (ensemble.bm_paths) {
    const Eigen::MatrixXd& b = *ensemble.bm_paths;
    const double denom = b.squaredNorm();
    out.relative_l2_error = denom > 0.0 ? std::sqrt((out.driver - b).squaredNorm() / denom) : 0.0;
  }
  return out;
}

Eigen::MatrixXd sample_fou(const AlphaParam& alpha, const FouParams& fou, const TimeGrid& grid, std::size_t n_paths,
                           std::uint64_t seed) {
  if (!(fou.theta > 0.0)) throw DomainError("sample_fou: theta must be positive");
  if (alpha.regime() == Regime::High) throw RegimeError("sample_fou: defined for 0 < alpha < 2");
  const PathEnsemble base = sample_volterra(alpha, grid, n_paths, seed);
  const double dt = grid.step();
  const double decay = std::exp(-fou.theta * dt);
  const double half = std::exp(-0.5 * fou.theta * dt);
  Eigen::MatrixXd out(base.hfbm_paths.rows(), base.hfbm_paths.cols());
  const Eigen::MatrixXd& x = base.hfbm_paths;
  for (Eigen::Index p = 0; p < x.rows(); ++p) {
    double y = fou.x0;
    out(p, 0) = y;
    for (Eigen::Index k = 1; k < x.cols(); ++k) {
      // e^{θ s} sampled at the cell midpoint
      y = decay * y + half * (x(p, k) - x(p, k - 1));
      out(p, k) = y;
    }
  }
  return out;
}

double fou_mean(const FouParams& fou, double t) { return fou.x0 * std::exp(-fou.theta * t); }

double fou_variance(const AlphaParam& alpha, double theta, double t, const QuadratureConfig& cfg) {
  if (!(theta > 0.0)) throw DomainError("fou_variance: theta must be positive");
  if (!(t >= 0.0)) throw DomainError("fou_variance: t must be non-negative");
  if (t == 0.0) return 0.0;
  auto sigma = [&](double u, double s) { return covariance_quadrature(alpha, u, s, cfg); };
  const double cross = integrate([&](double s) { return std::exp(-theta * (t - s)) * sigma(s, t); }, 0.0, t, cfg).value;
  auto inner = [&](double s) {
    const double v =
        integrate([&](double u) { return std::exp(-theta * (t - u)) * sigma(u, s); }, 0.0, s, cfg).value;
    return std::exp(-theta * (t - s)) * v;
  };
  const double square = 2.0 * integrate(inner, 0.0, t, cfg).value;
  return t - 2.0 * theta * cross + theta * theta * square;
}

namespace {

std::size_t grid_index(const TimeGrid& grid, double t) {
  const auto& p = grid.points();
  const double tol = 1e-12 * std::max(1.0, std::abs(p.back()));
  const auto it = std::lower_bound(p.begin(), p.end(), t - tol);
  if (it == p.end() || std::abs(*it - t) > tol) throw GridError("wiener_integral: breakpoint is not a grid point");
  return static_cast<std::size_t>(it - p.begin());
}

}  // namespace

Eigen::VectorXd wiener_integral(const ops::StepFunction& f, const PathEnsemble& ensemble) {
  const auto& t = f.breakpoints();
  std::vector<std::size_t> idx(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) idx[i] = grid_index(ensemble.grid, t[i]);
  const Eigen::MatrixXd& x = ensemble.hfbm_paths;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.rows());
  for (std::size_t k = 1; k < t.size(); ++k)
    out += f.coefficients()[k - 1] * (x.col(static_cast<Eigen::Index>(idx[k])) - x.col(static_cast<Eigen::Index>(idx[k - 1])));
  return out;
}

Eigen::VectorXd riemann_stieltjes(const std::function<double(double)>& f, const PathEnsemble& ensemble) {
  const Eigen::MatrixXd& x = ensemble.hfbm_paths;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.rows());
  for (Eigen::Index j = 1; j < x.cols(); ++j) out += f(ensemble.grid[static_cast<std::size_t>(j - 1)]) * (x.col(j) - x.col(j - 1));
  return out;
}

Eigen::VectorXd integrate_by_parts(const std::function<double(double)>& f, const std::function<double(double)>& fprime,
                                   const PathEnsemble& ensemble) {
  const Eigen::MatrixXd& x = ensemble.hfbm_paths;
  const TimeGrid& g = ensemble.grid;
  const Eigen::Index last = x.cols() - 1;
  Eigen::VectorXd out = f(g.back()) * x.col(last) - f(g.front()) * x.col(0);
  for (Eigen::Index j = 1; j <= last; ++j) {
    const double a = g[static_cast<std::size_t>(j - 1)];
    const double b = g[static_cast<std::size_t>(j)];
    out -= 0.5 * (b - a) * (fprime(a) * x.col(j - 1) + fprime(b) * x.col(j));
  }
  return out;
}

}  // namespace hfbm::sampler
