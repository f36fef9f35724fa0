#include "hfbm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hfbm/errors.hpp"
#include "hfbm/parallel.hpp"
#include "hfbm/sampler.hpp"
#include "hfbm/specfun.hpp"

namespace hfbm::analysis {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "Pass") return Verdict::Pass;
  if (s == "Fail") return Verdict::Fail;
  if (s == "Inconclusive") return Verdict::Inconclusive;
  throw DomainError("unknown verdict '" + s + "'");
}

Verdict combine(const std::vector<AnalysisReport>& reports) {
  bool inconclusive = false;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::Fail) return Verdict::Fail;
    if (r.verdict == Verdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

namespace {

Verdict pass_if(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

}  // namespace

double gaussian_abs_moment(double p) {
  if (!(p > 0.0)) throw DomainError("gaussian_abs_moment: p must be positive");
  return std::pow(2.0, 0.5 * p) * specfun::gamma(0.5 * (p + 1.0)) / std::sqrt(std::numbers::pi);
}

// ---- power variation ----

std::vector<double> unit_increment_variances(const AlphaParam& alpha, std::size_t n, const QuadratureConfig& cfg) {
  std::vector<double> v(n);
  parallel_for(n, [&](std::size_t i) {
    v[i] = increment_variance(alpha, static_cast<double>(i), static_cast<double>(i + 1), cfg).total;
  });
  return v;
}

namespace {

constexpr std::size_t kMaxLevel = std::size_t{1} << 16;

double variation_sum(const std::vector<double>& v, double p, std::size_t n, double T) {
  const double scale = std::pow(T / static_cast<double>(n), 0.5 * p) * gaussian_abs_moment(p);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += std::pow(v[k], 0.5 * p);
  return scale * s;
}

void check_variation_args(double p, std::size_t n, double T) {
  if (!(p > 0.0)) throw DomainError("power variation: p must be positive");
  if (!(T > 0.0)) throw DomainError("power variation: T must be positive");
  if (n < 1 || n > kMaxLevel || (n & (n - 1)) != 0)
    throw DomainError("power variation: n must be a power of 2 not above 2^16");
}

}  // namespace

double power_variation_expected(const AlphaParam& alpha, double p, std::size_t n, double T,
                                const QuadratureConfig& cfg) {
  check_variation_args(p, n, T);
  return variation_sum(unit_increment_variances(alpha, n, cfg), p, n, T);
}

std::vector<double> VariationCurve::log2_ratios() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < levels.size(); ++i) {
    const double doublings = std::log2(static_cast<double>(levels[i]) / static_cast<double>(levels[i - 1]));
    out.push_back(std::log2(expected_sums[i] / expected_sums[i - 1]) / doublings);
  }
  return out;
}

std::vector<std::size_t> dyadic_levels(int first_exponent, int last_exponent) {
  std::vector<std::size_t> out;
  for (int e = first_exponent; e <= last_exponent; ++e) out.push_back(std::size_t{1} << e);
  return out;
}

VariationCurve variation_curve(const AlphaParam& alpha, double p, double T, const std::vector<std::size_t>& levels,
                               const QuadratureConfig& cfg) {
  if (levels.empty()) throw DomainError("variation_curve: no levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    check_variation_args(p, levels[i], T);
    if (i > 0 && levels[i] <= levels[i - 1]) throw DomainError("variation_curve: levels must increase");
  }
  const std::vector<double> v = unit_increment_variances(alpha, levels.back(), cfg);
  VariationCurve c{alpha.value(), p, levels, {}};
  for (std::size_t n : levels) c.expected_sums.push_back(variation_sum(v, p, n, T));
  return c;
}

std::string to_string(VariationClass c) {
  switch (c) {
    case VariationClass::ConvergentPositive: return "ConvergentPositive";
    case VariationClass::Vanishing: return "Vanishing";
    case VariationClass::Diverging: return "Diverging";
    case VariationClass::Unstable: return "Unstable";
  }
  return "Unstable";
}

VariationClass classify(const VariationCurve& curve) {
  const std::vector<double> r = curve.log2_ratios();
  if (r.size() < 2) return VariationClass::Unstable;
  const double last = r.back();
  if (std::abs(last - r[r.size() - 2]) > 0.05) return VariationClass::Unstable;
  const std::size_t m = curve.expected_sums.size();
  const double change = curve.expected_sums[m - 1] / curve.expected_sums[m - 2] - 1.0;
  if (std::abs(change) < 0.02 && curve.expected_sums.back() > 0.0) return VariationClass::ConvergentPositive;
  return last < 0.0 ? VariationClass::Vanishing : VariationClass::Diverging;
}

VariationClass predicted_class(double alpha, double p) {
  const double e = 1.0 - 0.5 * alpha * p;
  if (std::abs(e) < 1e-12) return VariationClass::ConvergentPositive;
  return e < 0.0 ? VariationClass::Vanishing : VariationClass::Diverging;
}

AnalysisReport variation_verdict(const AlphaParam& alpha, double p, double T, const std::vector<std::size_t>& levels,
                                 double tolerance, const QuadratureConfig& cfg) {
  const VariationCurve curve = variation_curve(alpha, p, T, levels, cfg);
  const VariationClass seen = classify(curve);
  const VariationClass want = predicted_class(alpha.value(), p);
  const double rate = curve.log2_ratios().back();
  const double target = 1.0 - 0.5 * alpha.value() * p;
  AnalysisReport r;
  r.name = "variation";
  r.inputs = {{"alpha", alpha.value()}, {"p", p}, {"T", T}, {"n_max", static_cast<double>(levels.back())},
              {"V_n_max", curve.expected_sums.back()}};
  r.estimate = rate;
  r.reference = target;
  r.tolerance = tolerance;
  r.note = "observed " + to_string(seen) + ", predicted " + to_string(want);
  if (seen == VariationClass::Unstable)
    r.verdict = Verdict::Inconclusive;
  else
    r.verdict = pass_if(seen == want && std::abs(rate - target) <= tolerance);
  return r;
}

// ---- Hölder scaling ----

std::vector<double> geometric_gaps(double largest, double smallest, std::size_t count) {
  if (!(largest > smallest && smallest > 0.0) || count < 2) throw DomainError("geometric_gaps: bad range");
  std::vector<double> g(count);
  const double q = std::log(smallest / largest) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = largest * std::exp(q * static_cast<double>(i));
  return g;
}

namespace {

struct Line {
  double slope;
  double stderr_;
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const auto m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - my - slope * (x[i] - mx);
    ssr += e * e;
  }
  return {slope, std::sqrt(ssr / (m - 2.0) / sxx)};
}

std::vector<double> endpoints_for(double delta, double T, double gap, std::size_t count) {
  std::vector<double> s(count);
  const double span = T - gap - delta;
  for (std::size_t i = 0; i < count; ++i)
    s[i] = count == 1 ? delta : delta + span * static_cast<double>(i) / static_cast<double>(count - 1);
  return s;
}

}  // namespace

HolderFit holder_slope(const AlphaParam& alpha, double delta, double T, const std::vector<double>& gaps,
                       std::size_t endpoints, const QuadratureConfig& cfg) {
  if (gaps.size() < 4) throw DomainError("holder_slope: need at least 4 gaps for the regression");
  if (!(delta >= 0.0) || !(T > delta)) throw DomainError("holder_slope: need 0 <= delta < T");
  if (endpoints < 1) throw DomainError("holder_slope: need at least one endpoint");
  for (double g : gaps)
    if (!(g > 0.0) || g > T - delta) throw DomainError("holder_slope: gap outside the interval");
  HolderFit fit;
  fit.gaps = gaps;
  fit.sup_variance.assign(gaps.size(), 0.0);
  parallel_for(gaps.size(), [&](std::size_t i) {
    double sup = 0.0;
    for (double s : endpoints_for(delta, T, gaps[i], endpoints))
      sup = std::max(sup, increment_variance(alpha, s, s + gaps[i], cfg).total);
    fit.sup_variance[i] = sup;
  });
  std::vector<double> x, y;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    x.push_back(std::log(gaps[i]));
    y.push_back(std::log(fit.sup_variance[i]));
  }
  const Line l = fit_line(x, y);
  fit.slope = l.slope;
  fit.stderr_ = l.stderr_;
  return fit;
}

AnalysisReport holder_report(const AlphaParam& alpha, double delta, double T, const QuadratureConfig& cfg) {
  const double a = alpha.value();
  const HolderFit fit = holder_slope(alpha, delta, T, geometric_gaps(1e-2, 1e-5, 12), 16, cfg);
  AnalysisReport r;
  r.name = "holder";
  r.inputs = {{"alpha", a}, {"delta", delta}, {"T", T}, {"stderr", fit.stderr_}};
  r.estimate = fit.slope;
  if (delta > 0.0 && a >= 2.0) {
    // Only an upper-bound argument exists here; the threshold is a choice.
    r.reference = "slope >= 1.8";
    r.tolerance = 0.0;
    r.verdict = pass_if(fit.slope >= 1.8);
    return r;
  }
  const double want = delta > 0.0 ? a : std::min(a, 1.0);
  r.reference = want;
  r.tolerance = 0.05;
  r.verdict = pass_if(std::abs(fit.slope - want) <= 0.05);
  return r;
}

// ---- modulus of continuity ----

std::vector<ModulusPoint> modulus_curve(double beta, const std::vector<double>& eps, const QuadratureConfig& cfg) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("modulus_curve: beta must lie in (0,1)");
  std::vector<ModulusPoint> out;
  for (double e : eps) {
    if (!(e > 0.0 && e < std::exp(-1.0))) throw DomainError("modulus_curve: eps must lie in (0, 1/e)");
    const double y0 = -std::log(e);
    // r = e^{-y}
    const double theta =
        integrate_to_infinity([&](double y) { return std::sqrt(y) * std::exp(-beta * y); }, y0, cfg).value;
    const double exact = std::pow(beta, -1.5) * specfun::upper_incomplete_gamma(1.5, beta * y0);
    out.push_back({e, theta, exact, std::pow(e, beta) * std::sqrt(y0) / beta});
  }
  return out;
}

// ---- quasi-helix ----

HelixConstants quasi_helix_constants(const AlphaParam& alpha, double T, const std::vector<double>& gaps,
                                     std::size_t endpoints, const QuadratureConfig& cfg) {
  if (alpha.regime() == Regime::High) throw RegimeError("quasi_helix: defined for 0 < alpha < 2");
  const double a = alpha.value();
  HelixConstants h;
  h.gamma1 = a < 1.0 ? 1.0 : a;
  h.gamma2 = a < 1.0 ? a : 1.0;
  std::vector<double> lo(gaps.size()), hi(gaps.size());
  parallel_for(gaps.size(), [&](std::size_t i) {
    const double g = gaps[i];
    if (!(g > 0.0 && g <= T)) throw DomainError("quasi_helix: gap outside [0, T]");
    double mn = std::numeric_limits<double>::infinity();
    double mx = 0.0;
    for (double s : endpoints_for(0.0, T, g, endpoints)) {
      const double v = increment_variance(alpha, s, s + g, cfg).total;
      mn = std::min(mn, v / std::pow(g, h.gamma1));
      mx = std::max(mx, v / std::pow(g, h.gamma2));
    }
    lo[i] = mn;
    hi[i] = mx;
  });
  h.c1 = *std::min_element(lo.begin(), lo.end());
  h.c2 = *std::max_element(hi.begin(), hi.end());
  return h;
}

AnalysisReport quasi_helix_check(const AlphaParam& alpha, double T, const QuadratureConfig& cfg) {
  const HelixConstants base = quasi_helix_constants(alpha, T, geometric_gaps(0.5 * T, 1e-3 * T, 10), 16, cfg);
  const HelixConstants fine = quasi_helix_constants(alpha, T, geometric_gaps(0.5 * T, 1e-4 * T, 14), 32, cfg);
  const double d1 = std::abs(fine.c1 / base.c1 - 1.0);
  const double d2 = std::abs(fine.c2 / base.c2 - 1.0);
  AnalysisReport r;
  r.name = "quasi_helix";
  r.inputs = {{"alpha", alpha.value()}, {"T", T},        {"gamma1", fine.gamma1},
              {"gamma2", fine.gamma2},  {"C1", fine.c1}, {"C2", fine.c2}};
  r.estimate = std::vector<double>{fine.c1, fine.c2};
  r.reference = "0 < C1, C2 < inf, stable under refinement";
  r.tolerance = 0.1;
  const bool finite = base.c1 > 0.0 && fine.c1 > 0.0 && std::isfinite(base.c2) && std::isfinite(fine.c2);
  if (!finite)
    r.verdict = Verdict::Fail;
  else
    r.verdict = d1 < 0.1 && d2 < 0.1 ? Verdict::Pass : Verdict::Inconclusive;
  return r;
}

// ---- memory ----

std::vector<double> memory_series(const AlphaParam& alpha, std::size_t N, const QuadratureConfig& cfg) {
  if (N < 1 || N > 10000) throw DomainError("memory_series: need 1 <= N <= 10^4");
  std::vector<double> sigma(N + 1, 0.0);
  parallel_for(N, [&](std::size_t i) { sigma[i + 1] = covariance_quadrature(alpha, 1.0, static_cast<double>(i + 1), cfg); });
  std::vector<double> s(N);
  double acc = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    acc += std::abs(sigma[n] - sigma[n - 1]);
    s[n - 1] = acc;
  }
  return s;
}

AnalysisReport memory_report(const AlphaParam& alpha, std::size_t N, const QuadratureConfig& cfg) {
  if (N < 200) throw DomainError("memory_report: need N >= 200");
  const std::vector<double> s = memory_series(alpha, N, cfg);
  const double a = alpha.value();
  AnalysisReport r;
  r.name = "memory";
  r.inputs = {{"alpha", a}, {"N", static_cast<double>(N)}, {"S_100", s[99]}, {"S_N/2", s[N / 2 - 1]}, {"S_N", s[N - 1]}};
  if (a < 1.0) {
    const double tail = s[N - 1] - s[N / 2 - 1];
    r.estimate = tail;
    r.reference = 0.0;
    r.tolerance = 1e-3;
    r.note = "convergent: S_N - S_{N/2} < 1e-3";
    r.verdict = pass_if(tail < 1e-3);
  } else if (a > 1.0) {
    r.estimate = s[N - 1] / s[99];
    r.reference = "S_N / S_100 > 2";
    r.tolerance = 0.0;
    r.note = "divergent: S_N > 2 S_100";
    r.verdict = pass_if(s[N - 1] > 2.0 * s[99]);
  } else {
    r.estimate = s[N - 1] - s[0];
    r.reference = 0.0;
    r.tolerance = 1e-10;
    r.verdict = pass_if(std::abs(s[N - 1] - s[0]) <= 1e-10);
  }
  return r;
}

MemoryBound memory_term_bound(const AlphaParam& alpha, const std::vector<double>& partial_sums, std::size_t fit_end) {
  const std::size_t N = partial_sums.size();
  if (fit_end < 100 || fit_end >= N) throw DomainError("memory_term_bound: need 100 <= fit_end < N");
  const double e = 0.5 * (alpha.value() - 3.0);
  auto ratio = [&](std::size_t n) {
    const double d = partial_sums[n - 1] - partial_sums[n - 2];
    return d * static_cast<double>(n - 1) / std::pow(std::log(static_cast<double>(n)), e);
  };
  MemoryBound b;
  for (std::size_t n = 100; n <= fit_end; ++n) b.constant = std::max(b.constant, ratio(n));
  for (std::size_t n = fit_end + 1; n <= N; ++n) b.max_ratio = std::max(b.max_ratio, ratio(n) / b.constant);
  return b;
}

// ---- local nondeterminism ----

double lnd_ratio(const AlphaParam& alpha, double t_prev, double t, const QuadratureConfig& cfg) {
  if (!(t_prev > 0.0)) throw DomainError("lnd_ratio: t_prev must be positive");
  if (!(t > t_prev)) throw DomainError("lnd_ratio: degenerate window, need t > t_prev");
  const IncrementVariance v = increment_variance(alpha, t_prev, t, cfg);
  return v.j2 / (v.j1 + v.j2);
}

AnalysisReport lnd_report(const AlphaParam& alpha, const QuadratureConfig& cfg) {
  std::vector<double> ratios;
  for (double h : {1e-1, 1e-2, 1e-3}) ratios.push_back(lnd_ratio(alpha, 1.0, 1.0 + h, cfg));
  AnalysisReport r;
  r.name = "lnd";
  r.inputs = {{"alpha", alpha.value()}, {"t_prev", 1.0}};
  r.estimate = ratios;
  if (alpha.regime() == Regime::Unit) {
    r.reference = 1.0;
    r.tolerance = 1e-10;
    r.verdict = pass_if(std::all_of(ratios.begin(), ratios.end(), [](double x) { return std::abs(x - 1.0) <= 1e-10; }));
  } else {
    r.reference = kLndFloor;
    r.tolerance = 0.0;
    r.note = "ratios over h = 1e-1, 1e-2, 1e-3 must stay above the calibrated floor";
    r.verdict = pass_if(std::all_of(ratios.begin(), ratios.end(), [](double x) { return x >= kLndFloor && x <= 1.0; }));
  }
  return r;
}

// ---- boundary limits ----

std::vector<double> boundary_alpha0(const std::vector<double>& alphas, double s, double t, const QuadratureConfig& cfg) {
  if (!(s > 0.0 && t > 0.0) || s == t) throw DomainError("boundary_alpha0: need distinct positive s, t");
  std::vector<double> out;
  for (double a : alphas) out.push_back(covariance_quadrature(AlphaParam(a), s, t, cfg));
  return out;
}

AnalysisReport boundary_alpha0_report(const QuadratureConfig& cfg) {
  const std::vector<double> alphas = {0.5, 0.1, 0.01, 0.001};
  const std::vector<double> v = boundary_alpha0(alphas, 1.0, 2.0, cfg);
  bool decreasing = true;
  for (std::size_t i = 1; i < v.size(); ++i) decreasing = decreasing && v[i] < v[i - 1];
  AnalysisReport r;
  r.name = "boundary_alpha0";
  r.inputs = {{"s", 1.0}, {"t", 2.0}, {"alpha_min", alphas.back()}};
  r.estimate = v;
  r.reference = 0.01 * std::sqrt(2.0);
  r.tolerance = 0.0;
  r.note = "covariance decreasing in alpha, last below 0.01 sqrt(st) and below 5% of the first";
  r.verdict = pass_if(decreasing && v.back() < 0.01 * std::sqrt(2.0) && v.back() / v.front() < 0.05);
  return r;
}

double alpha1_distance(double alpha) {
  if (!(alpha > 0.5 && alpha < 1.5)) throw DomainError("alpha1_distance: alpha must lie in (0.5, 1.5)");
  return -2.0 * std::expm1(std::lgamma(0.5 * (alpha + 1.0)) - 0.5 * std::lgamma(alpha));
}

AnalysisReport alpha1_distance_report() {
  std::vector<double> q;
  for (double a : {0.9, 0.95, 1.05, 1.1}) q.push_back(alpha1_distance(a) / ((a - 1.0) * (a - 1.0)));
  const auto [mn, mx] = std::minmax_element(q.begin(), q.end());
  AnalysisReport r;
  r.name = "alpha1_distance";
  r.inputs = {{"f(1)", alpha1_distance(1.0)}};
  r.estimate = q;
  r.reference = "f(1) = 0, max/min of f(a)/(a-1)^2 <= 2";
  r.tolerance = 2.0;
  r.verdict = pass_if(alpha1_distance(1.0) == 0.0 && *mn > 0.0 && *mx / *mn <= 2.0);
  return r;
}

std::vector<double> max_suppression(const std::vector<double>& alphas, std::size_t n, std::size_t paths,
                                    std::uint64_t seed) {
  std::vector<double> out;
  const TimeGrid grid = TimeGrid::uniform(1.0, n);
  for (double a : alphas) {
    const sampler::PathEnsemble e = sampler::sample_volterra(AlphaParam(a), grid, paths, seed);
    double sum = 0.0;
    for (Eigen::Index p = 0; p < e.hfbm_paths.rows(); ++p) sum += e.hfbm_paths.row(p).maxCoeff();
    out.push_back(std::pow(a, 0.6) * sum / static_cast<double>(paths));
  }
  return out;
}

AnalysisReport max_suppression_report(std::uint64_t seed) {
  const std::vector<double> alphas = {0.2, 0.1, 0.05};
  const std::vector<double> v = max_suppression(alphas, 256, 2000, seed);
  bool ok = true;
  for (std::size_t i = 1; i < v.size(); ++i) ok = ok && v[i] <= v[i - 1];
  AnalysisReport r;
  r.name = "max_suppression";
  r.inputs = {{"n", 256.0}, {"paths", 2000.0}, {"seed", static_cast<double>(seed)}};
  r.estimate = v;
  r.reference = "alpha^0.6 E max nonincreasing as alpha decreases over 0.2, 0.1, 0.05";
  r.tolerance = 0.0;
  r.verdict = pass_if(ok);
  return r;
}

// ---- log inequality ----

double lagrange_constant(double p) {
  if (!(p >= 1.0)) throw DomainError("lagrange_constant: p must be at least 1");
  return std::max(p * std::pow(p - 1.0, p - 1.0) * std::exp(1.0 - p), 1.0);
}

AnalysisReport lagrange_log_inequality_check(std::size_t trials, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    const double t = 100.0 * (1.0 - unit(engine));
    const double s = t * (1.0 - unit(engine));
    const double p = 1.0 + 4.0 * unit(engine);
    const double lhs = s * std::pow(std::log1p((t - s) / s), p);
    const double rhs = lagrange_constant(p) * (t - s);
    // 1e-12 relative allowance for rounding in log and pow
    if (lhs > rhs * (1.0 + 1e-12)) ++violations;
    if (rhs > 0.0) worst = std::max(worst, lhs / rhs);
  }
  AnalysisReport r;
  r.name = "lagrange_inequality";
  r.inputs = {{"trials", static_cast<double>(trials)}, {"seed", static_cast<double>(seed)}, {"max_lhs_over_rhs", worst}};
  r.estimate = static_cast<double>(violations);
  r.reference = 0.0;
  r.tolerance = 0.0;
  r.verdict = pass_if(violations == 0);
  return r;
}

}  // namespace hfbm::analysis
