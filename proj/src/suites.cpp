#include "hfbm/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "hfbm/errors.hpp"
#include "hfbm/ops.hpp"
#include "hfbm/parallel.hpp"
#include "hfbm/sampler.hpp"

namespace hfbm::suites {

using analysis::AnalysisReport;
using analysis::Verdict;

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {"holder",    "variation", "memory",    "lnd",        "boundary",
                                             "sonine",    "inversion", "operators", "inequality", "all"};
  return n;
}

bool known(const std::string& suite) {
  const auto& n = names();
  return std::find(n.begin(), n.end(), suite) != n.end();
}

namespace {

Verdict pass_if(bool ok) { return ok ? Verdict::Pass : Verdict::Fail; }

std::vector<double> defaults(const std::string& suite) {
  if (suite == "holder") return {0.5, 1.5, 3.5};
  if (suite == "lnd") return {0.5, 1.0, 1.5};
  if (suite == "sonine") return {1.2, 1.5, 1.8};
  if (suite == "operators") return {0.4, 1.0, 1.6};
  if (suite == "variation" || suite == "memory" || suite == "inversion") return {0.5, 1.5};
  return {};
}

bool uses_alpha(const std::string& suite) { return !defaults(suite).empty(); }

void require(bool ok, const std::string& suite, const char* range) {
  if (!ok) throw DomainError("suite " + suite + ": alpha must lie in " + range);
}

}  // namespace

void check_alphas(const std::string& suite, const std::vector<double>& alphas) {
  if (!known(suite)) throw DomainError("unknown suite '" + suite + "'");
  if (alphas.empty()) return;
  if (suite == "all") throw DomainError("suite all runs the default orders; --alpha is not accepted");
  if (!uses_alpha(suite)) throw DomainError("suite " + suite + " takes no --alpha");
  for (double a : alphas) {
    require(a > 0.0, suite, "(0, inf)");
    if (suite == "variation" || suite == "inversion" || suite == "operators") require(a < 2.0, suite, "(0, 2)");
    if (suite == "sonine") require(a > 1.0 && a < 2.0, suite, "(1, 2)");
  }
}

AnalysisReport sonine_report(double alpha) {
  const double c = ops::sonine_constant(alpha);
  const std::vector<std::pair<double, double>> windows = {{1.0, std::numbers::e}, {2.0, 7.0}, {0.5, 3.0}};
  std::vector<double> v;
  for (const auto& [s, z] : windows) v.push_back(ops::sonine_product_integral(alpha, s, z));
  double spread = 0.0, dev = 0.0;
  for (double x : v) {
    spread = std::max(spread, std::abs(x - v.front()));
    dev = std::max(dev, std::abs(x - c));
  }
  AnalysisReport r;
  r.name = "sonine";
  r.inputs = {{"alpha", alpha}, {"spread", spread}, {"cosine_form", ops::sonine_cosine_form(alpha)}};
  r.estimate = v;
  r.reference = c;
  r.tolerance = 1e-8;
  r.note = "pi/cos(pi alpha/2) has the opposite sign on (1,2) while the integrand is positive; the constant is "
           "pi/sin(pi(alpha-1)/2)";
  r.verdict = pass_if(spread <= 1e-8 && dev <= 1e-8);
  return r;
}

AnalysisReport inversion_report(double alpha, std::size_t paths, std::uint64_t seed) {
  std::vector<double> err;
  for (int e = 9; e <= 12; ++e) {
    const auto ens = sampler::sample_volterra(AlphaParam(alpha), TimeGrid::uniform(1.0, std::size_t{1} << e), paths, seed);
    err.push_back(*sampler::invert_path(ens).relative_l2_error);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < err.size(); ++i) decreasing = decreasing && err[i] < err[i - 1];
  AnalysisReport r;
  r.name = "inversion";
  r.inputs = {{"alpha", alpha}, {"paths", static_cast<double>(paths)}, {"seed", static_cast<double>(seed)}};
  r.estimate = err;
  r.reference = 0.0;
  r.tolerance = 0.05;
  if (alpha == 1.0) {
    r.verdict = pass_if(std::all_of(err.begin(), err.end(), [](double x) { return x == 0.0; }));
  } else {
    r.note = "relative L2 error over n = 2^9..2^12; last <= 5% and strictly decreasing";
    r.verdict = pass_if(err.back() <= 0.05 && decreasing);
  }
  return r;
}

AnalysisReport rkhs_report(double alpha, const std::string& function) {
  std::function<double(double)> f;
  if (function == "1")
    f = [](double) { return 1.0; };
  else if (function == "s")
    f = [](double s) { return s; };
  else if (function == "sin")
    f = [](double s) { return std::sin(s); };
  else
    throw DomainError("rkhs_report: unknown test function '" + function + "'");
  const TimeGrid grid = TimeGrid::uniform(1.0, 4096);
  const ops::GridFunction F = ops::rkhs_forward_grid(alpha, ops::GridFunction::sample(grid, f));
  std::vector<double> z;
  for (int i = 0; i <= 80; ++i) z.push_back(0.1 + 0.01 * i);
  std::vector<double> dev(z.size());
  parallel_for(z.size(), [&](std::size_t i) { dev[i] = std::abs(ops::rkhs_inverse(alpha, F, z[i]) - f(z[i])); });
  const double sup = *std::max_element(dev.begin(), dev.end());
  AnalysisReport r;
  r.name = "rkhs_roundtrip";
  r.inputs = {{"alpha", alpha}, {"n", 4096.0}, {"z_min", 0.1}, {"z_max", 0.9}};
  r.estimate = sup;
  r.reference = 0.0;
  r.tolerance = 1e-3;
  r.note = "sup |A^-1 A f - f| for f = " + function;
  r.verdict = pass_if(sup <= 1e-3);
  return r;
}

AnalysisReport roundtrip_report(double beta) {
  std::vector<double> xs;
  for (double x = 0.05; x < 2.0; x += 0.05)
    if (std::abs(x - 1.0) >= 0.01) xs.push_back(x);
  const ops::RoundtripResult rt = ops::operator_roundtrip(beta, 1.0, xs);
  AnalysisReport r;
  r.name = "operator_roundtrip";
  r.inputs = {{"beta", beta}, {"t", 1.0}, {"integral_of_derivative", rt.integral_of_derivative}};
  r.estimate = rt.derivative_of_integral;
  r.reference = 0.0;
  r.tolerance = 1e-6;
  r.note = "sup |D I 1_[0,t) - 1_[0,t)| away from the jump";
  r.verdict = pass_if(rt.derivative_of_integral <= 1e-6 && rt.integral_of_derivative <= 1e-6);
  return r;
}

namespace {

ops::StepFunction random_step(std::mt19937_64& engine, double T, std::size_t pieces) {
  std::uniform_real_distribution<double> u(0.0, T);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<double> b;
  while (b.size() < pieces + 1) {
    b.push_back(u(engine));
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  std::vector<double> a(pieces);
  for (double& x : a) x = coef(engine);
  return ops::StepFunction(std::move(b), std::move(a));
}

}  // namespace

AnalysisReport isometry_report(double alpha, std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  const AlphaParam a(alpha);
  double worst = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const ops::StepFunction f = random_step(engine, 5.0, 6);
    const ops::StepFunction g = random_step(engine, 5.0, 6);
    worst = std::max(worst, std::abs(ops::m_inner_product(a, f, g) - ops::step_covariance(a, f, g)));
  }
  AnalysisReport r;
  r.name = "isometry";
  r.inputs = {{"alpha", alpha}, {"pairs", static_cast<double>(pairs)}, {"seed", static_cast<double>(seed)}};
  r.estimate = worst;
  r.reference = 0.0;
  r.tolerance = 1e-6;
  r.note = "max |<Mf, Mg> - sigma combination| over random 6-piece step functions on [0,5]";
  r.verdict = pass_if(worst <= 1e-6);
  return r;
}

AnalysisReport modulus_report(double beta) {
  const std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const auto pts = analysis::modulus_curve(beta, eps);
  bool increasing = true;
  for (std::size_t i = 1; i < pts.size(); ++i) increasing = increasing && pts[i].theta < pts[i - 1].theta;
  const double ratio = pts.back().theta / pts.back().exact;
  AnalysisReport r;
  r.name = "modulus";
  r.inputs = {{"beta", beta}, {"eps", eps.back()}, {"asymptotic_ratio", pts.back().theta / pts.back().asymptotic}};
  r.estimate = ratio;
  r.reference = 1.0;
  r.tolerance = 0.05;
  r.note = "Theta(eps) against beta^-3/2 Gamma(3/2, beta log 1/eps); Theta increasing in eps";
  r.verdict = pass_if(increasing && std::abs(ratio - 1.0) <= 0.05);
  return r;
}

std::vector<AnalysisReport> run(const std::string& suite, const std::vector<double>& alphas, std::uint64_t seed) {
  check_alphas(suite, alphas);
  if (suite == "all") {
    std::vector<AnalysisReport> out;
    for (const auto& s : names()) {
      if (s == "all") continue;
      auto part = run(s, {}, seed);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }
  const std::vector<double> as = alphas.empty() ? defaults(suite) : alphas;
  std::vector<AnalysisReport> out;
  if (suite == "holder") {
    for (double a : as) {
      out.push_back(analysis::holder_report(AlphaParam(a), 0.0, 1.0));
      out.push_back(analysis::holder_report(AlphaParam(a), 0.5, 1.5));
      if (a < 2.0) out.push_back(analysis::quasi_helix_check(AlphaParam(a), 1.0));
    }
    out.push_back(modulus_report(0.5));
  } else if (suite == "variation") {
    for (double a : as) {
      std::vector<double> ps = {1.0, 2.0, 2.0 / a, 3.0};
      std::sort(ps.begin(), ps.end());
      ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
      for (double p : ps)
        out.push_back(analysis::variation_verdict(AlphaParam(a), p, 1.0, analysis::dyadic_levels(6, 14)));
    }
  } else if (suite == "memory") {
    for (double a : as) out.push_back(analysis::memory_report(AlphaParam(a)));
  } else if (suite == "lnd") {
    for (double a : as) out.push_back(analysis::lnd_report(AlphaParam(a)));
  } else if (suite == "boundary") {
    out.push_back(analysis::boundary_alpha0_report());
    out.push_back(analysis::alpha1_distance_report());
    out.push_back(analysis::max_suppression_report(seed));
  } else if (suite == "sonine") {
    for (double a : as) out.push_back(sonine_report(a));
  } else if (suite == "inversion") {
    for (double a : as) {
      out.push_back(inversion_report(a, 16, seed));
      if (a < 1.0)
        for (const char* f : {"1", "s", "sin"}) out.push_back(rkhs_report(a, f));
    }
  } else if (suite == "operators") {
    for (double b : {0.5, 0.25, 0.05}) out.push_back(roundtrip_report(b));
    for (double a : as) out.push_back(isometry_report(a, 5, seed));
  } else if (suite == "inequality") {
    out.push_back(analysis::lagrange_log_inequality_check(100000, seed));
  }
  return out;
}

}  // namespace hfbm::suites
