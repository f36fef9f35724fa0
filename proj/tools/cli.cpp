#include "cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hfbm/core.hpp"
#include "hfbm/errors.hpp"
#include "hfbm/report.hpp"
#include "hfbm/sampler.hpp"
#include "hfbm/suites.hpp"

namespace hfbm::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(double x, const char* spec = "%.15g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string csv_name(double alpha, const std::string& method) {
  return "hfbm_alpha" + fmt(alpha, "%g") + "_" + method + ".csv";
}

void write_csv(const fs::path& path, const TimeGrid& grid, const Eigen::MatrixXd& paths) {
  std::string text = "t";
  for (Eigen::Index p = 0; p < paths.rows(); ++p) text += ",path_" + std::to_string(p);
  text += '\n';
  for (std::size_t k = 0; k < grid.size(); ++k) {
    text += fmt17(grid[k]);
    for (Eigen::Index p = 0; p < paths.rows(); ++p) {
      text += ',';
      text += fmt17(paths(p, static_cast<Eigen::Index>(k)));
    }
    text += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << text;
  if (!f) throw UsageError("write failed for " + path.string());
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << j.dump(2) << '\n';
}

void simulate_one(const RunManifest& m, const fs::path& dir, std::ostream& out) {
  const AlphaParam alpha(m.alpha);
  const TimeGrid grid = TimeGrid::uniform(m.T, m.n);
  const sampler::Method method = sampler::method_from_string(m.method);
  const sampler::PathEnsemble e = method == sampler::Method::Volterra
                                      ? sampler::sample_volterra(alpha, grid, m.paths, m.seed)
                                      : sampler::sample_cholesky(alpha, grid, m.paths, m.seed);
  write_csv(dir / m.output, grid, e.hfbm_paths);
  fs::path manifest = dir / m.output;
  manifest.replace_extension(".json");
  write_json(manifest, to_json(m));
  out << (dir / m.output).string() << '\n' << manifest.string() << '\n';
}

void validate_manifest(const RunManifest& m) {
  if (m.command != "simulate") throw UsageError("manifest command must be simulate");
  if (!(m.alpha > 0.0) || !std::isfinite(m.alpha)) throw UsageError("alpha must be positive");
  if (!(m.T > 0.0) || !std::isfinite(m.T)) throw UsageError("T must be positive");
  if (m.n < 1) throw UsageError("n must be at least 1");
  if (m.paths < 1) throw UsageError("paths must be at least 1");
  if (m.method != "volterra" && m.method != "cholesky") throw UsageError("method must be volterra or cholesky");
  if (m.output.empty() || fs::path(m.output).has_parent_path()) throw UsageError("manifest output must be a file name");
}

std::vector<double> parse_times(const std::string& s) {
  std::vector<double> t;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad time '" + item + "'");
    }
    if (used != item.size()) throw UsageError("bad time '" + item + "'");
    if (!(v > 0.0) || !std::isfinite(v)) throw UsageError("times must be positive");
    t.push_back(v);
  }
  if (t.empty()) throw UsageError("--times is empty");
  return t;
}

void print_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "  " : "") << fmt(m(i, j));
    out << '\n';
  }
}

void write_matrix_csv(const fs::path& path, const std::vector<double>& times, const Eigen::MatrixXd& m) {
  std::string text = "t";
  for (double t : times) text += "," + fmt17(t);
  text += '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    text += fmt17(times[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < m.cols(); ++j) text += "," + fmt17(m(i, j));
    text += '\n';
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path.string());
  f << text;
}

std::string render(const analysis::AnalysisReport& r) {
  std::string s = r.name + "  " + analysis::to_string(r.verdict) + "  estimate=";
  if (const auto* d = std::get_if<double>(&r.estimate)) {
    s += fmt(*d, "%.6g");
  } else {
    s += "[";
    const auto& v = std::get<std::vector<double>>(r.estimate);
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i], "%.6g");
    s += "]";
  }
  s += "  reference=";
  if (const auto* d = std::get_if<double>(&r.reference))
    s += fmt(*d, "%.6g");
  else
    s += "\"" + std::get<std::string>(r.reference) + "\"";
  s += "  tolerance=" + fmt(r.tolerance, "%.3g");
  for (const auto& [k, v] : r.inputs) s += "  " + k + "=" + fmt(v, "%.6g");
  if (!r.note.empty()) s += "\n    " + r.note;
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hadamard fractional Brownian motion toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // simulate
  CLI::App* sim = app.add_subcommand("simulate", "sample paths and write CSV plus a manifest");
  std::vector<double> sim_alpha = {0.5, 1.0, 1.5, 3.0};
  double sim_T = 1.0;
  std::size_t sim_n = 1024, sim_paths = 1;
  std::uint64_t sim_seed = 42;
  std::string sim_method = "volterra", sim_out = ".", sim_manifest;
  auto* o_alpha = sim->add_option("--alpha", sim_alpha, "orders, comma separated")->delimiter(',');
  auto* o_T = sim->add_option("--T", sim_T, "horizon");
  auto* o_n = sim->add_option("--n", sim_n, "grid cells");
  auto* o_paths = sim->add_option("--paths", sim_paths, "number of paths");
  auto* o_seed = sim->add_option("--seed", sim_seed, "seed");
  auto* o_method = sim->add_option("--method", sim_method, "cholesky or volterra")
                       ->check(CLI::IsMember({"cholesky", "volterra"}));
  sim->add_option("--out", sim_out, "output directory");
  auto* o_manifest = sim->add_option("--manifest", sim_manifest, "rerun from a manifest")->check(CLI::ExistingFile);
  for (auto* o : {o_alpha, o_T, o_n, o_paths, o_seed, o_method}) o_manifest->excludes(o);

  // cov
  CLI::App* cov = app.add_subcommand("cov", "covariance table");
  double cov_alpha = 1.0;
  std::string cov_times, cov_mode = "quad", cov_out;
  cov->add_option("--alpha", cov_alpha, "order")->required();
  cov->add_option("--times", cov_times, "times, comma separated")->required();
  cov->add_option("--mode", cov_mode, "quad, closed or both")->check(CLI::IsMember({"quad", "closed", "both"}));
  cov->add_option("--out", cov_out, "CSV file");

  // verify
  CLI::App* ver = app.add_subcommand("verify", "run a verification suite");
  std::string suite;
  std::vector<double> ver_alpha;
  std::uint64_t ver_seed = 42;
  bool json = false;
  ver->add_option("--suite", suite, "suite name")->required()->check(CLI::IsMember(suites::names()));
  ver->add_option("--alpha", ver_alpha, "orders, comma separated")->delimiter(',');
  ver->add_option("--seed", ver_seed, "seed for Monte Carlo and random trials");
  ver->add_flag("--json", json, "print the reports as a JSON array");

  std::vector<std::string> argv_store = {"hfbm"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (sim->parsed()) {
      std::vector<RunManifest> runs;
      fs::path dir = sim_out;
      if (!sim_manifest.empty()) {
        std::ifstream f(sim_manifest);
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(f);
        } catch (const nlohmann::json::exception& e) {
          throw UsageError(std::string("cannot parse manifest: ") + e.what());
        }
        RunManifest m;
        try {
          m = manifest_from_json(j);
        } catch (const DomainError& e) {
          throw UsageError(e.what());
        }
        if (m.version != kVersion)
          err << "warning: manifest written by version " << m.version << ", running " << kVersion << '\n';
        m.version = kVersion;
        if (sim->count("--out") == 0) dir = fs::path(sim_manifest).parent_path();
        runs.push_back(m);
      } else {
        std::set<std::string> names;
        for (double a : sim_alpha) {
          RunManifest m;
          m.alpha = a;
          m.T = sim_T;
          m.n = sim_n;
          m.paths = sim_paths;
          m.seed = sim_seed;
          m.method = sim_method;
          m.output = csv_name(a, sim_method);
          if (!names.insert(m.output).second) throw UsageError("duplicate alpha " + fmt(a, "%g"));
          runs.push_back(m);
        }
      }
      if (dir.empty()) dir = ".";
      for (RunManifest& m : runs) {
        validate_manifest(m);
        m.timestamp = utc_timestamp();
      }
      std::error_code ec;
      fs::create_directories(dir, ec);
      if (ec) throw UsageError("cannot create " + dir.string() + ": " + ec.message());
      for (const RunManifest& m : runs) simulate_one(m, dir, out);
      return kOk;
    }

    if (cov->parsed()) {
      if (!(cov_alpha > 0.0) || !std::isfinite(cov_alpha)) throw UsageError("alpha must be positive");
      if (cov_mode != "quad" && !(cov_alpha <= 1.0))
        throw UsageError("closed-form covariance is available only for 0 < alpha <= 1");
      const std::vector<double> t = parse_times(cov_times);
      const AlphaParam alpha(cov_alpha);
      const auto m = static_cast<Eigen::Index>(t.size());
      Eigen::MatrixXd quad(m, m), closed(m, m);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
          const double s = t[static_cast<std::size_t>(i)], u = t[static_cast<std::size_t>(j)];
          if (cov_mode != "closed") quad(i, j) = quad(j, i) = covariance_quadrature(alpha, s, u);
          if (cov_mode != "quad") closed(i, j) = closed(j, i) = covariance_closed(alpha, s, u);
        }
      const Eigen::MatrixXd& shown = cov_mode == "closed" ? closed : quad;
      print_matrix(out, shown);
      if (cov_mode == "both") out << "max |quad - closed| = " << fmt((quad - closed).cwiseAbs().maxCoeff(), "%.3e") << '\n';
      if (!cov_out.empty()) write_matrix_csv(cov_out, t, shown);
      return kOk;
    }

    if (ver->parsed()) {
      try {
        suites::check_alphas(suite, ver_alpha);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      const auto reports = suites::run(suite, ver_alpha, ver_seed);
      if (json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) arr.push_back(to_json(r));
        out << arr.dump(2) << '\n';
      } else {
        for (const auto& r : reports) out << render(r) << '\n';
      }
      switch (analysis::combine(reports)) {
        case analysis::Verdict::Pass: return kOk;
        case analysis::Verdict::Fail: return kFail;
        case analysis::Verdict::Inconclusive: return kInconclusive;
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}

}  // namespace hfbm::cli
