#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cli.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "hfbm/report.hpp"
#include "hfbm/sampler.hpp"

namespace fs = std::filesystem;
using namespace hfbm;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("hfbm_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Rows are grid points; column 0 is t.
std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(call({}).code == cli::kUsage);
  CHECK(call({"--help"}).code == cli::kOk);
  CHECK(call({"--version"}).out.find(kVersion) != std::string::npos);
  CHECK(call({"frobnicate"}).code == cli::kUsage);
  CHECK(call({"simulate", "--n", "many"}).code == cli::kUsage);
  CHECK(call({"simulate", "--method", "fft"}).code == cli::kUsage);
  CHECK(call({"simulate", "--alpha", "0.5,0.5", "--n", "4", "--out", fresh_dir("dup").string()}).code ==
        cli::kUsage);
  CHECK(call({"cov", "--alpha", "0.5"}).code == cli::kUsage);
  CHECK(call({"cov", "--alpha", "0.5", "--times", "1,x"}).code == cli::kUsage);
  CHECK(call({"cov", "--alpha", "0.5", "--times", "1,-2"}).code == cli::kUsage);
  CHECK(call({"verify"}).code == cli::kUsage);
  CHECK(call({"verify", "--suite", "nonsense"}).code == cli::kUsage);
  CHECK(call({"verify", "--suite", "inequality", "--alpha", "0.5"}).code == cli::kUsage);
  CHECK(call({"verify", "--suite", "sonine", "--alpha", "0.5"}).code == cli::kUsage);
  CHECK(call({"verify", "--suite", "all", "--alpha", "0.5"}).code == cli::kUsage);
}

TEST_CASE("simulate writes paths and a manifest") {
  const fs::path dir = fresh_dir("sim");
  const Result r = call({"simulate", "--alpha", "1", "--n", "16", "--paths", "3", "--seed", "7", "--out", dir.string()});
  REQUIRE(r.code == cli::kOk);
  const fs::path csv = dir / "hfbm_alpha1_volterra.csv";
  const fs::path man = dir / "hfbm_alpha1_volterra.json";
  REQUIRE(fs::exists(csv));
  REQUIRE(fs::exists(man));
  CHECK(slurp(csv).rfind("t,path_0,path_1,path_2\n", 0) == 0);
  CHECK(slurp(csv).find('\r') == std::string::npos);

  const auto rows = read_csv(csv);
  REQUIRE(rows.size() == 17);
  const sampler::PathEnsemble e = sampler::sample_volterra(AlphaParam(1.0), TimeGrid::uniform(1.0, 16), 3, 7);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k][0] == e.grid[k]);
    for (Eigen::Index p = 0; p < 3; ++p)
      CHECK(rows[k][static_cast<std::size_t>(p) + 1] == (*e.bm_paths)(p, static_cast<Eigen::Index>(k)));
  }

  const RunManifest m = manifest_from_json(nlohmann::json::parse(slurp(man)));
  CHECK(m.alpha == 1.0);
  CHECK(m.n == 16);
  CHECK(m.paths == 3);
  CHECK(m.seed == 7);
  CHECK(m.method == "volterra");
  CHECK(m.output == "hfbm_alpha1_volterra.csv");
}

TEST_CASE("manifest rerun is byte identical") {
  const fs::path a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
  REQUIRE(call({"simulate", "--alpha", "0.5,1.5", "--n", "32", "--paths", "2", "--method", "cholesky", "--out",
                a.string()})
              .code == cli::kOk);
  for (const char* name : {"hfbm_alpha0.5_cholesky", "hfbm_alpha1.5_cholesky"}) {
    const fs::path man = a / (std::string(name) + ".json");
    REQUIRE(call({"simulate", "--manifest", man.string(), "--out", b.string()}).code == cli::kOk);
    CHECK(slurp(a / (std::string(name) + ".csv")) == slurp(b / (std::string(name) + ".csv")));
  }
  // Parameters and a manifest are mutually exclusive.
  CHECK(call({"simulate", "--manifest", (a / "hfbm_alpha0.5_cholesky.json").string(), "--n", "8"}).code ==
        cli::kUsage);

  std::ofstream(b / "broken.json") << "{\"alpha\": ";
  CHECK(call({"simulate", "--manifest", (b / "broken.json").string()}).code == cli::kUsage);
}

TEST_CASE("rougher orders carry more quadratic variation") {
  const fs::path dir = fresh_dir("qv");
  REQUIRE(call({"simulate", "--alpha", "0.5,1.5", "--n", "256", "--out", dir.string()}).code == cli::kOk);
  auto qv = [&](const char* file) {
    const auto rows = read_csv(dir / file);
    double s = 0.0;
    for (std::size_t k = 1; k < rows.size(); ++k) s += std::pow(rows[k][1] - rows[k - 1][1], 2);
    return s;
  };
  CHECK(qv("hfbm_alpha0.5_volterra.csv") > qv("hfbm_alpha1.5_volterra.csv"));
}

TEST_CASE("cov") {
  const Result bm = call({"cov", "--alpha", "1", "--times", "1,2,3"});
  REQUIRE(bm.code == cli::kOk);
  std::stringstream ss(bm.out);
  double v[9];
  for (double& x : v) ss >> x;
  const double want[9] = {1, 1, 1, 1, 2, 2, 1, 2, 3};
  for (int i = 0; i < 9; ++i) CHECK(std::abs(v[i] - want[i]) <= 1e-10);

  const Result both = call({"cov", "--alpha", "0.5", "--times", "0.5,1,2.5", "--mode", "both"});
  REQUIRE(both.code == cli::kOk);
  const auto pos = both.out.find("max |quad - closed| = ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(both.out.substr(pos + 22)) <= 1e-8);

  CHECK(call({"cov", "--alpha", "1.5", "--times", "1,2", "--mode", "closed"}).code == cli::kUsage);

  const fs::path dir = fresh_dir("cov");
  REQUIRE(call({"cov", "--alpha", "1.5", "--times", "1,2", "--out", (dir / "c.csv").string()}).code == cli::kOk);
  const auto rows = read_csv(dir / "c.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][1] == 1.0);
  CHECK(rows[1][2] == 2.0);
  CHECK(rows[0][2] == rows[1][1]);
}

TEST_CASE("verify") {
  const Result ineq = call({"verify", "--suite", "inequality"});
  CHECK(ineq.code == cli::kOk);
  CHECK(ineq.out.find("Pass") != std::string::npos);

  const Result son = call({"verify", "--suite", "sonine", "--alpha", "1.5"});
  CHECK(son.code == cli::kOk);
  CHECK(son.out.find("4.44288") != std::string::npos);

  const Result var = call({"verify", "--suite", "variation", "--alpha", "1.5", "--json"});
  CHECK(var.code == cli::kOk);
  const nlohmann::json arr = nlohmann::json::parse(var.out);
  REQUIRE(arr.is_array());
  CHECK(arr.size() == 4);
  for (const auto& j : arr) {
    const analysis::AnalysisReport r = report_from_json(j);
    CHECK(r.name == "variation");
    CHECK(r.verdict == analysis::Verdict::Pass);
    CHECK(r.inputs.at("alpha") == 1.5);
  }

  CHECK(call({"verify", "--suite", "memory", "--alpha", "0.5"}).code == cli::kFail);
}

TEST_CASE("executable output does not depend on the worker count") {
  const fs::path a = fresh_dir("thr_a"), b = fresh_dir("thr_b");
  const std::string exe = HFBM_EXE;
  const std::string args = " simulate --alpha 0.7 --n 64 --paths 9 --seed 3 --out ";
  REQUIRE(shell("HFBM_THREADS=1 " + exe + args + a.string() + " > /dev/null") == 0);
  REQUIRE(shell("HFBM_THREADS=4 " + exe + args + b.string() + " > /dev/null") == 0);
  CHECK(slurp(a / "hfbm_alpha0.7_volterra.csv") == slurp(b / "hfbm_alpha0.7_volterra.csv"));
  CHECK(shell(exe + " verify --suite bogus 2> /dev/null") == 2);
}
