#include "hfbm/report.hpp"

#include <chrono>
#include <ctime>

#include "hfbm/errors.hpp"

namespace hfbm {

using nlohmann::json;

json to_json(const analysis::AnalysisReport& r) {
  json j;
  j["version"] = kVersion;
  j["name"] = r.name;
  j["inputs"] = json::object();
  for (const auto& [k, v] : r.inputs) j["inputs"][k] = v;
  if (const auto* d = std::get_if<double>(&r.estimate))
    j["estimate"] = *d;
  else
    j["estimate"] = std::get<std::vector<double>>(r.estimate);
  if (const auto* d = std::get_if<double>(&r.reference))
    j["reference"] = *d;
  else
    j["reference"] = std::get<std::string>(r.reference);
  j["tolerance"] = r.tolerance;
  j["verdict"] = analysis::to_string(r.verdict);
  j["note"] = r.note;
  return j;
}

analysis::AnalysisReport report_from_json(const json& j) {
  try {
    analysis::AnalysisReport r;
    r.name = j.at("name").get<std::string>();
    for (const auto& [k, v] : j.at("inputs").items()) r.inputs[k] = v.get<double>();
    const json& e = j.at("estimate");
    if (e.is_array())
      r.estimate = e.get<std::vector<double>>();
    else
      r.estimate = e.get<double>();
    const json& ref = j.at("reference");
    if (ref.is_string())
      r.reference = ref.get<std::string>();
    else
      r.reference = ref.get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    r.verdict = analysis::verdict_from_string(j.at("verdict").get<std::string>());
    r.note = j.value("note", "");
    return r;
  } catch (const json::exception& ex) {
    throw DomainError(std::string("malformed report: ") + ex.what());
  }
}

json to_json(const RunManifest& m) {
  return json{{"version", m.version}, {"command", m.command}, {"alpha", m.alpha},   {"T", m.T},
              {"n", m.n},             {"paths", m.paths},     {"seed", m.seed},     {"method", m.method},
              {"timestamp", m.timestamp}, {"output", m.output}};
}

RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.alpha = j.at("alpha").get<double>();
    m.T = j.at("T").get<double>();
    m.n = j.at("n").get<std::size_t>();
    m.paths = j.at("paths").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.method = j.at("method").get<std::string>();
    m.version = j.at("version").get<std::string>();
    m.timestamp = j.value("timestamp", "");
    m.output = j.value("output", "");
    return m;
  } catch (const json::exception& ex) {
    throw DomainError(std::string("malformed manifest: ") + ex.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hfbm
