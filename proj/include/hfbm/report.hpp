#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "hfbm/analysis.hpp"

namespace hfbm {

inline constexpr const char* kVersion = "1.0.0";

struct RunManifest {
  std::string command = "simulate";
  double alpha = 1.0;
  double T = 1.0;
  std::size_t n = 1024;
  std::size_t paths = 1;
  std::uint64_t seed = 42;
  std::string method = "volterra";
  std::string version = kVersion;
  std::string timestamp;
  std::string output;  // CSV file name, relative to the manifest
};

nlohmann::json to_json(const analysis::AnalysisReport& r);
analysis::AnalysisReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

// UTC, ISO 8601.
std::string utc_timestamp();

}  // namespace hfbm
