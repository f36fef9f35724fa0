#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hfbm::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFail = 1;
inline constexpr int kUsage = 2;
inline constexpr int kNumeric = 3;
inline constexpr int kInconclusive = 4;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hfbm::cli
