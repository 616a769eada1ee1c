#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hcomp/spaces.hpp"

namespace hcomp::cli {

/// Exit codes: 0 every check passed, 1 a check failed or was inconclusive,
/// 2 usage or configuration error.
inline constexpr int kPass = 0;
inline constexpr int kFail = 1;
inline constexpr int kUsage = 2;

/// Runs one subcommand. `args` excludes the program name. The JSON report
/// goes to `out` (and to --report when given); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Fixture ids, CSV paths, and "ball:G:R" (a ball of G with its word
/// metric) or "ball:G:R:H" (the same points measured in H).
PointCloud resolve_cloud(const std::string& id);

}  // namespace hcomp::cli
