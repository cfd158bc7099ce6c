#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace spnd::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2, kNotSeriesParallel = 3 };

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err` as `ERROR <code> <message>`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// `a..b` (inclusive, empty when b < a) or a single seed. Throws std::invalid_argument.
std::vector<std::uint64_t> parse_seed_range(const std::string& text);

}  // namespace spnd::cli
