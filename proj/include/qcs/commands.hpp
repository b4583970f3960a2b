#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qcs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the qcs tool. args excludes the program name.
/// Subcommands: run, sweep, best, plot.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcs
