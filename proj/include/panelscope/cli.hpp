#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace panelscope::cli {

/// Seed used when neither --seed nor PANELSCOPE_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20200;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsageError = 2;

/// Runs the command line `args` (args[0] is the program name). Data goes to
/// --output, or to `out` when --output is absent; the one-line summary goes to
/// `out` when --output is given and to `err` otherwise. Failures print a
/// single `error: ...` line to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace panelscope::cli
