#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "semibias/dataset.hpp"

namespace semibias {

// Exit codes shared by every subcommand: 0 success, 1 runtime estimation
// failure, 2 input/config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitEstimationFailure = 1;
inline constexpr int kExitInputError = 2;

// Reads an observation CSV: a header line of either `x1,..,xd` or
// `y,x1,..,xd` followed by one numeric row per observation. Throws
// ConfigError naming the offending row on malformed input.
Dataset read_data_csv(const std::string& path);

// Full command-line entry point (`simulate` / `estimate` subcommands);
// writes human output to `out` and diagnostics to `err`. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace semibias
