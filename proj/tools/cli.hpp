#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace copro::cli {

/// Environment variable naming a JSON file with default corpus paths/flags.
inline constexpr const char* kConfigEnv = "COPRO_CONFIG";

/// Runs one subcommand. `args` excludes the program name.
/// Exit codes: 0 success, 1 validation error, 2 usage error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace copro::cli
