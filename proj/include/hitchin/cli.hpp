#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hitchin {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int { kExitPass = 0, kExitVerificationFailure = 1, kExitInputError = 2, kExitNumericalFailure = 3 };

/// Rewrites `key=value` tokens as `--key value` (`-k value` for one-letter
/// keys); underscores in keys become dashes.
std::vector<std::string> expand_key_value(const std::vector<std::string>& args);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out` unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hitchin
