#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace decoh::cli {

// Exit codes of the command-line contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs the `decoh` command line; argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// Replaces `--config PATH` with the file's `key=value` entries as flags placed
/// right after the subcommand, so later command-line flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& argv);

} // namespace decoh::cli
