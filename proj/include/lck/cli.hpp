#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lck {

/// Exit codes of the hopf-lck tool.
enum ExitCode : int { exit_pass = 0, exit_failure = 1, exit_config = 2 };

/// Runs one command. JSON goes to `out` (or --out), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lck
