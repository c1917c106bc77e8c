#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hprr::cli {

/// Runs one subcommand. Returns 0 when no errors occurred; otherwise writes a
/// JSON error summary to err and returns 1 (2 for usage errors).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hprr::cli
