#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qvertex::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kSuccess = 0,
    kValidationFailure = 1,
    kUsageError = 2,
};

/// Runs subcommands check / sweep / classify / design. args excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qvertex::cli
