#pragma once

#include <iosfwd>

#include "gosim/error.hpp"

namespace gosim::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kDataError = 2, kInternal = 3 };

int exit_code_for(ErrorCode code);

// Parses argv (argv[0] is the program name) and runs one subcommand.
// Normal output goes to out, diagnostics to err.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gosim::cli
