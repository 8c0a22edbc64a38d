#pragma once

#include <iosfwd>

namespace pouw::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInvalid = 1,
    kUsage = 2,
    kBudgetExhausted = 3,
};

/// Runs one command. Records go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pouw::cli
