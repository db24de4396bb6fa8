#pragma once

#include <iosfwd>

namespace mva::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2 };

/// Runs the command line front end. Results go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace mva::cli
