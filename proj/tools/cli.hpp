#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hbl::cli {

enum ExitCode : int { kFeasible = 0, kInfeasible = 1, kUndecided = 2, kInputError = 64, kInternalError = 70 };

/// Runs the `hbl` command line. Reports go to `out` (or --out), diagnostics
/// to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hbl::cli
