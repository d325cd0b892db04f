#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cloneforge::cli {

/// Runs the command line `args` (program name first). Results go to `out`
/// (or the --output file), diagnostics to `err`. Returns the exit code:
/// 0 pass/true/Minimal, 1 fail/false/NotMinimal, 2 inconclusive or no
/// samples, 3 input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cloneforge::cli
