#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace wsp::cli {

/// Runs the command line `args` (without the program name). Exit codes:
/// 0 satisfiable / valid / success, 1 unsatisfiable / invalid, 2 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wsp::cli
