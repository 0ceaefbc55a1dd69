#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmin::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kParse = 2, kRegression = 3 };

/// Runs one command; `args` excludes the program name. Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmin::cli
