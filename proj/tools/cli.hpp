#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace natstrat::cli {

enum ExitCode { kOk = 0, kPropertyFalse = 1, kUsageError = 2, kResourceLimit = 3 };

/// Runs one command line; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace natstrat::cli
