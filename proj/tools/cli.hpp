#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace krange::cli {

/// Exit codes: 0 success, 1 mathematical failure, 2 usage / I/O / parse error.
enum ExitCode : int { kOk = 0, kMathFailure = 1, kIoFailure = 2 };

/// Runs one command line (args excludes the program name). `env_tol` is the
/// value of KRANGE_TOL, if set; --tol flags are applied after it.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const char* env_tol = nullptr);

}  // namespace krange::cli
