#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace verlinde::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kNotAdmissible = 1;
inline constexpr int kConsistencyFailure = 2;
inline constexpr int kUsageError = 3;

/// Runs the command line interface. `args` excludes the program name.
/// Output is buffered and written to `out` once the command completes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace verlinde::cli
