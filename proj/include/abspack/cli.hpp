#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace abspack {

/// Exit statuses of abs-solve.
namespace exit_code {
inline constexpr int solved = 0;
inline constexpr int incompatible = 1;
inline constexpr int breakdown = 2;
inline constexpr int usage = 64;
inline constexpr int parse_error = 65;
}  // namespace exit_code

/// abs-solve entry point; `args` excludes the program name.
///   abs-solve solve MATRIX RHS [--method M] [--tol T] [--constraints K] [--out FILE]
///   abs-solve bench [--suite S] [--methods a,b] [--sizes n1,n2] [--seed N]
///                   [--threads N] [--timing] [--out FILE]
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace abspack
