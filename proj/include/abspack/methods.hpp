#pragma once

#include <abspack/integer.hpp>

#include <optional>
#include <string>
#include <vector>

namespace abspack {

/// Inputs shared by every registered method. Integer data is used by `dio`
/// when present; otherwise A and b must hold integers.
struct MethodInput {
  const Matrix& A;
  const Vector& b;
  const IntMatrix* A_int = nullptr;
  const IntVector* b_int = nullptr;
  Index kt_constraints = 0;  // KT: the last rows of A are [C 0]
  Tolerances tol;
};

struct MethodResult {
  Outcome outcome = Outcome::solved;
  std::optional<Vector> x;
  std::optional<IntVector> x_int;
  std::optional<Index> rank;
  std::uint64_t mult_count = 0;
  Index failed_step = 0;
  std::string message;
};

/// Method names:
///   huang mhuang ilu ilx iqr cgdir ostab gilu   core strategies (ilu is compact)
///   lu                                          dense LU with partial pivoting
///   dio                                         integer ABS
///   kt:a1b1 kt:a1b2 kt:a2b1 kt:a2b2[:ilx]      KT block solvers
///   absm:m=K:y=I|ata|a[:seed=grad|unit][:maxit=N]
/// Throws Usage for an unknown or malformed name.
void validate_method(const std::string& id);

/// Runs `id`. Solver errors become breakdown results; usage and shape errors
/// propagate.
MethodResult run_method(const std::string& id, const MethodInput& in);

/// Methods whose solution is the least-Euclidean-norm one from x_1 = 0.
bool is_least_norm(const std::string& id);

std::vector<std::string> default_methods(const std::string& suite);

}  // namespace abspack
