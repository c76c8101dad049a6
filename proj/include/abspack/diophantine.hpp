#pragma once

#include <abspack/integer.hpp>

#include <optional>
#include <string>
#include <vector>

namespace abspack {

/// delta = gcd(s) > 0 with z^T s = delta.
struct GcdCertificate {
  BigInt delta;
  IntVector z;
};

/// Rosser-style reduction: the largest remaining |entry| is reduced modulo
/// the second largest until one nonzero entry is left. Throws ZeroVector.
GcdCertificate gcd_combination(const IntVector& s);

enum class DioStatus { independent, redundant, incompatible_real, incompatible_integer };

const char* to_string(DioStatus s);

struct DioOptions {
  std::optional<IntMatrix> H1;  // must be unimodular; default I
  std::optional<IntVector> x1;  // default 0
  bool record_history = false;
};

struct DioReport {
  std::optional<IntVector> x_particular;
  IntVector last_iterate;
  IntMatrix H_final;
  std::vector<DioStatus> eq_status;
  Index failed_row = 0;  // 1-based
  BigInt failing_delta;  // set for integer inconsistency
  BigInt failing_tau;
  std::vector<IntMatrix> H_history;  // H_1, H_2, ... when recorded
  std::vector<IntVector> x_history;
  std::string message;

  bool solvable() const { return x_particular.has_value(); }
  bool integerly_inconsistent() const {
    return !eq_status.empty() && eq_status.back() == DioStatus::incompatible_integer;
  }
};

/// Integer ABS with v_i = e_i and w_i = z_i. Exact throughout; no tolerance.
DioReport dio_solve(const IntMatrix& A, const IntVector& b, const DioOptions& options = {});

/// x_particular + H_final^T q.
IntVector dio_general_solution(const DioReport& report, const IntVector& q);

/// All integer solutions with |x|_inf <= radius, in lexicographic order.
/// Throws BudgetExceeded when n (2 radius + 1)^n exceeds `budget`.
std::vector<IntVector> enumerate_solutions_box(const IntMatrix& A, const IntVector& b, long radius,
                                               double budget = 5e7);

}  // namespace abspack
