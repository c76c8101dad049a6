#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace abspack {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Classification of one processed equation (or one step, for methods whose
/// steps are not tied to rows).
enum class EquationStatus { independent, redundant, incompatible };

/// How a solve ended.
enum class Outcome { solved, incompatible, breakdown };

const char* to_string(EquationStatus s);
const char* to_string(Outcome o);

enum class Errc {
  shape_mismatch,
  incompatible_system,
  strategy_breakdown,
  division_by_zero,
  not_full_rank,
  unsupported_shape,
  dependent_row,
  regularity_failure,
  zero_vector,
  budget_exceeded,
  singular_kt,
  singular,
  stagnation,
  not_unimodular,
  unrepresentable_entry,
  parse_error,
  usage,
};

const char* to_string(Errc e);

/// Library error. `index` is the 1-based equation/step that failed, or 0 when
/// the error is not tied to a step.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, Index index = 0)
      : std::runtime_error(what), code_(code), index_(index) {}

  Errc code() const noexcept { return code_; }
  Index index() const noexcept { return index_; }

 private:
  Errc code_;
  Index index_;
};

/// Zero tests used by the floating-point engines. A negative value selects
/// the default `1e-12 * n`.
struct Tolerances {
  double dependency = -1.0;
  double residual = -1.0;

  double dependency_for(Index n) const {
    return dependency >= 0 ? dependency : 1e-12 * static_cast<double>(n);
  }
  double residual_for(Index n) const {
    return residual >= 0 ? residual : 1e-12 * static_cast<double>(n);
  }
};

/// Counts scalar multiplications (divisions included) in solver inner loops.
struct OpCounter {
  std::uint64_t mults = 0;
  void add(Index k) noexcept { mults += static_cast<std::uint64_t>(k); }
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(Errc::shape_mismatch, what);
}

}  // namespace abspack
