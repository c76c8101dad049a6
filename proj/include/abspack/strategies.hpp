#pragma once

#include <abspack/core.hpp>

#include <memory>
#include <optional>
#include <string_view>

namespace abspack {

enum class Family {
  huang,
  modified_huang,
  implicit_lu,
  implicit_lx,
  implicit_qr,
  conjugate_direction,
  optimally_stable,
  gilu,
};

/// A named parameter choice. `H1` is used by the GILU family only.
struct StrategyKind {
  Family family = Family::huang;
  Matrix H1;
  bool second_reprojection = false;  // modified Huang only

  static StrategyKind gilu(Matrix H1) { return {Family::gilu, std::move(H1), false}; }
};

const char* to_string(Family f);
std::optional<Family> parse_family(std::string_view name);

std::unique_ptr<ParameterStrategy> make_strategy(const StrategyKind& kind);

inline std::unique_ptr<ParameterStrategy> make_strategy(Family f) {
  return make_strategy(StrategyKind{f, {}, false});
}

/// Explicit parameter matrices: v_i = V e_i, z_i = Z e_i, w_i = W e_i.
class FixedParameters final : public ParameterStrategy {
 public:
  FixedParameters(Matrix H1, Matrix V, Matrix Z, Matrix W);

  std::string name() const override { return "fixed"; }
  Matrix initial_H1(Index n) const override;
  Index step_count(Index m, Index n) const override;
  Vector scaling(const StepContext& ctx) const override;
  Vector projection_seed(const StepContext& ctx, const Vector& s) const override;
  Vector direction_seed(const StepContext& ctx, const Vector& s, const Vector& w) const override;

 private:
  Matrix H1_, V_, Z_, W_;
};

/// p = H(H a), reprojected once more when `second_reprojection` is set.
/// Throws DependentRow when the projection is negligible against |a|.
Vector modified_huang_direction(const Matrix& H, const Vector& a, double tol = 1e-12,
                                bool second_reprojection = false);

/// H - p p^T / p^T p
Matrix modified_huang_update(const Matrix& H, const Vector& p);

/// Abaffian of the implicit LU method in compact form. After r accepted
/// pivots, H (in pivoted coordinates) is zero in its first r rows and equals
/// [K | I] below, with K of shape (n - r) x r. K is held column-major in a
/// single buffer of floor(n^2/4) entries and compacted in place each step.
class CompactLUState {
 public:
  explicit CompactLUState(Index n);

  Index n() const { return n_; }
  Index rank() const { return r_; }
  double K(Index row, Index col) const { return buf_[col * (n_ - r_) + row]; }
  const std::vector<Index>& permutation() const { return perm_; }

  std::size_t live_entries() const {
    return static_cast<std::size_t>((n_ - r_) * r_);
  }
  std::size_t capacity() const { return buf_.size(); }

  /// Full n x n Abaffian in original coordinates.
  Matrix abaffian() const;

 private:
  friend SolveReport implicit_lu_solve(const Matrix&, const Vector&, bool, const Tolerances&);

  Index n_;
  Index r_ = 0;
  std::vector<double> buf_;
  std::vector<Index> perm_;
};

/// Implicit LU on the compact Abaffian. Without pivoting a vanishing leading
/// pivot ends the solve as a breakdown (regularity failure); with
/// `column_pivoting` the largest |s_k| is used instead.
SolveReport implicit_lu_solve(const Matrix& A, const Vector& b, bool column_pivoting = false,
                              const Tolerances& tol = {});

/// Generalized implicit LU in the n-vector form: u_j = H1^T z_j, then
/// u_j <- u_j - (a_i^T u_j / a_i^T u_i) u_i. The search vectors are those of
/// the GILU subclass started from Z^T H1. Forming H1^T Z is parameter
/// setup and is not counted in mult_count.
SolveReport gilu_vector_solve(const Matrix& A, const Vector& b, const Matrix& H1, const Matrix& Z,
                              const Tolerances& tol = {});

}  // namespace abspack
