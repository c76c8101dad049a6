#pragma once

#include <abspack/types.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace abspack {

/// The Abaffian H_i together with the history of accepted steps.
///
/// `search[j]`, `scaling[j]` and `pivots[j]` belong to the j-th accepted
/// (non-redundant) step; `pivots[j] = v_j^T A p_j` is never zero.
struct AbaffianState {
  Matrix H;
  Index step = 1;
  std::vector<Vector> search;
  std::vector<Vector> scaling;
  std::vector<double> pivots;

  /// P = (p_1, ..., p_k) as columns.
  Matrix search_matrix() const;
  /// V = (v_1, ..., v_k) as columns.
  Matrix scaling_matrix() const;
};

/// What a strategy can see when asked for the parameters of a step.
struct StepContext {
  const Matrix& A;
  const Vector& b;
  const Vector& x;
  const AbaffianState& state;
  Index step;  // 0-based
  OpCounter& ops;
};

/// Supplies H_1, v_i, z_i and w_i. Strategies are immutable once built and
/// may be shared between concurrent solves.
class ParameterStrategy {
 public:
  virtual ~ParameterStrategy() = default;

  virtual std::string name() const = 0;

  virtual Matrix initial_H1(Index n) const { return Matrix::Identity(n, n); }

  /// Number of steps for an m x n system. The basic class processes rows.
  virtual Index step_count(Index m, Index /*n*/) const { return m; }

  /// v_i; the default is the unit vector e_i (basic class).
  virtual Vector scaling(const StepContext& ctx) const;

  /// w_i, called once s_i = H_i A^T v_i is known and nonzero.
  virtual Vector projection_seed(const StepContext& ctx, const Vector& s) const = 0;

  /// z_i; the engine uses z_i = w_i unless a strategy overrides this.
  virtual Vector direction_seed(const StepContext& ctx, const Vector& s,
                                const Vector& w) const {
    (void)ctx;
    (void)s;
    return w;
  }

  /// p_i from z_i. Default p_i = H_i^T z_i.
  virtual Vector direction(const StepContext& ctx, const Vector& s, const Vector& z,
                           OpCounter& ops) const;

  /// Abaffian update. Default is the rank-one oblique update
  /// H - H A^T v w^T H / (w^T H A^T v).
  virtual void update(Matrix& H, const Vector& s, const Vector& w, const Vector& p,
                      OpCounter& ops) const;
};

struct SolveOptions {
  Tolerances tol;
  std::optional<Vector> x1;      // default 0
  bool record_iterates = false;  // keep x_1, x_2, ... in the report
};

struct SolveReport {
  Outcome outcome = Outcome::solved;
  Index failed_step = 0;  // 1-based, 0 when solved
  std::optional<Vector> x;
  Vector last_iterate;
  Index rank = 0;
  std::vector<EquationStatus> eq_status;
  AbaffianState abaffian_final;
  std::uint64_t mult_count = 0;
  double residual_norm = 0.0;
  std::size_t peak_aux_storage = 0;  // compact paths only
  std::vector<Vector> iterates;
  std::string message;

  bool ok() const { return outcome == Outcome::solved; }
  Index redundant_count() const;
};

/// Scaled ABS iteration on A x = b. Incompatibility and parameter breakdown
/// are reported through `outcome`, with the iterates computed so far.
SolveReport abs_solve(const Matrix& A, const Vector& b, const ParameterStrategy& strategy,
                      const SolveOptions& options = {});

/// x_{m+1} + H_{m+1}^T q.
Vector general_solution(const SolveReport& report, const Vector& q);

struct ImplicitFactors {
  Matrix P;
  Matrix L;
  Matrix V;

  /// P L^{-1} V^T
  Matrix inverse() const;
};

/// V^T A P = L for a square full-rank solve; L is lower triangular.
ImplicitFactors implicit_factorization(const Matrix& A, const SolveReport& report);

/// H - H y w^T H / (w^T H y), with y the scaled row A^T v. Works for any
/// scalar type with exact or floating arithmetic; `tol` is relative to
/// |w| |H y| and may be zero for exact types.
template <typename DerivedH, typename DerivedY, typename DerivedW>
Eigen::Matrix<typename DerivedH::Scalar, Eigen::Dynamic, Eigen::Dynamic> abaffian_update(
    const Eigen::MatrixBase<DerivedH>& H, const Eigen::MatrixBase<DerivedY>& scaled_row,
    const Eigen::MatrixBase<DerivedW>& w, typename DerivedH::Scalar tol = 1e-14) {
  using Scalar = typename DerivedH::Scalar;
  using Col = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  require(H.rows() == H.cols(), "abaffian_update: H must be square");
  require(scaled_row.size() == H.cols() && w.size() == H.rows(),
          "abaffian_update: vector length mismatch");
  const Col s = H * scaled_row;
  const Scalar denom = w.dot(s);
  using std::abs;
  if (abs(denom) <= tol * w.norm() * s.norm())
    throw Error(Errc::division_by_zero, "abaffian_update: w^T H A^T v vanishes");
  const Col u = H.transpose() * w;
  return H - s * u.transpose() / denom;
}

/// Overload taking A and v explicitly.
template <typename DerivedH, typename DerivedA, typename DerivedV, typename DerivedW>
Eigen::Matrix<typename DerivedH::Scalar, Eigen::Dynamic, Eigen::Dynamic> abaffian_update(
    const Eigen::MatrixBase<DerivedH>& H, const Eigen::MatrixBase<DerivedA>& A,
    const Eigen::MatrixBase<DerivedV>& v, const Eigen::MatrixBase<DerivedW>& w,
    typename DerivedH::Scalar tol = 1e-14) {
  require(v.size() == A.rows(), "abaffian_update: v length must equal rows of A");
  return abaffian_update(H, (A.transpose() * v).eval(), w, tol);
}

/// True iff Gaussian elimination without pivoting runs to completion with
/// every pivot above `tol` times the largest entry (strong nonsingularity).
template <typename Derived>
bool check_admissible(const Eigen::MatrixBase<Derived>& Q, double tol = -1.0) {
  require(Q.rows() == Q.cols(), "check_admissible: Q must be square");
  const Index n = Q.rows();
  if (n == 0) return true;
  Eigen::MatrixXd U = Q.template cast<double>();
  const double scale = U.cwiseAbs().maxCoeff();
  if (tol < 0) tol = 1e-12 * static_cast<double>(n);
  if (scale == 0.0) return false;
  for (Index k = 0; k < n; ++k) {
    if (std::abs(U(k, k)) <= tol * scale) return false;
    for (Index i = k + 1; i < n; ++i) {
      const double f = U(i, k) / U(k, k);
      U.row(i).tail(n - k) -= f * U.row(k).tail(n - k);
    }
  }
  return true;
}

}  // namespace abspack
