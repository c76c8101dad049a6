#pragma once

#include <abspack/types.hpp>

#include <optional>
#include <string>
#include <vector>

namespace abspack {

/// A . B = tr(A^T B)
template <typename DA, typename DB>
typename DA::Scalar trace_dot(const Eigen::MatrixBase<DA>& A, const Eigen::MatrixBase<DB>& B) {
  require(A.rows() == B.rows() && A.cols() == B.cols(), "trace_dot: shape mismatch");
  return A.cwiseProduct(B).sum();
}

/// Row-major vec: X(i, j) -> x(i n + j).
Vector flatten(const Matrix& X);
Matrix unflatten(const Vector& x, Index n);

/// A^i . X = b_i, i = 1..m, every A^i n x n.
struct MatrixSystem {
  std::vector<Matrix> terms;
  Vector rhs;

  Index n() const { return terms.empty() ? 0 : terms.front().rows(); }
  /// Row i is vec(A^i)^T.
  Matrix flattened_matrix() const;
};

/// Linear operator on n x n matrices stored flat as n^2 x n^2.
/// (H o X)(i, j) = element(i, j) . X.
class MatOperator {
 public:
  MatOperator() = default;
  explicit MatOperator(Index n) : n_(n), flat_(Matrix::Identity(n * n, n * n)) {}

  Index n() const { return n_; }
  const Matrix& flat() const { return flat_; }
  Matrix& flat() { return flat_; }

  Matrix apply(const Matrix& X) const;
  Matrix apply_transpose(const Matrix& X) const;
  /// The n x n matrix in position (i, j) of the matrix-of-matrices view.
  Matrix element(Index i, Index j) const;

 private:
  Index n_ = 0;
  Matrix flat_;
};

enum class MatParams {
  huang,        // Z^k = W^k = A^k
  implicit_lu,  // Z^k = W^k = E_k, the k-th basis matrix in row-major order
};

struct MatSolveOptions {
  MatParams params = MatParams::huang;
  Tolerances tol;
  bool record_iterates = false;
};

struct MatSolveReport {
  Outcome outcome = Outcome::solved;
  Index failed_step = 0;  // 1-based
  std::optional<Matrix> X;
  Matrix last_iterate;
  std::vector<EquationStatus> eq_status;
  Index rank = 0;
  MatOperator H_final;
  std::vector<Matrix> iterates;
  std::string message;

  bool ok() const { return outcome == Outcome::solved; }
};

/// Matrix-space ABS: S = H o A^k, P = H^T o Z^k,
/// X <- X - (A^k . X - b_k)/(A^k . P) P, H <- H - S (H^T o W^k)^T / (W^k . S).
MatSolveReport mat_abs_solve(const MatrixSystem& sys, const MatSolveOptions& options = {});

/// X + H^T o W
Matrix mat_general_solution(const MatSolveReport& report, const Matrix& W);

struct QnConstraint {
  enum class Kind { symmetry, fixed_entry } kind = Kind::symmetry;
  Index j = 0;  // 0-based, fixed_entry only
  Index k = 0;
  double value = 0.0;

  static QnConstraint symmetry() { return {}; }
  static QnConstraint fixed(Index j, Index k, double value) {
    return {Kind::fixed_entry, j, k, value};
  }
};

/// Least-Frobenius-norm B with B delta = r subject to linear constraints.
/// Throws IncompatibleSystem when the constraints contradict the secant
/// equation.
Matrix quasi_newton_solve(const Vector& delta, const Vector& r,
                          const std::vector<QnConstraint>& constraints = {});

/// The matrix system quasi_newton_solve hands to mat_abs_solve.
MatrixSystem quasi_newton_system(const Vector& delta, const Vector& r,
                                 const std::vector<QnConstraint>& constraints);

}  // namespace abspack
