#include <abspack/matrix_abs.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace abspack {

Vector flatten(const Matrix& X) {
  const Index r = X.rows();
  const Index c = X.cols();
  Vector x(r * c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) x(i * c + j) = X(i, j);
  return x;
}

Matrix unflatten(const Vector& x, Index n) {
  require(x.size() == n * n, "unflatten: length must be n^2");
  Matrix X(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) X(i, j) = x(i * n + j);
  return X;
}

Matrix MatrixSystem::flattened_matrix() const {
  const Index N = n() * n();
  Matrix M(static_cast<Index>(terms.size()), N);
  for (std::size_t i = 0; i < terms.size(); ++i)
    M.row(static_cast<Index>(i)) = flatten(terms[i]).transpose();
  return M;
}

Matrix MatOperator::apply(const Matrix& X) const {
  require(X.rows() == n_ && X.cols() == n_, "MatOperator::apply: shape mismatch");
  return unflatten(flat_ * flatten(X), n_);
}

Matrix MatOperator::apply_transpose(const Matrix& X) const {
  require(X.rows() == n_ && X.cols() == n_, "MatOperator::apply_transpose: shape mismatch");
  return unflatten(flat_.transpose() * flatten(X), n_);
}

Matrix MatOperator::element(Index i, Index j) const {
  require(i >= 0 && i < n_ && j >= 0 && j < n_, "MatOperator::element: index out of range");
  return unflatten(flat_.row(i * n_ + j).transpose(), n_);
}

MatSolveReport mat_abs_solve(const MatrixSystem& sys, const MatSolveOptions& options) {
  const Index m = static_cast<Index>(sys.terms.size());
  require(m >= 1, "mat_abs_solve: no equations");
  const Index n = sys.n();
  require(n >= 1, "mat_abs_solve: empty matrices");
  for (const Matrix& T : sys.terms)
    require(T.rows() == n && T.cols() == n, "mat_abs_solve: all terms must be n x n");
  require(sys.rhs.size() == m, "mat_abs_solve: right-hand side length must equal equation count");

  const Index N = n * n;
  const double tol_dep = options.tol.dependency_for(N);
  const double tol_res = options.tol.residual_for(N);

  MatSolveReport rep;
  MatOperator H(n);
  const double h1norm = H.flat().norm();
  Matrix X = Matrix::Zero(n, n);
  if (options.record_iterates) rep.iterates.push_back(X);

  auto fail = [&](Outcome o, Index k, const std::string& msg) {
    rep.outcome = o;
    rep.failed_step = k + 1;
    rep.message = msg;
  };

  for (Index k = 0; k < m; ++k) {
    const Matrix& Ak = sys.terms[static_cast<std::size_t>(k)];
    const double bk = sys.rhs(k);
    const Matrix S = H.apply(Ak);
    const double tau = trace_dot(Ak, X) - bk;
    const double anorm = Ak.norm();

    if (S.norm() <= tol_dep * anorm * std::max(H.flat().norm(), h1norm)) {
      if (std::abs(tau) <= tol_res * (anorm * X.norm() + std::abs(bk))) {
        rep.eq_status.push_back(EquationStatus::redundant);
        if (options.record_iterates) rep.iterates.push_back(X);
        continue;
      }
      rep.eq_status.push_back(EquationStatus::incompatible);
      std::ostringstream msg;
      msg << "equation " << k + 1 << " is incompatible with the preceding equations";
      fail(Outcome::incompatible, k, msg.str());
      break;
    }

    Matrix W;
    if (options.params == MatParams::huang) {
      W = Ak;
    } else {
      if (k >= N) {
        fail(Outcome::breakdown, k, "implicit LU parameters exhausted");
        break;
      }
      W = Matrix::Zero(n, n);
      W(k / n, k % n) = 1.0;
    }

    const double ws = trace_dot(W, S);
    const Matrix P = H.apply_transpose(W);  // Z = W
    const double pivot = trace_dot(Ak, P);
    if (std::abs(ws) <= tol_dep * W.norm() * S.norm() ||
        std::abs(pivot) <= tol_dep * anorm * P.norm()) {
      std::ostringstream msg;
      msg << "step " << k + 1 << ": A^k . P^k vanishes";
      fail(Outcome::breakdown, k, msg.str());
      break;
    }

    X -= (tau / pivot) * P;
    H.flat().noalias() -= (flatten(S) / ws) * flatten(P).transpose();

    rep.eq_status.push_back(EquationStatus::independent);
    ++rep.rank;
    if (options.record_iterates) rep.iterates.push_back(X);
  }

  rep.last_iterate = X;
  if (rep.ok()) rep.X = X;
  rep.H_final = std::move(H);
  return rep;
}

Matrix mat_general_solution(const MatSolveReport& report, const Matrix& W) {
  if (!report.X) throw Error(Errc::incompatible_system, "mat_general_solution: solve did not succeed");
  return *report.X + report.H_final.apply_transpose(W);
}

MatrixSystem quasi_newton_system(const Vector& delta, const Vector& r,
                                 const std::vector<QnConstraint>& constraints) {
  const Index n = delta.size();
  require(n >= 1 && r.size() == n, "quasi_newton_solve: delta and r must have equal length");
  if (delta.isZero(0.0)) throw Error(Errc::zero_vector, "quasi_newton_solve: delta is zero");

  MatrixSystem sys;
  std::vector<double> rhs;
  for (Index i = 0; i < n; ++i) {
    Matrix T = Matrix::Zero(n, n);
    T.row(i) = delta.transpose();
    sys.terms.push_back(std::move(T));
    rhs.push_back(r(i));
  }
  for (const QnConstraint& c : constraints) {
    if (c.kind == QnConstraint::Kind::symmetry) {
      for (Index j = 0; j < n; ++j)
        for (Index k = j + 1; k < n; ++k) {
          Matrix T = Matrix::Zero(n, n);
          T(j, k) = 1.0;
          T(k, j) = -1.0;
          sys.terms.push_back(std::move(T));
          rhs.push_back(0.0);
        }
    } else {
      require(c.j >= 0 && c.j < n && c.k >= 0 && c.k < n,
              "quasi_newton_solve: fixed entry out of range");
      Matrix T = Matrix::Zero(n, n);
      T(c.j, c.k) = 1.0;
      sys.terms.push_back(std::move(T));
      rhs.push_back(c.value);
    }
  }
  sys.rhs = Eigen::Map<const Vector>(rhs.data(), static_cast<Index>(rhs.size()));
  return sys;
}

Matrix quasi_newton_solve(const Vector& delta, const Vector& r,
                          const std::vector<QnConstraint>& constraints) {
  const MatSolveReport rep = mat_abs_solve(quasi_newton_system(delta, r, constraints));
  if (rep.outcome == Outcome::incompatible)
    throw Error(Errc::incompatible_system,
                "quasi_newton_solve: constraints contradict the secant equation", rep.failed_step);
  if (!rep.ok()) throw Error(Errc::strategy_breakdown, rep.message, rep.failed_step);
  return *rep.X;
}

}  // namespace abspack
