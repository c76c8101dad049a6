#include <abspack/core.hpp>

#include <algorithm>
#include <optional>
#include <sstream>

namespace abspack {

const char* to_string(EquationStatus s) {
  switch (s) {
    case EquationStatus::independent: return "independent";
    case EquationStatus::redundant: return "redundant";
    case EquationStatus::incompatible: return "incompatible";
  }
  return "?";
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::solved: return "solved";
    case Outcome::incompatible: return "incompatible";
    case Outcome::breakdown: return "breakdown";
  }
  return "?";
}

const char* to_string(Errc e) {
  switch (e) {
    case Errc::shape_mismatch: return "shape mismatch";
    case Errc::incompatible_system: return "incompatible system";
    case Errc::strategy_breakdown: return "strategy breakdown";
    case Errc::division_by_zero: return "division by zero";
    case Errc::not_full_rank: return "not full rank";
    case Errc::unsupported_shape: return "unsupported shape";
    case Errc::dependent_row: return "dependent row";
    case Errc::regularity_failure: return "regularity failure";
    case Errc::zero_vector: return "zero vector";
    case Errc::budget_exceeded: return "budget exceeded";
    case Errc::singular_kt: return "singular KT system";
    case Errc::singular: return "singular";
    case Errc::stagnation: return "stagnation";
    case Errc::not_unimodular: return "not unimodular";
    case Errc::unrepresentable_entry: return "unrepresentable entry";
    case Errc::parse_error: return "parse error";
    case Errc::usage: return "usage";
  }
  return "?";
}

namespace {

Matrix columns_of(const std::vector<Vector>& cols, Index rows) {
  Matrix M(rows, static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) M.col(static_cast<Index>(j)) = cols[j];
  return M;
}

// Index k when v == e_k exactly.
std::optional<Index> unit_index(const Vector& v) {
  std::optional<Index> k;
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) == 0.0) continue;
    if (v(i) != 1.0 || k) return std::nullopt;
    k = i;
  }
  return k;
}

bool all_finite(const Matrix& M) { return M.allFinite(); }

}  // namespace

Matrix AbaffianState::search_matrix() const { return columns_of(search, H.rows()); }

Matrix AbaffianState::scaling_matrix() const {
  return columns_of(scaling, scaling.empty() ? 0 : scaling.front().size());
}

Index SolveReport::redundant_count() const {
  Index k = 0;
  for (auto s : eq_status)
    if (s == EquationStatus::redundant) ++k;
  return k;
}

Vector ParameterStrategy::scaling(const StepContext& ctx) const {
  return Vector::Unit(ctx.A.rows(), ctx.step);
}

Vector ParameterStrategy::direction(const StepContext& ctx, const Vector& /*s*/,
                                    const Vector& z, OpCounter& ops) const {
  const Matrix& H = ctx.state.H;
  if (auto k = unit_index(z)) return H.row(*k).transpose();
  ops.add(H.size());
  return H.transpose() * z;
}

void ParameterStrategy::update(Matrix& H, const Vector& s, const Vector& w, const Vector& /*p*/,
                               OpCounter& ops) const {
  const Index n = H.rows();
  Vector u;
  double denom;
  if (auto k = unit_index(w)) {
    u = H.row(*k).transpose();
    denom = s(*k);
  } else {
    u = H.transpose() * w;
    denom = w.dot(s);
    ops.add(H.size() + n);
  }
  const Vector f = s / denom;
  ops.add(n);
  H.noalias() -= f * u.transpose();
  ops.add(H.size());
}

SolveReport abs_solve(const Matrix& A, const Vector& b, const ParameterStrategy& strategy,
                      const SolveOptions& options) {
  const Index m = A.rows();
  const Index n = A.cols();
  require(m >= 1 && n >= 1, "abs_solve: empty matrix");
  require(b.size() == m, "abs_solve: right-hand side length must equal rows of A");
  require(all_finite(A) && b.allFinite(), "abs_solve: non-finite input");

  const double tol_dep = options.tol.dependency_for(n);
  const double tol_res = options.tol.residual_for(n);

  SolveReport rep;
  AbaffianState& st = rep.abaffian_final;
  st.H = strategy.initial_H1(n);
  require(st.H.rows() == n && st.H.cols() == n, "abs_solve: H1 must be n x n");

  // Zero tests scale with the larger of |H_i| and |H_1|: H_i itself tends to
  // zero once n independent rows have been processed.
  const double h1norm = st.H.norm();

  Vector x = options.x1 ? *options.x1 : Vector::Zero(n);
  require(x.size() == n, "abs_solve: x1 length must equal columns of A");
  if (options.record_iterates) rep.iterates.push_back(x);

  OpCounter ops;
  auto fail = [&](Outcome o, Index i, const std::string& msg) {
    rep.outcome = o;
    rep.failed_step = i + 1;
    rep.message = msg;
  };

  const Index steps = strategy.step_count(m, n);
  for (Index i = 0; i < steps; ++i) {
    st.step = i + 1;
    const StepContext ctx{A, b, x, st, i, ops};
    try {
      const Vector v = strategy.scaling(ctx);
      require(v.size() == m, "abs_solve: scaling vector has wrong length");

      Vector y;
      double vb;
      if (auto k = unit_index(v)) {
        y = A.row(*k).transpose();
        vb = b(*k);
      } else {
        y = A.transpose() * v;
        vb = v.dot(b);
        ops.add(m * n + m);
      }
      const Vector s = st.H * y;
      ops.add(n * n);
      const double tau = y.dot(x) - vb;
      ops.add(n);

      const double ynorm = y.norm();
      if (s.norm() <= tol_dep * ynorm * std::max(st.H.norm(), h1norm)) {
        if (std::abs(tau) <= tol_res * (ynorm * x.norm() + std::abs(vb))) {
          rep.eq_status.push_back(EquationStatus::redundant);
          if (options.record_iterates) rep.iterates.push_back(x);
          continue;
        }
        rep.eq_status.push_back(EquationStatus::incompatible);
        std::ostringstream msg;
        msg << "equation " << i + 1 << " is incompatible with the preceding equations";
        fail(Outcome::incompatible, i, msg.str());
        break;
      }

      const Vector w = strategy.projection_seed(ctx, s);
      require(w.size() == n, "abs_solve: w has wrong length");
      const double ws = w.dot(s);
      if (std::abs(ws) <= tol_dep * w.norm() * s.norm()) {
        std::ostringstream msg;
        msg << "step " << i + 1 << ": w^T H A^T v vanishes";
        fail(Outcome::breakdown, i, msg.str());
        break;
      }
      const Vector z = strategy.direction_seed(ctx, s, w);
      const Vector p = strategy.direction(ctx, s, z, ops);
      const double pivot = y.dot(p);
      ops.add(n);
      if (std::abs(pivot) <= tol_dep * ynorm * p.norm()) {
        std::ostringstream msg;
        msg << "step " << i + 1 << ": v^T A H^T z vanishes";
        fail(Outcome::breakdown, i, msg.str());
        break;
      }
      const double alpha = tau / pivot;
      x -= alpha * p;
      ops.add(n + 1);
      strategy.update(st.H, s, w, p, ops);

      st.search.push_back(p);
      st.scaling.push_back(v);
      st.pivots.push_back(pivot);
      rep.eq_status.push_back(EquationStatus::independent);
      ++rep.rank;
      if (options.record_iterates) rep.iterates.push_back(x);
    } catch (const Error& e) {
      if (e.code() != Errc::strategy_breakdown && e.code() != Errc::dependent_row &&
          e.code() != Errc::regularity_failure)
        throw;
      fail(Outcome::breakdown, i, e.what());
      break;
    }
  }

  rep.last_iterate = x;
  if (rep.ok()) rep.x = x;
  rep.residual_norm = (A * x - b).norm();
  rep.mult_count = ops.mults;
  return rep;
}

Vector general_solution(const SolveReport& report, const Vector& q) {
  if (!report.x) throw Error(Errc::incompatible_system, "general_solution: solve did not succeed");
  const Matrix& H = report.abaffian_final.H;
  require(q.size() == H.rows(), "general_solution: q length must equal n");
  return *report.x + H.transpose() * q;
}

Matrix ImplicitFactors::inverse() const {
  const Matrix Linv_Vt = L.triangularView<Eigen::Lower>().solve(V.transpose());
  return P * Linv_Vt;
}

ImplicitFactors implicit_factorization(const Matrix& A, const SolveReport& report) {
  const Index n = A.cols();
  require(A.rows() == n, "implicit_factorization: A must be square");
  if (!report.ok() || report.rank < n)
    throw Error(Errc::not_full_rank, "implicit_factorization: solve is not full rank");
  ImplicitFactors f;
  f.P = report.abaffian_final.search_matrix();
  f.V = report.abaffian_final.scaling_matrix();
  require(f.V.rows() == A.rows(), "implicit_factorization: scaling vectors do not match A");
  f.L = f.V.transpose() * A * f.P;
  return f;
}

}  // namespace abspack
