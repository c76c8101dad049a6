#include <abspack/strategies.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace abspack {

CompactLUState::CompactLUState(Index n)
    : n_(n), buf_(static_cast<std::size_t>(n * n / 4)), perm_(static_cast<std::size_t>(n)) {
  std::iota(perm_.begin(), perm_.end(), Index{0});
}

Matrix CompactLUState::abaffian() const {
  Matrix H = Matrix::Zero(n_, n_);
  for (Index j = r_; j < n_; ++j) {
    const Index pj = perm_[static_cast<std::size_t>(j)];
    for (Index c = 0; c < r_; ++c) H(pj, perm_[static_cast<std::size_t>(c)]) = K(j - r_, c);
    H(pj, pj) = 1.0;
  }
  return H;
}

// Column c of K occupies buf[c*L, c*L + L) where L = n - r is the number of
// live rows. Each accepted pivot drops the first row of every column, so the
// next layout has stride L - 1 and every column moves toward the front; a
// forward sweep compacts in place.
SolveReport implicit_lu_solve(const Matrix& A, const Vector& b, bool column_pivoting,
                              const Tolerances& tol) {
  const Index m = A.rows();
  const Index n = A.cols();
  require(m >= 1 && n >= 1, "implicit_lu_solve: empty matrix");
  require(b.size() == m, "implicit_lu_solve: right-hand side length must equal rows of A");

  const double tol_dep = tol.dependency_for(n);
  const double tol_res = tol.residual_for(n);

  CompactLUState st(n);
  auto& buf = st.buf_;
  auto& perm = st.perm_;
  std::vector<double> s(static_cast<std::size_t>(n));
  std::vector<double> xh(static_cast<std::size_t>(n), 0.0);
  std::vector<Vector> search;
  std::vector<double> pivots;
  std::vector<Index> pivot_rows;

  SolveReport rep;
  OpCounter ops;
  double kmax = 0.0;
  std::size_t peak = 0;

  auto fail = [&](Outcome o, Index i, const std::string& msg) {
    rep.outcome = o;
    rep.failed_step = i + 1;
    rep.message = msg;
  };

  for (Index i = 0; i < m; ++i) {
    const Index r = st.r_;
    const Index L = n - r;
    const auto row = A.row(i);

    for (Index t = 0; t < L; ++t) s[t] = row(perm[r + t]);
    for (Index c = 0; c < r; ++c) {
      const double ac = row(perm[c]);
      const double* col = buf.data() + c * L;
      for (Index t = 0; t < L; ++t) s[t] += col[t] * ac;
    }
    ops.add(r * L);

    double tau = -b(i);
    for (Index c = 0; c < r; ++c) tau += row(perm[c]) * xh[c];
    ops.add(r);

    peak = std::max(peak, static_cast<std::size_t>(L * r + L));

    double snorm = 0.0;
    for (Index t = 0; t < L; ++t) snorm += s[t] * s[t];
    snorm = std::sqrt(snorm);
    const double anorm = row.norm();
    const double hscale = std::sqrt(static_cast<double>(L) * (1.0 + static_cast<double>(r) * kmax * kmax));

    if (snorm <= tol_dep * anorm * hscale) {
      double xnorm = 0.0;
      for (double v : xh) xnorm += v * v;
      if (std::abs(tau) <= tol_res * (anorm * std::sqrt(xnorm) + std::abs(b(i)))) {
        rep.eq_status.push_back(EquationStatus::redundant);
        continue;
      }
      rep.eq_status.push_back(EquationStatus::incompatible);
      std::ostringstream msg;
      msg << "equation " << i + 1 << " is incompatible with the preceding equations";
      fail(Outcome::incompatible, i, msg.str());
      break;
    }

    if (column_pivoting) {
      Index piv = 0;
      for (Index t = 1; t < L; ++t)
        if (std::abs(s[t]) > std::abs(s[piv])) piv = t;
      if (piv != 0) {
        std::swap(s[0], s[piv]);
        for (Index c = 0; c < r; ++c) std::swap(buf[c * L], buf[c * L + piv]);
        std::swap(perm[r], perm[r + piv]);
        std::swap(xh[r], xh[r + piv]);
      }
    } else if (std::abs(s[0]) <= tol_dep * snorm) {
      std::ostringstream msg;
      msg << "leading principal minor of order " << r + 1 << " vanishes at equation " << i + 1;
      fail(Outcome::breakdown, i, msg.str());
      break;
    }

    const double d = s[0];
    const double alpha = tau / d;
    ops.add(1);

    Vector p = Vector::Zero(n);
    for (Index c = 0; c < r; ++c) p(perm[c]) = buf[c * L];
    p(perm[r]) = 1.0;
    search.push_back(std::move(p));
    pivots.push_back(d);
    pivot_rows.push_back(i);

    for (Index c = 0; c < r; ++c) xh[c] -= alpha * buf[c * L];
    xh[r] -= alpha;
    ops.add(r);

    for (Index t = 1; t < L; ++t) s[t] /= d;
    ops.add(L - 1);

    for (Index c = 0; c < r; ++c) {
      const double head = buf[c * L];
      const double* src = buf.data() + c * L + 1;
      double* dst = buf.data() + c * (L - 1);
      for (Index t = 0; t < L - 1; ++t) {
        dst[t] = src[t] - s[t + 1] * head;
        kmax = std::max(kmax, std::abs(dst[t]));
      }
    }
    ops.add(r * (L - 1));
    double* fresh = buf.data() + r * (L - 1);
    for (Index t = 0; t < L - 1; ++t) {
      fresh[t] = -s[t + 1];
      kmax = std::max(kmax, std::abs(fresh[t]));
    }
    st.r_ = r + 1;
    peak = std::max(peak, static_cast<std::size_t>((L - 1) * (r + 1) + L));

    rep.eq_status.push_back(EquationStatus::independent);
    ++rep.rank;
  }

  Vector x(n);
  for (Index j = 0; j < n; ++j) x(perm[j]) = xh[j];

  AbaffianState& fin = rep.abaffian_final;
  fin.H = st.abaffian();
  fin.step = static_cast<Index>(rep.eq_status.size());
  fin.search = std::move(search);
  fin.pivots = std::move(pivots);
  for (Index row : pivot_rows) fin.scaling.push_back(Vector::Unit(m, row));

  rep.last_iterate = x;
  if (rep.ok()) rep.x = x;
  rep.residual_norm = (A * x - b).norm();
  rep.mult_count = ops.mults;
  rep.peak_aux_storage = peak;
  return rep;
}

SolveReport gilu_vector_solve(const Matrix& A, const Vector& b, const Matrix& H1, const Matrix& Z,
                              const Tolerances& tol) {
  const Index m = A.rows();
  const Index n = A.cols();
  require(m >= 1 && n >= 1, "gilu_vector_solve: empty matrix");
  require(b.size() == m, "gilu_vector_solve: right-hand side length must equal rows of A");
  require(H1.rows() == n && H1.cols() == n, "gilu_vector_solve: H1 must be n x n");
  require(Z.rows() == n && Z.cols() == n, "gilu_vector_solve: Z must be n x n");

  const double tol_dep = tol.dependency_for(n);
  const double tol_res = tol.residual_for(n);

  Matrix U = H1.transpose() * Z;
  const double u1norm = U.norm();
  std::vector<char> live(static_cast<std::size_t>(n), 1);
  Vector x = Vector::Zero(n);
  Vector d(n);

  SolveReport rep;
  AbaffianState& fin = rep.abaffian_final;
  OpCounter ops;

  auto fail = [&](Outcome o, Index i, const std::string& msg) {
    rep.outcome = o;
    rep.failed_step = i + 1;
    rep.message = msg;
  };

  for (Index i = 0; i < m; ++i) {
    const auto a = A.row(i);
    const double tau = a.dot(x) - b(i);
    ops.add(n);

    double snorm = 0.0;
    double hnorm = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (!live[k]) continue;
      d(k) = a.dot(U.col(k));
      ops.add(n);
      snorm += d(k) * d(k);
      hnorm += U.col(k).squaredNorm();
    }
    snorm = std::sqrt(snorm);
    const double anorm = a.norm();

    if (snorm <= tol_dep * anorm * std::max(std::sqrt(hnorm), u1norm)) {
      if (std::abs(tau) <= tol_res * (anorm * x.norm() + std::abs(b(i)))) {
        rep.eq_status.push_back(EquationStatus::redundant);
        continue;
      }
      rep.eq_status.push_back(EquationStatus::incompatible);
      std::ostringstream msg;
      msg << "equation " << i + 1 << " is incompatible with the preceding equations";
      fail(Outcome::incompatible, i, msg.str());
      break;
    }
    if (i >= n || !live[i] || std::abs(d(i)) <= tol_dep * snorm) {
      std::ostringstream msg;
      msg << "step " << i + 1 << ": a_i^T u_i vanishes (A H1^T is not strongly nonsingular)";
      fail(Outcome::breakdown, i, msg.str());
      break;
    }

    const double pivot = d(i);
    const Vector p = U.col(i);
    const double alpha = tau / pivot;
    x -= alpha * p;
    ops.add(n + 1);
    for (Index k = 0; k < n; ++k) {
      if (!live[k] || k == i) continue;
      const double f = d(k) / pivot;
      U.col(k) -= f * p;
      ops.add(n + 1);
    }
    live[i] = 0;

    fin.search.push_back(p);
    fin.scaling.push_back(Vector::Unit(m, i));
    fin.pivots.push_back(pivot);
    rep.eq_status.push_back(EquationStatus::independent);
    ++rep.rank;
  }

  fin.H = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k)
    if (live[k]) fin.H.row(k) = U.col(k).transpose();
  fin.step = static_cast<Index>(rep.eq_status.size());

  rep.last_iterate = x;
  if (rep.ok()) rep.x = x;
  rep.residual_norm = (A * x - b).norm();
  rep.mult_count = ops.mults;
  return rep;
}

}  // namespace abspack
