#include <abspack/iterative.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>
#include <sstream>

namespace abspack {

const char* to_string(YScaling y) {
  switch (y) {
    case YScaling::identity: return "I";
    case YScaling::normal_equations: return "ata";
    case YScaling::energy_norm: return "a";
  }
  return "?";
}

Vector bodon_abs_full(const Matrix& A, const Vector& b, const Vector& x1, const Matrix& V,
                      const Matrix& Z, const Matrix& H1, std::vector<Vector>* iterates) {
  const Index n = A.rows();
  require(A.cols() == n, "bodon_abs_full: A must be square");
  require(b.size() == n && x1.size() == n, "bodon_abs_full: vector length mismatch");
  require(V.rows() == n && V.cols() == n && Z.rows() == n && Z.cols() == n &&
              H1.rows() == n && H1.cols() == n,
          "bodon_abs_full: V, Z, H1 must be n x n");

  Matrix Pm = H1.transpose() * Z;  // column j holds p_j^k
  Vector x = x1;
  if (iterates) iterates->assign(1, x);
  for (Index k = 0; k < n; ++k) {
    const Vector y = A.transpose() * V.col(k);
    const Vector p = Pm.col(k);
    const double pivot = y.dot(p);
    if (std::abs(pivot) <= 1e-14 * y.norm() * p.norm() || pivot == 0.0) {
      std::ostringstream msg;
      msg << "step " << k + 1 << ": v_k^T A p_k vanishes";
      throw Error(Errc::strategy_breakdown, msg.str(), k + 1);
    }
    const double tau = y.dot(x) - V.col(k).dot(b);
    x -= (tau / pivot) * p;
    for (Index j = k + 1; j < n; ++j) Pm.col(j) -= (y.dot(Pm.col(j)) / pivot) * p;
    if (iterates) iterates->push_back(x);
  }
  return x;
}

namespace {

struct WindowEntry {
  Vector p;
  Vector v;
  Vector q;  // A^T v = Y p
  double pivot;
};

bool is_spd(const Matrix& A) {
  if (A.rows() != A.cols()) return false;
  const double scale = A.cwiseAbs().maxCoeff();
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) return false;
  const Eigen::LLT<Matrix> llt(A);
  return llt.info() == Eigen::Success;
}

}  // namespace

IterTrace abs_m_solve(const Matrix& A, const Vector& b, const IterParams& params) {
  const Index rows = A.rows();
  const Index n = A.cols();
  require(rows >= 1 && n >= 1, "abs_m_solve: empty matrix");
  require(b.size() == rows, "abs_m_solve: right-hand side length must equal rows of A");
  require(params.m >= 1, "abs_m_solve: window size must be at least 1");
  require(params.max_iter >= 0, "abs_m_solve: max_iter must be nonnegative");
  const YScaling Y = params.scaling;
  if (Y == YScaling::energy_norm && !is_spd(A))
    throw Error(Errc::unsupported_shape, "abs_m_solve: energy-norm scaling needs an SPD matrix");

  Vector x = params.x1 ? *params.x1 : Vector::Zero(n);
  require(x.size() == n, "abs_m_solve: x1 length must equal columns of A");
  const bool tracked = params.x_star.has_value();
  if (tracked) require(params.x_star->size() == n, "abs_m_solve: x_star length mismatch");

  auto apply_Y = [&](const Vector& e) -> Vector {
    switch (Y) {
      case YScaling::identity: return e;
      case YScaling::normal_equations: return A.transpose() * (A * e);
      case YScaling::energy_norm: return A * e;
    }
    return e;
  };

  IterTrace tr;
  Vector r = A * x - b;
  const double bnorm = b.norm();
  auto record = [&]() {
    tr.x.push_back(x);
    tr.residual.push_back(r.norm());
    if (tracked) {
      const Vector e = x - *params.x_star;
      tr.error_Y.push_back(std::sqrt(std::max(0.0, e.dot(apply_Y(e)))));
    }
  };
  auto converged = [&]() {
    const double rn = r.norm();
    return bnorm > 0.0 ? rn <= params.rtol * bnorm : rn <= params.rtol;
  };

  record();
  std::deque<WindowEntry> window;
  for (Index k = 0; k < params.max_iter; ++k) {
    if (converged()) {
      tr.stop = StopReason::converged;
      return tr;
    }
    if (params.restart && k % params.m == 0) window.clear();

    Vector z, v;
    if (params.seed == Seed::gradient) {
      switch (Y) {
        case YScaling::identity:
          v = r;
          z = A.transpose() * r;
          break;
        case YScaling::normal_equations:
          z = A.transpose() * r;
          v = A * z;
          break;
        case YScaling::energy_norm:
          z = r;
          v = r;
          break;
      }
    } else {
      if (Y == YScaling::identity) {
        const Index j = k % rows;
        v = Vector::Unit(rows, j);
        z = A.row(j).transpose();
      } else {
        const Index j = k % n;
        z = Vector::Unit(n, j);
        v = Y == YScaling::normal_equations ? Vector(A.col(j)) : z;
      }
    }

    for (const WindowEntry& w : window) {
      const double c = w.q.dot(z) / w.pivot;
      z -= c * w.p;
      v -= c * w.v;
    }
    const Vector q = A.transpose() * v;
    const double pivot = q.dot(z);
    if (!(std::abs(pivot) > 1e-14 * q.norm() * z.norm())) {
      std::ostringstream msg;
      msg << "step " << k + 1 << ": window pivot vanishes";
      throw Error(Errc::stagnation, msg.str(), k + 1);
    }

    if (tracked) {
      const Vector rbar = apply_Y(x - *params.x_star);
      const double denom = z.norm() * rbar.norm();
      tr.gamma.push_back(denom > 0.0 ? std::abs(z.dot(rbar)) / denom : 1.0);
    }

    const double alpha = v.dot(r) / pivot;
    x -= alpha * z;
    r = A * x - b;
    tr.alpha.push_back(alpha);
    tr.search.push_back(z);
    record();

    window.push_back({std::move(z), std::move(v), q, pivot});
    while (static_cast<Index>(window.size()) > params.m - 1) window.pop_front();
  }
  tr.stop = converged() ? StopReason::converged : StopReason::max_iter;
  return tr;
}

double y_condition(const Matrix& A, YScaling y) {
  switch (y) {
    case YScaling::identity: return 1.0;
    case YScaling::normal_equations: {
      const Eigen::JacobiSVD<Matrix> svd(A);
      const Vector& s = svd.singularValues();
      const double ratio = s(0) / s(s.size() - 1);
      return ratio * ratio;
    }
    case YScaling::energy_norm: {
      const Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
      const Vector& e = es.eigenvalues();
      return e(e.size() - 1) / e(0);
    }
  }
  return 1.0;
}

bool theorem4_bound_check(const IterTrace& trace, double Y_cond, double gamma) {
  const auto& err = trace.error_Y;
  if (err.size() < 2) return true;
  require(Y_cond >= 1.0, "theorem4_bound_check: condition number must be at least 1");
  const double slack = 1e-10 * err.front();
  double g = gamma;
  for (std::size_t k = 0; k + 1 < err.size(); ++k) {
    if (gamma < 0) {
      require(k < trace.gamma.size(), "theorem4_bound_check: trace has no angle data");
      g = k == 0 ? trace.gamma[k] : std::min(g, trace.gamma[k]);
    }
    const double factor = std::sqrt(std::max(0.0, 1.0 - g * g / Y_cond));
    if (err[k + 1] > factor * err[k] + slack) return false;
  }
  return true;
}

void write_residual_history(const IterTrace& trace, std::ostream& os) {
  const bool with_err = !trace.error_Y.empty();
  os << "k,residual" << (with_err ? ",error_Y" : "") << '\n';
  char buf[64];
  for (std::size_t k = 0; k < trace.residual.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", trace.residual[k]);
    os << k + 1 << ',' << buf;
    if (with_err) {
      std::snprintf(buf, sizeof buf, "%.17g", trace.error_Y[k]);
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace abspack
