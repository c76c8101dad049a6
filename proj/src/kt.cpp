#include <abspack/kt.hpp>

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <sstream>

namespace abspack {

const char* to_string(PMethod m) { return m == PMethod::A1 ? "A1" : "A2"; }
const char* to_string(ZMethod m) { return m == ZMethod::B1 ? "B1" : "B2"; }

Matrix KTSystem::assembled() const {
  const Index n = G.rows();
  const Index m = C.rows();
  Matrix K = Matrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = G;
  K.topRightCorner(n, m) = C.transpose();
  K.bottomLeftCorner(m, n) = C;
  return K;
}

Vector KTSystem::assembled_rhs() const {
  Vector r(g.size() + c.size());
  r << g, c;
  return r;
}

namespace {

void check_shapes(const Matrix& G, const Matrix& C, const Vector& g, const Vector& c) {
  const Index n = G.rows();
  require(G.cols() == n, "KT: G must be square");
  require(C.cols() == n, "KT: C must have n columns");
  require(C.rows() >= 1 && C.rows() <= n, "KT: need 1 <= m <= n");
  require(g.size() == n && c.size() == C.rows(), "KT: right-hand side length mismatch");
}

double relative_residual(const Matrix& G, const Matrix& C, const Vector& g, const Vector& c,
                         const Vector& p, const Vector& z) {
  const double r2 = (G * p + C.transpose() * z - g).squaredNorm() + (C * p - c).squaredNorm();
  const double rhs = std::sqrt(g.squaredNorm() + c.squaredNorm());
  const double r = std::sqrt(r2);
  return rhs > 0.0 ? r / rhs : r;
}

// ABS solve of a compatible system that must drop exactly `expected` rows.
Vector inner_solve(const Matrix& A, const Vector& b, const ParameterStrategy& s, Index expected,
                   const char* what, OpCounter& ops) {
  const SolveReport rep = abs_solve(A, b, s);
  ops.add(static_cast<Index>(rep.mult_count));
  if (!rep.ok()) {
    std::ostringstream msg;
    msg << "KT " << what << ": inner solve failed (" << rep.message << ")";
    throw Error(Errc::singular_kt, msg.str(), rep.failed_step);
  }
  if (rep.redundant_count() != expected) {
    std::ostringstream msg;
    msg << "KT " << what << ": " << rep.redundant_count() << " dependent equations, expected "
        << expected;
    throw Error(Errc::singular_kt, msg.str());
  }
  return *rep.x;
}

}  // namespace

KtFactorization::KtFactorization(const Matrix& C, const Vector& c, const StrategyKind& strategy)
    : C_(C), c_(c), kind_(strategy) {
  require(C.rows() >= 1 && C.rows() <= C.cols(), "KtFactorization: need 1 <= m <= n");
  require(c.size() == C.rows(), "KtFactorization: c length must equal rows of C");
  if (strategy.family != Family::modified_huang && strategy.family != Family::implicit_lx)
    throw Error(Errc::usage, "KT: strategy must be mhuang or ilx");

  const auto s = make_strategy(strategy);
  const SolveReport rep = abs_solve(C, c, *s);
  if (!rep.ok() || rep.rank != C.rows()) {
    std::ostringstream msg;
    msg << "KT: constraint matrix has rank " << rep.rank << " < " << C.rows();
    if (!rep.ok()) msg << " (" << rep.message << ")";
    throw Error(Errc::singular_kt, msg.str(), rep.failed_step);
  }
  p0_ = *rep.x;
  H_ = rep.abaffian_final.H;
  P_ = rep.abaffian_final.search_matrix();
  // v_i = e_i, so L = C P.
  L_ = C * P_;
  mults_ = rep.mult_count + static_cast<std::uint64_t>(C.rows() * C.rows() * C.cols());
}

KTSolution kt_solve_with(const KtFactorization& f, const Matrix& G, const Vector& g,
                         PMethod p_method, ZMethod z_method) {
  const Matrix& C = f.C();
  const Matrix& H = f.H();
  check_shapes(G, C, g, f.c());
  const Index n = C.cols();
  const Index m = C.rows();
  const auto s = make_strategy(f.strategy());
  OpCounter ops;

  const Matrix HG = H * G;
  const Vector Hg = H * g;
  ops.add(n * n * n + n * n);

  Vector p;
  if (p_method == PMethod::A1) {
    Matrix S(m + n, n);
    S << C, HG;
    Vector r(m + n);
    r << f.c(), Hg;
    p = inner_solve(S, r, *s, m, "A1", ops);
  } else {
    const Matrix M = HG * H.transpose();
    const Vector r = Hg - HG * f.p_particular();
    ops.add(n * n * n + n * n);
    const Vector q = inner_solve(M, r, *s, m, "A2", ops);
    p = f.p_particular() + H.transpose() * q;
    ops.add(n * n);
  }

  const Vector rg = g - G * p;
  ops.add(n * n);
  Vector z;
  if (z_method == ZMethod::B1) {
    z = inner_solve(C.transpose(), rg, *s, n - m, "B1", ops);
  } else {
    // L^T z = P^T (g - G p), L lower triangular.
    const Vector rhs = f.P().transpose() * rg;
    ops.add(n * m);
    const Matrix& L = f.L();
    for (Index i = 0; i < m; ++i)
      if (L(i, i) == 0.0) throw Error(Errc::singular_kt, "KT B2: zero diagonal in L");
    z = L.transpose().triangularView<Eigen::Upper>().solve(rhs);
    ops.add(m * (m + 1) / 2);
  }

  KTSolution out;
  out.p = std::move(p);
  out.z = std::move(z);
  out.residual_full = relative_residual(G, C, g, f.c(), out.p, out.z);
  out.mult_count = ops.mults;
  return out;
}

KTSolution kt_solve(const KTSystem& sys, PMethod p_method, ZMethod z_method,
                    const StrategyKind& strategy) {
  check_shapes(sys.G, sys.C, sys.g, sys.c);
  const KtFactorization f(sys.C, sys.c, strategy);
  KTSolution out = kt_solve_with(f, sys.G, sys.g, p_method, z_method);
  out.mult_count += f.mult_count();
  return out;
}

KTSolution kt_dense_baseline(const KTSystem& sys) {
  check_shapes(sys.G, sys.C, sys.g, sys.c);
  const Index n = sys.G.rows();
  const Index m = sys.C.rows();
  const Matrix K = sys.assembled();
  const Eigen::PartialPivLU<Matrix> lu(K);
  // rcond alone misjudges exact zero pivots, so test them first.
  const Vector piv = lu.matrixLU().diagonal().cwiseAbs();
  const double rc = piv.minCoeff() > 0.0 ? lu.rcond() : 0.0;
  if (!std::isfinite(rc) || !(rc > 16 * std::numeric_limits<double>::epsilon()))
    throw Error(Errc::singular, "KT baseline: block matrix is singular to working precision");
  const Vector sol = lu.solve(sys.assembled_rhs());
  KTSolution out;
  out.p = sol.head(n);
  out.z = sol.tail(m);
  out.residual_full = relative_residual(sys.G, sys.C, sys.g, sys.c, out.p, out.z);
  const Index N = n + m;
  out.mult_count = static_cast<std::uint64_t>(N * N * N / 3 + N * N);
  return out;
}

}  // namespace abspack
