#include <abspack/problems.hpp>

#include <abspack/methods.hpp>

#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <sstream>

namespace abspack {

const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::determined: return "determined";
    case ProblemKind::overdetermined: return "overdetermined";
    case ProblemKind::underdetermined: return "underdetermined";
    case ProblemKind::kt: return "kt";
    case ProblemKind::diophantine: return "dio";
  }
  return "?";
}

const char* to_string(MatrixFamily f) {
  switch (f) {
    case MatrixFamily::random: return "rankdef";
    case MatrixFamily::hilbert_like_int: return "hilbert-like-int";
    case MatrixFamily::twopower_illcond: return "twopower-illcond";
  }
  return "?";
}

namespace {

using i128 = __int128;
using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

constexpr long long kExact = 1LL << 53;

void check_exact(i128 v, const char* what) {
  if (v > kExact || v < -kExact) {
    throw Error(Errc::unrepresentable_entry,
                std::string("generate: ") + what + " exceeds 2^53 in magnitude");
  }
}

IMat random_imat(Lcg& rng, Index rows, Index cols, long bound) {
  IMat M(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = rng.uniform(-bound, bound);
  return M;
}

IVec random_ivec(Lcg& rng, Index n, long bound) {
  IVec v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.uniform(-bound, bound);
  if (v.isZero()) v(0) = 1;
  return v;
}

IMat exact_product(const IMat& F, const IMat& G) {
  IMat P(F.rows(), G.cols());
  for (Index i = 0; i < F.rows(); ++i)
    for (Index j = 0; j < G.cols(); ++j) {
      i128 acc = 0;
      for (Index k = 0; k < F.cols(); ++k) acc += static_cast<i128>(F(i, k)) * G(k, j);
      check_exact(acc, "matrix entry");
      P(i, j) = static_cast<long long>(acc);
    }
  return P;
}

IVec exact_apply(const IMat& A, const IVec& x) {
  IVec b(A.rows());
  for (Index i = 0; i < A.rows(); ++i) {
    i128 acc = 0;
    for (Index j = 0; j < A.cols(); ++j) acc += static_cast<i128>(A(i, j)) * x(j);
    check_exact(acc, "right-hand side entry");
    b(i) = static_cast<long long>(acc);
  }
  return b;
}

Index default_rows(const ProblemSpec& s) {
  if (s.m > 0) return s.m;
  switch (s.kind) {
    case ProblemKind::determined: return s.n;
    case ProblemKind::overdetermined: return s.n + std::max<Index>(1, s.n / 2);
    case ProblemKind::underdetermined: return std::max<Index>(1, s.n / 2);
    case ProblemKind::kt: return std::max<Index>(1, s.n / 3);
    case ProblemKind::diophantine: return std::max<Index>(1, s.n / 2);
  }
  return s.n;
}

IntMatrix to_int(const IMat& M) {
  IntMatrix R(M.rows(), M.cols());
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) R(i, j) = static_cast<long>(M(i, j));
  return R;
}

IntVector to_int(const IVec& v) {
  IntVector r(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) r[static_cast<std::size_t>(i)] = static_cast<long>(v(i));
  return r;
}

// Full-rank (rank r) random integer matrix, redrawn until the rank is certified.
IMat ranked_matrix(Lcg& rng, Index rows, Index cols, Index r, long bound) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    IMat A = r == std::min(rows, cols) ? random_imat(rng, rows, cols, bound)
                                       : exact_product(random_imat(rng, rows, r, bound),
                                                       random_imat(rng, r, cols, bound));
    if (certified_rank(A.cast<double>()) == r) return A;
  }
  throw Error(Errc::not_full_rank, "generate: could not draw a matrix of the requested rank");
}

std::string dims(Index m, Index n) {
  std::ostringstream os;
  os << m << 'x' << n;
  return os.str();
}

}  // namespace

Index modular_rank(const Matrix& A) {
  using u64 = std::uint64_t;
  using u128 = unsigned __int128;
  constexpr u64 p = (1ULL << 61) - 1;
  auto mul = [](u64 a, u64 b) { return static_cast<u64>(static_cast<u128>(a) * b % p); };
  auto inv = [&](u64 a) {
    u64 r = 1;
    u64 e = p - 2;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  };

  const Index m = A.rows();
  const Index n = A.cols();
  std::vector<u64> M(static_cast<std::size_t>(m * n));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) {
      const double v = A(i, j);
      require(std::isfinite(v) && std::floor(v) == v && std::abs(v) <= 9.0e15,
              "modular_rank: entries must be integers");
      const auto iv = static_cast<long long>(v);
      M[static_cast<std::size_t>(i * n + j)] =
          iv >= 0 ? static_cast<u64>(iv) % p : (p - static_cast<u64>(-iv) % p) % p;
    }
  auto at = [&](Index i, Index j) -> u64& { return M[static_cast<std::size_t>(i * n + j)]; };

  Index r = 0;
  for (Index c = 0; c < n && r < m; ++c) {
    Index piv = r;
    while (piv < m && at(piv, c) == 0) ++piv;
    if (piv == m) continue;
    if (piv != r)
      for (Index j = c; j < n; ++j) std::swap(at(piv, j), at(r, j));
    const u64 ip = inv(at(r, c));
    for (Index i = r + 1; i < m; ++i) {
      if (at(i, c) == 0) continue;
      const u64 f = mul(at(i, c), ip);
      for (Index j = c; j < n; ++j) at(i, j) = (at(i, j) + p - mul(f, at(r, j))) % p;
    }
    ++r;
  }
  return r;
}

Index certified_rank(const Matrix& A) {
  if (A.rows() * A.cols() <= 400) return exact_rank(IntMatrix::from(A));
  return modular_rank(A);
}

Problem generate(const ProblemSpec& spec) {
  require(spec.n >= 1, "generate: n must be positive");
  require(spec.entry_bound >= 1, "generate: entry_bound must be positive");
  Lcg rng(spec.seed);
  Problem pr;
  pr.spec = spec;
  const Index n = spec.n;
  const Index m = default_rows(spec);
  pr.spec.m = m;

  if (spec.kind == ProblemKind::kt) {
    require(m <= n, "generate: KT needs m <= n");
    IMat G = IMat::Zero(n, n);
    for (Index i = 0; i < n; ++i) G(i, i) = rng.uniform(1, spec.entry_bound);
    const IMat C = ranked_matrix(rng, m, n, m, spec.entry_bound);
    const IVec p = random_ivec(rng, n, spec.entry_bound);
    const IVec z = random_ivec(rng, m, spec.entry_bound);
    IMat K = IMat::Zero(n + m, n + m);
    K.topLeftCorner(n, n) = G;
    K.topRightCorner(n, m) = C.transpose();
    K.bottomLeftCorner(m, n) = C;
    IVec xz(n + m);
    xz << p, z;
    const IVec rhs = exact_apply(K, xz);
    KTSystem sys{G.cast<double>(), C.cast<double>(), rhs.head(n).cast<double>(),
                 rhs.tail(m).cast<double>()};
    pr.A = K.cast<double>();
    pr.b = rhs.cast<double>();
    pr.x_true = xz.cast<double>();
    pr.x_min_norm = pr.x_true;
    pr.certified_rank = n + m;
    pr.kt = std::move(sys);
    pr.name = "kt" + dims(n, m);
    return pr;
  }

  const Index full = std::min(m, n);
  const Index r = spec.target_rank > 0 ? spec.target_rank : full;
  require(r >= 1 && r <= full, "generate: target_rank must lie in [1, min(m, n)]");

  IMat A;
  switch (spec.family) {
    case MatrixFamily::random:
      A = ranked_matrix(rng, m, n, r, spec.entry_bound);
      pr.name = (r < full ? "rank" + std::to_string(r) + "_" : std::string("rand")) + dims(m, n);
      break;
    case MatrixFamily::hilbert_like_int:
      require(r == full, "generate: hilbert-like-int is full rank only");
      A.resize(m, n);
      for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j)
          A(i, j) = std::llround(1048576.0 / static_cast<double>(i + j + 1));
      if (certified_rank(A.cast<double>()) != r)
        throw Error(Errc::not_full_rank, "generate: hilbert-like-int matrix is not full rank");
      pr.name = "hilb" + dims(m, n);
      break;
    case MatrixFamily::twopower_illcond:
      require(m == n && r == n, "generate: twopower-illcond is square and full rank only");
      A = IMat::Zero(n, n);
      for (Index i = 0; i < n; ++i) {
        const long long scale = 1LL << (i % 8);
        A(i, i) = scale;
        for (Index j = i + 1; j < n; ++j) A(i, j) = -scale;
      }
      pr.name = "twopow" + dims(m, n);
      break;
  }

  const IVec x = random_ivec(rng, n, spec.entry_bound);
  const IVec b = exact_apply(A, x);
  pr.A = A.cast<double>();
  pr.b = b.cast<double>();
  pr.x_true = x.cast<double>();
  pr.certified_rank = r;
  pr.x_min_norm = r == n ? pr.x_true : Vector(pr.A.completeOrthogonalDecomposition().solve(pr.b));
  if (spec.kind == ProblemKind::diophantine) {
    pr.A_int = to_int(A);
    pr.b_int = to_int(b);
    pr.x_int = to_int(x);
    pr.name = "dio" + dims(m, n);
  }
  return pr;
}

Metrics score(const Problem& problem, const Vector& x, bool least_norm) {
  Metrics mt;
  const bool unique = problem.certified_rank == problem.A.cols();
  const Vector& ref = least_norm && !unique ? problem.x_min_norm : problem.x_true;
  const double rn = ref.norm();
  mt.rel_solution_error = rn > 0.0 ? (x - ref).norm() / rn : (x - ref).norm();
  const double bn = problem.b.norm();
  const double res = (problem.A * x - problem.b).norm();
  mt.rel_residual_error = bn > 0.0 ? res / bn : res;
  return mt;
}

Metrics evaluate(const std::string& solver_id, const Problem& problem) {
  MethodInput in{problem.A, problem.b, nullptr, nullptr, 0, {}};
  if (problem.A_int) in.A_int = &*problem.A_int;
  if (problem.b_int) in.b_int = &*problem.b_int;
  if (problem.kt) in.kt_constraints = problem.kt->C.rows();

  const auto t0 = std::chrono::steady_clock::now();
  const MethodResult res = run_method(solver_id, in);
  const auto t1 = std::chrono::steady_clock::now();

  Metrics mt;
  if (res.x) mt = score(problem, *res.x, is_least_norm(solver_id));
  mt.failed = res.outcome != Outcome::solved;
  mt.outcome = res.outcome;
  mt.detected_rank = res.rank;
  mt.mult_count = res.mult_count;
  mt.message = res.message;
  mt.elapsed_seconds = std::chrono::duration<double>(t1 - t0).count();
  return mt;
}

}  // namespace abspack
