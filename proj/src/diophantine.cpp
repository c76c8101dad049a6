#include <abspack/diophantine.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace abspack {

const char* to_string(DioStatus s) {
  switch (s) {
    case DioStatus::independent: return "independent";
    case DioStatus::redundant: return "redundant";
    case DioStatus::incompatible_real: return "incompatible";
    case DioStatus::incompatible_integer: return "integerly inconsistent";
  }
  return "?";
}

GcdCertificate gcd_combination(const IntVector& s) {
  const std::size_t n = s.size();
  if (is_zero(s)) throw Error(Errc::zero_vector, "gcd_combination: vector is zero");

  // c[k] = coef[k]^T s is kept nonnegative throughout.
  std::vector<BigInt> c(n);
  std::vector<IntVector> coef(n, IntVector(n, 0));
  for (std::size_t k = 0; k < n; ++k) {
    c[k] = abs(s[k]);
    coef[k][k] = sgn(s[k]) < 0 ? -1 : 1;
  }

  for (;;) {
    std::size_t big = n;
    std::size_t second = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(c[k]) == 0) continue;
      if (big == n || c[k] > c[big]) {
        second = big;
        big = k;
      } else if (second == n || c[k] > c[second]) {
        second = k;
      }
    }
    if (second == n) return {c[big], coef[big]};
    BigInt q;
    mpz_fdiv_qr(q.get_mpz_t(), c[big].get_mpz_t(), c[big].get_mpz_t(), c[second].get_mpz_t());
    for (std::size_t j = 0; j < n; ++j) coef[big][j] -= q * coef[second][j];
  }
}

DioReport dio_solve(const IntMatrix& A, const IntVector& b, const DioOptions& options) {
  const Index m = A.rows();
  const Index n = A.cols();
  require(static_cast<Index>(b.size()) == m, "dio_solve: right-hand side length must equal rows of A");

  DioReport rep;
  IntMatrix H = options.H1 ? *options.H1 : IntMatrix::identity(n);
  require(H.rows() == n && H.cols() == n, "dio_solve: H1 must be n x n");
  if (options.H1) {
    const BigInt det = determinant(H);
    if (abs(det) != 1) throw Error(Errc::not_unimodular, "dio_solve: H1 is not unimodular");
  }
  IntVector x = options.x1 ? *options.x1 : IntVector(static_cast<std::size_t>(n), 0);
  require(static_cast<Index>(x.size()) == n, "dio_solve: x1 length must equal columns of A");

  if (options.record_history) {
    rep.H_history.push_back(H);
    rep.x_history.push_back(x);
  }

  IntVector s(static_cast<std::size_t>(n));
  IntVector p(static_cast<std::size_t>(n));
  for (Index i = 0; i < m; ++i) {
    const IntVector a = A.row(i);
    const BigInt tau = dot(a, x) - b[static_cast<std::size_t>(i)];
    s = H * a;

    if (is_zero(s)) {
      if (sgn(tau) == 0) {
        rep.eq_status.push_back(DioStatus::redundant);
        continue;
      }
      rep.eq_status.push_back(DioStatus::incompatible_real);
      rep.failed_row = i + 1;
      std::ostringstream msg;
      msg << "equation " << i + 1 << " is incompatible with the preceding equations";
      rep.message = msg.str();
      break;
    }

    const GcdCertificate cert = gcd_combination(s);
    if (!mpz_divisible_p(tau.get_mpz_t(), cert.delta.get_mpz_t())) {
      rep.eq_status.push_back(DioStatus::incompatible_integer);
      rep.failed_row = i + 1;
      rep.failing_delta = cert.delta;
      rep.failing_tau = tau;
      std::ostringstream msg;
      msg << "equation " << i + 1 << ": system is integerly inconsistent (delta = " << cert.delta
          << " does not divide tau = " << tau << ")";
      rep.message = msg.str();
      break;
    }

    BigInt alpha;
    mpz_divexact(alpha.get_mpz_t(), tau.get_mpz_t(), cert.delta.get_mpz_t());
    for (Index k = 0; k < n; ++k) {
      BigInt acc = 0;
      for (Index j = 0; j < n; ++j) acc += H(j, k) * cert.z[static_cast<std::size_t>(j)];
      p[static_cast<std::size_t>(k)] = acc;
    }
    for (Index k = 0; k < n; ++k) x[static_cast<std::size_t>(k)] -= alpha * p[static_cast<std::size_t>(k)];

    // w = z, so H^T w = p and w^T H a = delta; delta divides every s_j.
    BigInt sj;
    for (Index j = 0; j < n; ++j) {
      const BigInt& sv = s[static_cast<std::size_t>(j)];
      if (sgn(sv) == 0) continue;
      if (!mpz_divisible_p(sv.get_mpz_t(), cert.delta.get_mpz_t()))
        throw std::logic_error("dio_solve: Abaffian update is not integral");
      mpz_divexact(sj.get_mpz_t(), sv.get_mpz_t(), cert.delta.get_mpz_t());
      for (Index k = 0; k < n; ++k) H(j, k) -= sj * p[static_cast<std::size_t>(k)];
    }

    rep.eq_status.push_back(DioStatus::independent);
    if (options.record_history) {
      rep.H_history.push_back(H);
      rep.x_history.push_back(x);
    }
  }

  rep.last_iterate = x;
  rep.H_final = std::move(H);
  if (rep.failed_row == 0) rep.x_particular = x;
  return rep;
}

IntVector dio_general_solution(const DioReport& report, const IntVector& q) {
  if (!report.x_particular)
    throw Error(Errc::incompatible_system, "dio_general_solution: system has no integer solution");
  const IntMatrix& H = report.H_final;
  require(static_cast<Index>(q.size()) == H.rows(), "dio_general_solution: q length must equal n");
  IntVector x = *report.x_particular;
  for (Index j = 0; j < H.rows(); ++j) {
    const BigInt& qj = q[static_cast<std::size_t>(j)];
    if (sgn(qj) == 0) continue;
    for (Index k = 0; k < H.cols(); ++k) x[static_cast<std::size_t>(k)] += H(j, k) * qj;
  }
  return x;
}

namespace {

bool fits_small(const BigInt& v) { return abs(v) < (1L << 20); }

template <typename Accept>
void odometer(Index n, long radius, Accept&& accept) {
  std::vector<long> x(static_cast<std::size_t>(n), -radius);
  for (;;) {
    accept(x);
    Index k = n - 1;
    while (k >= 0 && x[static_cast<std::size_t>(k)] == radius) {
      x[static_cast<std::size_t>(k)] = -radius;
      --k;
    }
    if (k < 0) return;
    ++x[static_cast<std::size_t>(k)];
  }
}

}  // namespace

std::vector<IntVector> enumerate_solutions_box(const IntMatrix& A, const IntVector& b, long radius,
                                               double budget) {
  const Index m = A.rows();
  const Index n = A.cols();
  require(static_cast<Index>(b.size()) == m, "enumerate_solutions_box: shape mismatch");
  require(radius >= 0, "enumerate_solutions_box: radius must be nonnegative");
  const double work = static_cast<double>(n) * std::pow(2.0 * static_cast<double>(radius) + 1.0,
                                                        static_cast<double>(n));
  if (work > budget) throw Error(Errc::budget_exceeded, "enumerate_solutions_box: budget exceeded");

  std::vector<IntVector> out;
  if (n == 0) {
    if (std::all_of(b.begin(), b.end(), [](const BigInt& v) { return sgn(v) == 0; }))
      out.emplace_back();
    return out;
  }

  bool small = radius < (1L << 20);
  for (Index i = 0; i < m && small; ++i) {
    small = fits_small(b[static_cast<std::size_t>(i)]);
    for (Index j = 0; j < n && small; ++j) small = fits_small(A(i, j));
  }

  auto emit = [&](const std::vector<long>& x) {
    IntVector v(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) v[k] = x[k];
    out.push_back(std::move(v));
  };

  if (small) {
    std::vector<long> Af(static_cast<std::size_t>(m * n));
    std::vector<long> bf(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
      bf[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)].get_si();
      for (Index j = 0; j < n; ++j) Af[static_cast<std::size_t>(i * n + j)] = A(i, j).get_si();
    }
    odometer(n, radius, [&](const std::vector<long>& x) {
      for (Index i = 0; i < m; ++i) {
        long acc = 0;
        for (Index j = 0; j < n; ++j) acc += Af[static_cast<std::size_t>(i * n + j)] * x[static_cast<std::size_t>(j)];
        if (acc != bf[static_cast<std::size_t>(i)]) return;
      }
      emit(x);
    });
  } else {
    odometer(n, radius, [&](const std::vector<long>& x) {
      for (Index i = 0; i < m; ++i) {
        BigInt acc = 0;
        for (Index j = 0; j < n; ++j) acc += A(i, j) * x[static_cast<std::size_t>(j)];
        if (acc != b[static_cast<std::size_t>(i)]) return;
      }
      emit(x);
    });
  }
  return out;
}

}  // namespace abspack
