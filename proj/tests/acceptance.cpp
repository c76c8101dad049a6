// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <abspack/bench.hpp>
#include <abspack/core.hpp>
#include <abspack/diophantine.hpp>
#include <abspack/iterative.hpp>
#include <abspack/kt.hpp>
#include <abspack/matrix_abs.hpp>
#include <abspack/problems.hpp>
#include <abspack/strategies.hpp>

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>

using namespace abspack;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Implicit LU multiplication count on a 100 x 100 regular integer system.
Verdict op_count() {
  ProblemSpec spec;
  spec.n = 100;
  spec.seed = 2024;
  const Problem p = generate(spec);
  const auto t0 = Clock::now();
  const SolveReport rep = implicit_lu_solve(p.A, p.b);
  const double t = seconds_since(t0);
  const double ratio = static_cast<double>(rep.mult_count) / (100.0 * 100.0 * 100.0 / 3.0);
  const bool ok = rep.ok() && ratio >= 0.95 && ratio <= 1.10 && t < 1.0;
  return {ok, fmt("mult_count = %llu = %.4f * n^3/3, %.3f s", static_cast<unsigned long long>(rep.mult_count),
                  ratio, t)};
}

// 2. Peak auxiliary storage of the compact implicit LU.
Verdict storage() {
  std::string detail;
  bool ok = true;
  for (Index n : {20, 50, 100}) {
    ProblemSpec spec;
    spec.n = n;
    spec.seed = 77;
    const Problem p = generate(spec);
    const SolveReport rep = implicit_lu_solve(p.A, p.b);
    const auto bound = static_cast<std::size_t>(n * n / 4 + n);
    ok = ok && rep.ok() && rep.peak_aux_storage <= bound;
    detail += fmt("n=%ld: %zu <= %zu; ", static_cast<long>(n), rep.peak_aux_storage, bound);
  }
  return {ok, detail};
}

// 3. Rank detection by modified Huang at n = 200.
Verdict rank_detection() {
  std::string detail;
  bool ok = true;
  const auto t0 = Clock::now();
  for (Index r : {2, 4, 50}) {
    ProblemSpec spec;
    spec.n = 200;
    spec.target_rank = r;
    spec.seed = 5;
    const Problem p = generate(spec);
    const Metrics mt = evaluate("mhuang", p);
    const Index got = mt.detected_rank.value_or(-1);
    ok = ok && !mt.failed && got == r && mt.rel_residual_error <= 1e-10;
    detail += fmt("r=%ld: rank %ld res %.1e; ", static_cast<long>(r), static_cast<long>(got),
                  mt.rel_residual_error);
  }
  const double t = seconds_since(t0);
  ok = ok && t < 5.0;
  return {ok, detail + fmt("%.2f s", t)};
}

// 4. Null-space, triangularity and inverse reconstruction on 1000 systems.
Verdict invariants() {
  oracle::TestRng rng(4);
  double worst_null = 0.0, worst_tri = 0.0, worst_inv = 0.0;
  const Family fams[] = {Family::huang, Family::modified_huang, Family::implicit_lu, Family::implicit_lx,
                         Family::optimally_stable};
  for (int t = 0; t < 1000; ++t) {
    const Index n = 2 + t % 9;
    const Index m = 1 + (t / 9) % n;
    const Family fam = fams[t % 5];
    const auto strat = make_strategy(fam);
    const Matrix A = oracle::random_matrix(rng, m, n) +
                     (m == n ? Matrix(3.0 * Matrix::Identity(n, n)) : Matrix(Matrix::Zero(m, n)));
    const Vector b = oracle::random_matrix(rng, m, 1);
    const double anorm = A.norm();
    // H_{i+1} from the prefix run; v_j = e_j for these families.
    for (Index i = 1; i <= m; ++i) {
      const SolveReport pre = abs_solve(A.topRows(i), b.head(i), *strat);
      if (!pre.ok()) continue;
      const Matrix& H = pre.abaffian_final.H;
      for (Index j = 0; j < i; ++j)
        worst_null = std::max(worst_null, (H * A.row(j).transpose()).norm() / anorm);
    }
    const SolveReport rep = abs_solve(A, b, *strat);
    if (!rep.ok() || rep.rank != m) continue;
    const Matrix V = rep.abaffian_final.scaling_matrix();
    const Matrix P = rep.abaffian_final.search_matrix();
    const Matrix VAP = V.transpose() * A * P;
    worst_tri = std::max(worst_tri,
                         VAP.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().cwiseAbs().maxCoeff() / anorm);
    if (m == n) {
      const ImplicitFactors f = implicit_factorization(A, rep);
      worst_inv = std::max(worst_inv, (A * f.inverse() - Matrix::Identity(n, n)).norm());
    }
  }
  const bool ok = worst_null <= 1e-8 && worst_tri <= 1e-8 && worst_inv <= 1e-8;
  return {ok, fmt("null %.1e, V^T A P upper %.1e, inverse %.1e", worst_null, worst_tri, worst_inv)};
}

// 5. Monotone norms: Huang iterates grow toward x+, orthogonally scaled residuals shrink.
Verdict monotone() {
  oracle::TestRng rng(5);
  int bad_huang = 0, bad_qr = 0;
  SolveOptions opt;
  opt.record_iterates = true;
  for (int t = 0; t < 100; ++t) {
    const Index n = 3 + t % 8;
    const Index m = 1 + t % n;
    const Matrix A = oracle::random_matrix(rng, m, n);
    const Vector b = oracle::random_matrix(rng, m, 1);
    const SolveReport rep = abs_solve(A, b, *make_strategy(Family::huang), opt);
    const double xplus = oracle::least_norm(A, b).norm();
    for (std::size_t k = 1; k < rep.iterates.size(); ++k) {
      const double a = rep.iterates[k - 1].norm(), c = rep.iterates[k].norm();
      if (c < a - 1e-12 * (1.0 + a) || c > xplus + 1e-10) ++bad_huang;
    }
  }
  for (int t = 0; t < 100; ++t) {
    const Index n = 3 + t % 8;
    const Index m = n + t % 4;
    const Matrix A = oracle::random_matrix(rng, m, n);
    const Vector b = oracle::random_matrix(rng, m, 1);
    const SolveReport rep = abs_solve(A, b, *make_strategy(Family::implicit_qr), opt);
    for (std::size_t k = 1; k < rep.iterates.size(); ++k) {
      const double a = (A * rep.iterates[k - 1] - b).norm(), c = (A * rep.iterates[k] - b).norm();
      if (c > a * (1.0 + 1e-12)) ++bad_qr;
    }
  }
  return {bad_huang == 0 && bad_qr == 0,
          fmt("Huang violations %d, orthogonally scaled violations %d (100 systems each)", bad_huang, bad_qr)};
}

// 6. Exhaustive 2 x 3 Diophantine systems with entries in -2..2.
Verdict diophantine() {
  const auto t0 = Clock::now();
  long systems = 0, consistent = 0, solvable = 0, decision_mismatch = 0, coverage_fail = 0, history_fail = 0;
  constexpr long R = 4;
  std::vector<std::array<long, 3>> box;
  for (long x = -R; x <= R; ++x)
    for (long y = -R; y <= R; ++y)
      for (long z = -R; z <= R; ++z) box.push_back({x, y, z});

  for (long code = 0; code < 15625; ++code) {
    long a[6];
    long c = code;
    for (long& e : a) {
      e = c % 5 - 2;
      c /= 5;
    }
    IntMatrix A(2, 3);
    oracle::SmallMat S(2, std::vector<long long>(3));
    for (int i = 0; i < 6; ++i) {
      A(i / 3, i % 3) = a[i];
      S[i / 3][i % 3] = a[i];
    }
    // Box solutions for every b at once.
    std::map<std::pair<long, long>, std::vector<std::array<long, 3>>> by_rhs;
    for (const auto& x : box) {
      const long b0 = a[0] * x[0] + a[1] * x[1] + a[2] * x[2];
      const long b1 = a[3] * x[0] + a[4] * x[1] + a[5] * x[2];
      if (std::abs(b0) <= 2 && std::abs(b1) <= 2) by_rhs[{b0, b1}].push_back(x);
    }
    std::vector<IntVector> lattice;
    bool have_lattice = false;
    Matrix Ad = A.to_double();
    const Index rank_a = oracle::rational_rank(Ad);

    for (long b0 = -2; b0 <= 2; ++b0)
      for (long b1 = -2; b1 <= 2; ++b1) {
        ++systems;
        Matrix Ab(2, 4);
        Ab << Ad, Vector{{static_cast<double>(b0), static_cast<double>(b1)}};
        if (oracle::rational_rank(Ab) != rank_a) continue;  // not real-consistent
        ++consistent;
        const IntVector b = make_int_vector({b0, b1});
        DioOptions opt;
        opt.record_history = true;
        const DioReport rep = dio_solve(A, b, opt);
        const bool expect = oracle::integer_solvable(S, {b0, b1});
        if (rep.solvable() != expect) ++decision_mismatch;
        for (std::size_t k = 1; k < rep.H_history.size(); ++k)
          for (Index i = 0; i < static_cast<Index>(k) && i < 2; ++i)
            if (!is_zero(rep.H_history[k] * A.row(i))) ++history_fail;
        const auto it = by_rhs.find({b0, b1});
        if (!rep.solvable()) {
          if (it != by_rhs.end()) ++coverage_fail;
          continue;
        }
        ++solvable;
        if (!(A * *rep.x_particular == b)) ++coverage_fail;
        if (!have_lattice) {
          // Image of the general solution is x_p + (integer row span of H); H annihilates A.
          for (Index j = 0; j < rep.H_final.rows(); ++j)
            if (!is_zero(A * rep.H_final.row(j))) ++coverage_fail;
          lattice = oracle::integer_echelon(rep.H_final);
          have_lattice = true;
        }
        if (it == by_rhs.end()) continue;
        for (const auto& y : it->second) {
          IntVector d(3);
          for (int j = 0; j < 3; ++j) d[j] = BigInt(y[j]) - (*rep.x_particular)[j];
          if (!oracle::in_lattice(lattice, d)) ++coverage_fail;
        }
      }
  }
  const double t = seconds_since(t0);
  const bool ok = decision_mismatch == 0 && coverage_fail == 0 && history_fail == 0 && t < 60.0;
  return {ok, fmt("%ld systems, %ld consistent, %ld integer-solvable; mismatches %ld, coverage %ld, "
                  "H history %ld; %.1f s",
                  systems, consistent, solvable, decision_mismatch, coverage_fail, history_fail, t)};
}

// 7. KT paths against the dense baseline, plus C-stage reuse.
Verdict kt() {
  oracle::TestRng rng(7);
  double worst = 0.0;
  long reuse_fail = 0;
  const Index n = 30;
  const Index ms[] = {5, 15, 29};
  for (int t = 0; t < 50; ++t) {
    const Index m = ms[t % 3];
    KTSystem s;
    s.G = oracle::random_spd(rng, n, 10.0);
    s.C = oracle::random_matrix(rng, m, n);
    const Vector p = oracle::random_matrix(rng, n, 1);
    const Vector z = oracle::random_matrix(rng, m, 1);
    s.c = s.C * p;
    s.g = s.G * p + s.C.transpose() * z;
    const KTSolution base = kt_dense_baseline(s);
    const KtFactorization f(s.C, s.c, StrategyKind{Family::modified_huang, {}, false});
    for (PMethod pm : {PMethod::A1, PMethod::A2})
      for (ZMethod zm : {ZMethod::B1, ZMethod::B2}) {
        const KTSolution sol = kt_solve(s, pm, zm);
        Vector a(n + m), c(n + m);
        a << sol.p, sol.z;
        c << base.p, base.z;
        worst = std::max(worst, (a - c).norm() / c.norm());
        // Second solve against a new diagonal G reuses the C stage.
        Matrix G2 = Matrix(Vector(s.G.diagonal().cwiseAbs() + Vector::Ones(n)).asDiagonal());
        KTSystem s2 = s;
        s2.G = G2;
        const KTSolution fresh = kt_solve(s2, pm, zm);
        const KTSolution reused = kt_solve_with(f, G2, s.g, pm, zm);
        if (fresh.mult_count != reused.mult_count + f.mult_count()) ++reuse_fail;
      }
  }
  return {worst <= 1e-6 && reuse_fail == 0,
          fmt("worst relative difference %.1e over 50 systems x 4 paths; reuse mismatches %ld", worst, reuse_fail)};
}

// 8. Gauss-Seidel and Kaczmarz equivalences at m = 1.
Verdict classical() {
  oracle::TestRng rng(8);
  const Index n = 10;
  const int sweeps = 25;
  const Matrix S = oracle::random_spd(rng, n, 20.0);
  const Vector b = oracle::random_matrix(rng, n, 1);
  IterParams prm;
  prm.m = 1;
  prm.seed = Seed::cyclic_unit;
  prm.rtol = 0.0;
  prm.max_iter = sweeps * n;

  prm.scaling = YScaling::energy_norm;
  const IterTrace gs_tr = abs_m_solve(S, b, prm);
  Vector gs = Vector::Zero(n);
  double worst_gs = 0.0;
  for (int k = 1; k <= sweeps; ++k) {
    oracle::gauss_seidel_sweep(S, b, gs);
    worst_gs = std::max(worst_gs, (gs_tr.x[static_cast<std::size_t>(k * n)] - gs).norm() / gs.norm());
  }

  prm.scaling = YScaling::identity;
  const IterTrace kz_tr = abs_m_solve(S, b, prm);
  Vector kz = Vector::Zero(n);
  double worst_kz = 0.0;
  for (Index k = 0; k < sweeps * n; ++k) {
    oracle::kaczmarz_step(S, b, kz, k % n);
    worst_kz = std::max(worst_kz, (kz_tr.x[static_cast<std::size_t>(k + 1)] - kz).norm() / kz.norm());
  }
  return {worst_gs <= 1e-12 && worst_kz <= 1e-12,
          fmt("Gauss-Seidel %.1e, Kaczmarz %.1e over %d sweeps", worst_gs, worst_kz, sweeps)};
}

// 9. Convergence-rate bound on SPD systems.
Verdict rate_bound() {
  oracle::TestRng rng(9);
  int runs = 0, failures = 0;
  for (int t = 0; t < 20; ++t) {
    const Matrix S = oracle::random_spd(rng, 15, 50.0);
    const Vector xs = oracle::random_matrix(rng, 15, 1);
    const Vector b = S * xs;
    for (Index m : {1, 2, 5})
      for (YScaling y : {YScaling::identity, YScaling::normal_equations, YScaling::energy_norm}) {
        IterParams prm;
        prm.m = m;
        prm.scaling = y;
        prm.max_iter = 200;
        prm.x_star = xs;
        const IterTrace tr = abs_m_solve(S, b, prm);
        ++runs;
        if (!theorem4_bound_check(tr, y_condition(S, y))) ++failures;
      }
  }
  return {failures == 0, fmt("%d of %d runs violate the bound", failures, runs)};
}

// 10. Matrix-space iterates against the flattened vector engine; quasi-Newton checks.
Verdict matrix_space() {
  oracle::TestRng rng(10);
  double worst = 0.0;
  long mismatched = 0, instances = 0;
  for (Index n = 1; n <= 3; ++n)
    for (Index m = 1; m <= std::min<Index>(9, n * n + 1); ++m)
      for (int rep = 0; rep < 8; ++rep) {
        MatrixSystem sys;
        for (Index i = 0; i < m; ++i) {
          if (i > 0 && rep % 2 == 1 && i % 3 == 2) sys.terms.push_back(sys.terms[static_cast<std::size_t>(i - 2)]);
          else sys.terms.push_back(oracle::random_matrix(rng, n, n));
        }
        const Matrix F = sys.flattened_matrix();
        sys.rhs = F * oracle::random_matrix(rng, n * n, 1);
        for (auto [mp, fam] : {std::pair{MatParams::huang, Family::huang},
                               std::pair{MatParams::implicit_lu, Family::implicit_lu}}) {
          ++instances;
          MatSolveOptions mo;
          mo.params = mp;
          mo.record_iterates = true;
          const MatSolveReport mr = mat_abs_solve(sys, mo);
          SolveOptions so;
          so.record_iterates = true;
          const SolveReport vr = abs_solve(F, sys.rhs, *make_strategy(fam), so);
          if (mr.outcome != vr.outcome || mr.iterates.size() != vr.iterates.size()) {
            ++mismatched;
            continue;
          }
          for (std::size_t k = 0; k < vr.iterates.size(); ++k)
            worst = std::max(worst, (flatten(mr.iterates[k]) - vr.iterates[k]).norm() /
                                        (1.0 + vr.iterates[k].norm()));
        }
      }
  double qn_secant = 0.0, qn_sym = 0.0;
  for (int t = 0; t < 30; ++t) {
    const Index n = 2 + t % 3;
    const Vector d = oracle::random_matrix(rng, n, 1);
    const Vector r = oracle::random_matrix(rng, n, 1);
    const Matrix B = quasi_newton_solve(d, r, {QnConstraint::symmetry()});
    qn_secant = std::max(qn_secant, (B * d - r).norm() / (1.0 + r.norm()));
    qn_sym = std::max(qn_sym, (B - B.transpose()).cwiseAbs().maxCoeff());
  }
  const bool ok = mismatched == 0 && worst <= 1e-12 && qn_secant <= 1e-12 && qn_sym <= 1e-12;
  return {ok, fmt("%ld instances, %ld outcome mismatches, iterate diff %.1e; QN secant %.1e, symmetry %.1e",
                  instances, mismatched, worst, qn_secant, qn_sym)};
}

// 11. GILU vector form against the core engine; multiplication bound.
Verdict gilu() {
  oracle::TestRng rng(11);
  const Index n = 6;
  constexpr double c = 4.0;  // lower-order constant in n^3 + c n^2
  double worst = 0.0;
  std::uint64_t max_mults = 0;
  int compared = 0, outcome_mismatch = 0;
  for (int t = 0; t < 100; ++t) {
    const Matrix A = oracle::random_matrix(rng, n, n);
    const Vector b = oracle::random_matrix(rng, n, 1);
    const Matrix H1 = oracle::random_matrix(rng, n, n) + 2.0 * Matrix::Identity(n, n);
    const Matrix Z = oracle::random_matrix(rng, n, n) + 2.0 * Matrix::Identity(n, n);
    const SolveReport vec = gilu_vector_solve(A, b, H1, Z);
    const SolveReport core = abs_solve(A, b, *make_strategy(StrategyKind::gilu(Z.transpose() * H1)));
    if (vec.outcome != core.outcome) {
      ++outcome_mismatch;
      continue;
    }
    max_mults = std::max(max_mults, vec.mult_count);
    const auto& pv = vec.abaffian_final.search;
    const auto& pc = core.abaffian_final.search;
    if (pv.size() != pc.size()) {
      ++outcome_mismatch;
      continue;
    }
    for (std::size_t i = 0; i < pv.size(); ++i)
      worst = std::max(worst, (pv[i] - pc[i]).norm() / pc[i].norm());
    ++compared;
  }
  const double bound = n * n * n + c * n * n;
  const bool ok = outcome_mismatch == 0 && worst <= 1e-10 && static_cast<double>(max_mults) <= bound;
  return {ok, fmt("%d instances, search-vector diff %.1e, max mult_count %llu <= %.0f", compared, worst,
                  static_cast<unsigned long long>(max_mults), bound)};
}

// 12. Byte-identical bench tables for a fixed seed.
Verdict determinism() {
  BenchOptions o;
  o.sizes = {10, 30};
  o.seed = 12;
  o.threads = 4;
  const std::string a = format_table(run_bench(o), false);
  o.threads = 1;
  const std::string b = format_table(run_bench(o), false);
  o.threads = 4;
  const std::string c = format_table(run_bench(o), false);
  return {a == b && b == c, fmt("%zu bytes, runs identical: %s", a.size(), a == b && b == c ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"implicit LU multiplication count", op_count},
      {"compact implicit LU storage", storage},
      {"rank detection by modified Huang", rank_detection},
      {"null-space and factorization invariants", invariants},
      {"monotone norms", monotone},
      {"Diophantine soundness and completeness", diophantine},
      {"KT cross-validation and reuse", kt},
      {"Gauss-Seidel and Kaczmarz equivalence", classical},
      {"convergence-rate bound", rate_bound},
      {"matrix-space isomorphism and quasi-Newton", matrix_space},
      {"GILU equivalence", gilu},
      {"bench determinism", determinism},
  };
  int failed = 0;
  int k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    const auto t0 = Clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("[%s] %2d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", k, name, v.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", k - failed, k);
  return failed;
}
