#include <abspack/methods.hpp>

#include <abspack/diophantine.hpp>
#include <abspack/iterative.hpp>
#include <abspack/kt.hpp>
#include <abspack/strategies.hpp>

#include <Eigen/LU>

#include <limits>
#include <sstream>

namespace abspack {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void bad_method(const std::string& id, const std::string& why) {
  throw Error(Errc::usage, "unknown method '" + id + "': " + why);
}

struct KtSpec {
  PMethod p = PMethod::A1;
  ZMethod z = ZMethod::B1;
  Family strategy = Family::modified_huang;
};

KtSpec parse_kt(const std::string& id) {
  const auto parts = split(id, ':');
  if (parts.size() < 2 || parts.size() > 3 || parts[1].size() != 4 || parts[1][0] != 'a' ||
      parts[1][2] != 'b')
    bad_method(id, "expected kt:a{1,2}b{1,2}[:mhuang|:ilx]");
  KtSpec k;
  const char pa = parts[1][1];
  const char zb = parts[1][3];
  if ((pa != '1' && pa != '2') || (zb != '1' && zb != '2'))
    bad_method(id, "expected kt:a{1,2}b{1,2}[:mhuang|:ilx]");
  k.p = pa == '1' ? PMethod::A1 : PMethod::A2;
  k.z = zb == '1' ? ZMethod::B1 : ZMethod::B2;
  if (parts.size() == 3) {
    if (parts[2] == "ilx") k.strategy = Family::implicit_lx;
    else if (parts[2] != "mhuang") bad_method(id, "KT strategy must be mhuang or ilx");
  }
  return k;
}

struct AbsmSpec {
  Index m = 0;
  std::optional<YScaling> y;
  Seed seed = Seed::gradient;
  Index max_iter = 0;  // 0: 100 n
};

Index parse_count(const std::string& id, const std::string& v) {
  try {
    std::size_t used = 0;
    const long k = std::stol(v, &used);
    if (used != v.size() || k < 1) bad_method(id, "expected a positive integer, got '" + v + "'");
    return static_cast<Index>(k);
  } catch (const std::logic_error&) {
    bad_method(id, "expected a positive integer, got '" + v + "'");
  }
}

AbsmSpec parse_absm(const std::string& id) {
  const auto parts = split(id, ':');
  AbsmSpec s;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) bad_method(id, "expected key=value, got '" + parts[i] + "'");
    const std::string key = parts[i].substr(0, eq);
    const std::string val = parts[i].substr(eq + 1);
    if (key == "m") {
      s.m = parse_count(id, val);
    } else if (key == "y") {
      if (val == "I" || val == "i") s.y = YScaling::identity;
      else if (val == "ata") s.y = YScaling::normal_equations;
      else if (val == "a") s.y = YScaling::energy_norm;
      else bad_method(id, "y must be I, ata or a");
    } else if (key == "seed") {
      if (val == "grad") s.seed = Seed::gradient;
      else if (val == "unit") s.seed = Seed::cyclic_unit;
      else bad_method(id, "seed must be grad or unit");
    } else if (key == "maxit") {
      s.max_iter = parse_count(id, val);
    } else {
      bad_method(id, "unknown key '" + key + "'");
    }
  }
  if (s.m == 0 || !s.y) bad_method(id, "expected absm:m=K:y=I|ata|a");
  return s;
}

MethodResult from_report(const SolveReport& rep) {
  MethodResult r;
  r.outcome = rep.outcome;
  r.x = rep.x;
  r.rank = rep.rank;
  r.mult_count = rep.mult_count;
  r.failed_step = rep.failed_step;
  r.message = rep.message;
  return r;
}

MethodResult breakdown(const std::string& msg, Index step = 0) {
  MethodResult r;
  r.outcome = Outcome::breakdown;
  r.failed_step = step;
  r.message = msg;
  return r;
}

MethodResult run_lu(const MethodInput& in) {
  const Index n = in.A.rows();
  if (in.A.cols() != n) return breakdown("lu needs a square matrix");
  const Eigen::PartialPivLU<Matrix> lu(in.A);
  if (!(lu.rcond() > 16 * std::numeric_limits<double>::epsilon()))
    return breakdown("matrix is singular to working precision");
  MethodResult r;
  r.x = lu.solve(in.b);
  r.rank = n;
  r.mult_count = static_cast<std::uint64_t>(n * n * n / 3 + n * n);
  return r;
}

MethodResult run_dio(const MethodInput& in) {
  const IntMatrix A = in.A_int ? *in.A_int : IntMatrix::from(in.A);
  const IntVector b = in.b_int ? *in.b_int : int_vector_from(in.b);
  const DioReport rep = dio_solve(A, b);
  MethodResult r;
  Index rank = 0;
  for (auto s : rep.eq_status)
    if (s == DioStatus::independent) ++rank;
  r.rank = rank;
  r.failed_step = rep.failed_row;
  r.message = rep.message;
  if (rep.solvable()) {
    r.x_int = *rep.x_particular;
    r.x = to_double(*rep.x_particular);
  } else {
    r.outcome = Outcome::incompatible;
  }
  return r;
}

MethodResult run_kt(const std::string& id, const MethodInput& in) {
  const KtSpec k = parse_kt(id);
  const Index N = in.A.rows();
  const Index M = in.kt_constraints;
  if (in.A.cols() != N) return breakdown("KT methods need the square block matrix");
  if (M < 1 || M > N / 2) return breakdown("KT methods need 1 <= constraints <= n");
  const Index n = N - M;
  KTSystem sys{in.A.topLeftCorner(n, n), in.A.bottomLeftCorner(M, n), in.b.head(n), in.b.tail(M)};
  const KTSolution sol = kt_solve(sys, k.p, k.z, StrategyKind{k.strategy, {}, false});
  MethodResult r;
  Vector x(N);
  x << sol.p, sol.z;
  r.x = std::move(x);
  r.rank = N;
  r.mult_count = sol.mult_count;
  return r;
}

MethodResult run_absm(const std::string& id, const MethodInput& in) {
  const AbsmSpec s = parse_absm(id);
  IterParams p;
  p.m = s.m;
  p.scaling = *s.y;
  p.seed = s.seed;
  p.max_iter = s.max_iter > 0 ? s.max_iter : 100 * in.A.cols();
  const IterTrace tr = abs_m_solve(in.A, in.b, p);
  MethodResult r;
  r.mult_count = 0;
  if (tr.stop == StopReason::converged) {
    r.x = tr.final_x();
  } else {
    std::ostringstream msg;
    msg << "no convergence in " << tr.iterations() << " iterations";
    r = breakdown(msg.str());
  }
  return r;
}

}  // namespace

void validate_method(const std::string& id) {
  if (id.empty()) bad_method(id, "empty name");
  if (id == "lu" || id == "dio" || parse_family(id)) return;
  if (id.rfind("kt:", 0) == 0) {
    parse_kt(id);
    return;
  }
  if (id.rfind("absm:", 0) == 0) {
    parse_absm(id);
    return;
  }
  bad_method(id, "not registered");
}

MethodResult run_method(const std::string& id, const MethodInput& in) {
  validate_method(id);
  try {
    if (id == "lu") return run_lu(in);
    if (id == "dio") return run_dio(in);
    if (id.rfind("kt:", 0) == 0) return run_kt(id, in);
    if (id.rfind("absm:", 0) == 0) return run_absm(id, in);
    const Family f = *parse_family(id);
    if (f == Family::implicit_lu) return from_report(implicit_lu_solve(in.A, in.b, false, in.tol));
    SolveOptions opt;
    opt.tol = in.tol;
    return from_report(abs_solve(in.A, in.b, *make_strategy(f), opt));
  } catch (const Error& e) {
    if (e.code() == Errc::usage || e.code() == Errc::shape_mismatch) throw;
    return breakdown(e.what(), e.index());
  }
}

bool is_least_norm(const std::string& id) {
  return id == "huang" || id == "mhuang" || id == "ostab";
}

std::vector<std::string> default_methods(const std::string& suite) {
  if (suite == "kt") return {"kt:a1b1", "kt:a1b2", "kt:a2b1", "kt:a2b2", "lu"};
  if (suite == "dio") return {"dio"};
  if (suite == "overdetermined") return {"huang", "mhuang", "iqr"};
  if (suite == "underdetermined") return {"huang", "mhuang", "ilu", "ilx"};
  return {"huang", "mhuang", "ilu", "ilx", "lu"};
}

}  // namespace abspack
