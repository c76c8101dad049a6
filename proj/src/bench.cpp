#include <abspack/bench.hpp>

#include <abspack/methods.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace abspack {

namespace {

Problem make(ProblemKind kind, MatrixFamily family, Index n, Index rank, std::uint64_t seed) {
  ProblemSpec s;
  s.kind = kind;
  s.family = family;
  s.n = n;
  s.target_rank = rank;
  s.seed = seed;
  return generate(s);
}

}  // namespace

std::vector<Problem> suite_problems(const std::string& suite, const std::vector<Index>& sizes,
                                    std::uint64_t seed) {
  std::vector<Problem> out;
  std::uint64_t k = 0;
  auto next_seed = [&]() { return seed + 7919 * k++; };
  for (Index n : sizes) {
    require(n >= 1, "bench: sizes must be positive");
    if (suite == "determined") {
      out.push_back(make(ProblemKind::determined, MatrixFamily::random, n, 0, next_seed()));
      if (n > 4) out.push_back(make(ProblemKind::determined, MatrixFamily::random, n, 4, next_seed()));
      out.push_back(make(ProblemKind::determined, MatrixFamily::hilbert_like_int, n, 0, next_seed()));
      out.push_back(make(ProblemKind::determined, MatrixFamily::twopower_illcond, n, 0, next_seed()));
    } else if (suite == "overdetermined") {
      out.push_back(make(ProblemKind::overdetermined, MatrixFamily::random, n, 0, next_seed()));
    } else if (suite == "underdetermined") {
      out.push_back(make(ProblemKind::underdetermined, MatrixFamily::random, n, 0, next_seed()));
    } else if (suite == "kt") {
      out.push_back(make(ProblemKind::kt, MatrixFamily::random, n, 0, next_seed()));
    } else if (suite == "dio") {
      out.push_back(make(ProblemKind::diophantine, MatrixFamily::random, n, 0, next_seed()));
    } else {
      throw Error(Errc::usage, "unknown suite '" + suite + "'");
    }
  }
  return out;
}

unsigned bench_threads() {
  unsigned t = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ABS_SOLVE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) t = std::min(t, static_cast<unsigned>(cap));
  }
  return t;
}

std::vector<ReportRow> run_bench(const BenchOptions& options) {
  const std::vector<std::string> methods =
      options.methods.empty() ? default_methods(options.suite) : options.methods;
  if (methods.empty()) throw Error(Errc::usage, "bench: empty method list");
  for (const auto& m : methods) validate_method(m);
  const std::vector<Problem> problems = suite_problems(options.suite, options.sizes, options.seed);

  std::vector<ReportRow> rows(problems.size() * methods.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t = next++; t < rows.size(); t = next++) {
      const Problem& p = problems[t / methods.size()];
      const std::string& method = methods[t % methods.size()];
      ReportRow& row = rows[t];
      row.problem = p.name;
      std::ostringstream d;
      d << p.A.rows() << 'x' << p.A.cols();
      row.dims = d.str();
      row.algorithm = method;
      row.metrics = evaluate(method, p);
    }
  };

  const unsigned nthreads = std::min<unsigned>(
      options.threads ? options.threads : bench_threads(), static_cast<unsigned>(rows.size()));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::string fortran_e(double v) {
  if (!std::isfinite(v)) return "NaN";
  if (v == 0.0) return "0.00D+00";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", std::abs(v));
  // buf is "d.dE+xx"
  const int exponent = std::atoi(buf + 4) + 1;
  char out[32];
  std::snprintf(out, sizeof out, "%s0.%c%cD%+03d", v < 0 ? "-" : "", buf[0], buf[2], exponent);
  return out;
}

std::string format_table(const std::vector<ReportRow>& rows, bool timing) {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-10s %-14s %-10s %-10s %6s %8s\n", "PROBLEM", "DIMS",
                "ALGORITHM", "REL.ERR", "REL.RES", "RANK", "TIME");
  os << line;
  for (const ReportRow& r : rows) {
    const Metrics& m = r.metrics;
    std::string time = "-";
    if (timing) {
      char t[32];
      std::snprintf(t, sizeof t, "%.2f", m.elapsed_seconds);
      time = t;
    }
    if (m.failed) {
      std::snprintf(line, sizeof line, "%-16s %-10s %-14s %-21s %6s %8s\n", r.problem.c_str(),
                    r.dims.c_str(), r.algorithm.c_str(), "--- break-down ---", "-", time.c_str());
    } else {
      const std::string rank = m.detected_rank ? std::to_string(*m.detected_rank) : "-";
      std::snprintf(line, sizeof line, "%-16s %-10s %-14s %-10s %-10s %6s %8s\n",
                    r.problem.c_str(), r.dims.c_str(), r.algorithm.c_str(),
                    fortran_e(m.rel_solution_error).c_str(),
                    fortran_e(m.rel_residual_error).c_str(), rank.c_str(), time.c_str());
    }
    os << line;
  }
  return os.str();
}

}  // namespace abspack
