#include <abspack/cli.hpp>

#include <abspack/bench.hpp>
#include <abspack/matrix_io.hpp>
#include <abspack/methods.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace abspack {

namespace {

struct SolveArgs {
  std::string matrix;
  std::string rhs;
  std::string method = "mhuang";
  std::optional<double> tol;
  Index constraints = 0;
  std::string out;
};

struct BenchArgs {
  std::string suite = "determined";
  std::optional<std::string> methods;
  std::vector<Index> sizes{20};
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool timing = false;
  std::string out;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Writes to `path`, or to `out` when the path is empty or "-".
bool emit(const std::string& path, std::ostream& out, std::ostream& err,
          const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return true;
  }
  std::ofstream f(path);
  if (!f) {
    err << "abs-solve: cannot write " << path << '\n';
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  validate_method(a.method);
  const MatrixFile A = read_matrix_file(a.matrix);
  const MatrixFile bf = read_matrix_file(a.rhs);
  const Vector b = as_vector(bf);
  if (b.size() != A.rows()) {
    err << "abs-solve: right-hand side has " << b.size() << " entries, matrix has " << A.rows()
        << " rows\n";
    return exit_code::parse_error;
  }
  std::optional<IntVector> b_int;
  if (bf.exact) b_int = as_int_vector(bf);

  MethodInput in{A.values, b, nullptr, nullptr, 0, {}};
  if (A.exact) in.A_int = &*A.exact;
  if (b_int) in.b_int = &*b_int;
  in.kt_constraints = a.constraints;
  if (a.tol) in.tol = Tolerances{*a.tol, *a.tol};

  const MethodResult r = run_method(a.method, in);
  if (r.outcome != Outcome::solved) {
    err << "abs-solve: " << to_string(r.outcome);
    if (!r.message.empty()) err << ": " << r.message;
    err << '\n';
    return r.outcome == Outcome::incompatible ? exit_code::incompatible : exit_code::breakdown;
  }

  std::ostringstream text;
  if (r.x_int) write_vector(text, *r.x_int);
  else write_vector(text, *r.x);
  if (!emit(a.out, out, err, text.str())) return exit_code::usage;
  if (r.rank) err << "abs-solve: rank " << *r.rank << '\n';
  return exit_code::solved;
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  BenchOptions o;
  o.suite = a.suite;
  if (a.methods) {
    o.methods = split_list(*a.methods);
    if (o.methods.empty()) throw Error(Errc::usage, "bench: empty method list");
  }
  o.sizes = a.sizes;
  o.seed = a.seed;
  o.timing = a.timing;
  o.threads = a.threads;
  const auto rows = run_bench(o);
  return emit(a.out, out, err, format_table(rows, a.timing)) ? exit_code::solved : exit_code::usage;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ABS solvers for linear, Diophantine and KT systems", "abs-solve"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve A x = b read from matrix files");
  solve->add_option("matrix", sa.matrix, "Matrix file")->required();
  solve->add_option("rhs", sa.rhs, "Right-hand side file")->required();
  solve->add_option("--method", sa.method, "Method name")->capture_default_str();
  solve->add_option("--tol", sa.tol, "Dependency and residual tolerance");
  solve->add_option("--constraints", sa.constraints, "KT: number of constraint rows")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--out", sa.out, "Solution file (default stdout)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite and print a report table");
  bench->add_option("--suite", ba.suite, "determined|overdetermined|underdetermined|kt|dio")
      ->capture_default_str();
  bench->add_option("--methods", ba.methods, "Comma-separated method names");
  bench->add_option("--sizes", ba.sizes, "Comma-separated sizes")->delimiter(',');
  bench->add_option("--seed", ba.seed, "Generator seed")->capture_default_str();
  bench->add_option("--threads", ba.threads, "Worker threads (0: ABS_SOLVE_THREADS or all)");
  bench->add_flag("--timing", ba.timing, "Print wall-clock seconds");
  bench->add_option("--out", ba.out, "Report file (default stdout)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "abs-solve: " << e.what() << '\n';
    return exit_code::usage;
  }

  try {
    if (*solve) return cmd_solve(sa, out, err);
    return cmd_bench(ba, out, err);
  } catch (const Error& e) {
    err << "abs-solve: " << e.what() << '\n';
    switch (e.code()) {
      case Errc::parse_error: return exit_code::parse_error;
      case Errc::usage:
      case Errc::shape_mismatch: return exit_code::usage;
      case Errc::incompatible_system: return exit_code::incompatible;
      default: return exit_code::breakdown;
    }
  }
}

}  // namespace abspack
