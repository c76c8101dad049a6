#pragma once

#include <abspack/problems.hpp>

#include <string>
#include <vector>

namespace abspack {

struct BenchOptions {
  std::string suite = "determined";  // determined overdetermined underdetermined kt dio
  std::vector<std::string> methods;  // empty: suite defaults
  std::vector<Index> sizes{20};
  std::uint64_t seed = 1;
  bool timing = false;   // print wall-clock seconds instead of "-"
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ReportRow {
  std::string problem;
  std::string dims;
  std::string algorithm;
  Metrics metrics;
};

/// Problems of a suite, in report order. Throws Usage for an unknown suite.
std::vector<Problem> suite_problems(const std::string& suite, const std::vector<Index>& sizes,
                                    std::uint64_t seed);

/// One row per (problem, method), in problem-major order regardless of the
/// thread count.
std::vector<ReportRow> run_bench(const BenchOptions& options);

/// Two significant digits, mantissa in [0.1, 1): 1.4 -> "0.14D+01".
std::string fortran_e(double v);

std::string format_table(const std::vector<ReportRow>& rows, bool timing);

/// min(hardware threads, ABS_SOLVE_THREADS when set and positive), at least 1.
unsigned bench_threads();

}  // namespace abspack
