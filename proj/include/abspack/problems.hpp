#pragma once

#include <abspack/integer.hpp>
#include <abspack/kt.hpp>

#include <optional>
#include <string>

namespace abspack {

/// 64-bit linear congruential generator, x <- a x + c mod 2^64 with
/// a = 6364136223846793005, c = 1442695040888963407. Draws use the high
/// 32 bits of the new state.
class Lcg {
 public:
  static constexpr std::uint64_t multiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t increment = 1442695040888963407ULL;

  explicit Lcg(std::uint64_t seed) : state_(seed) {}

  std::uint32_t next() {
    state_ = state_ * multiplier + increment;
    return static_cast<std::uint32_t>(state_ >> 32);
  }
  /// Uniform on [lo, hi] (modulo bias is accepted; ranges are tiny).
  long uniform(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next() % span);
  }

 private:
  std::uint64_t state_;
};

enum class ProblemKind { determined, overdetermined, underdetermined, kt, diophantine };

/// Matrix families for real systems.
enum class MatrixFamily {
  random,            // F G with random integer factors; rank = target_rank
  hilbert_like_int,  // round(2^20 / (i + j + 1)), full rank
  twopower_illcond,  // unit upper triangular with -1 above the diagonal, rows scaled by 2^(i mod 8)
};

const char* to_string(ProblemKind k);
const char* to_string(MatrixFamily f);

struct ProblemSpec {
  ProblemKind kind = ProblemKind::determined;
  MatrixFamily family = MatrixFamily::random;
  Index n = 10;  // unknowns (KT: size of G)
  Index m = 0;   // equations (KT: constraints); 0 picks a default from n and kind
  Index target_rank = 0;  // 0 means full rank min(m, n)
  long entry_bound = 9;
  std::uint64_t seed = 1;
};

struct Problem {
  std::string name;
  ProblemSpec spec;
  Matrix A;
  Vector b;
  Vector x_true;
  Vector x_min_norm;  // least-norm solution of A x = b
  Index certified_rank = 0;
  std::optional<KTSystem> kt;
  std::optional<IntMatrix> A_int;
  std::optional<IntVector> b_int;
  std::optional<IntVector> x_int;
};

/// Builds a problem whose entries and right-hand side are exact integers.
/// Throws UnrepresentableEntry when a value exceeds 2^53 in magnitude.
Problem generate(const ProblemSpec& spec);

/// Exact rank: Bareiss for small matrices, otherwise rank modulo the prime
/// 2^61 - 1, which can only underestimate. Entries must be integers.
Index certified_rank(const Matrix& A);

/// Rank modulo 2^61 - 1.
Index modular_rank(const Matrix& A);

struct Metrics {
  bool failed = false;
  Outcome outcome = Outcome::solved;
  double rel_solution_error = 0.0;
  double rel_residual_error = 0.0;
  std::optional<Index> detected_rank;
  double elapsed_seconds = 0.0;
  std::uint64_t mult_count = 0;
  std::string message;
};

/// Error metrics of `x` against the problem. `least_norm` selects x_min_norm
/// as the reference when the solution is not unique.
Metrics score(const Problem& problem, const Vector& x, bool least_norm = false);

/// Runs a registered method (see methods.hpp) and scores it. Least-norm
/// methods are compared against x_min_norm when the solution is not unique.
Metrics evaluate(const std::string& solver_id, const Problem& problem);

}  // namespace abspack
