#pragma once

#include <abspack/strategies.hpp>

namespace abspack {

/// G p + C^T z = g,  C p = c.
struct KTSystem {
  Matrix G;  // n x n
  Matrix C;  // m x n, full row rank
  Vector g;  // n
  Vector c;  // m

  /// The (n+m) x (n+m) block matrix.
  Matrix assembled() const;
  Vector assembled_rhs() const;
};

struct KTSolution {
  Vector p;
  Vector z;
  double residual_full = 0.0;  // |K (p;z) - rhs| / |rhs|
  std::uint64_t mult_count = 0;
};

enum class PMethod { A1, A2 };
enum class ZMethod { B1, B2 };

/// Factors of the ABS solve of C p = c: p_{m+1}, H_{m+1}, P and L = C P.
/// Immutable once built; may be shared across threads.
class KtFactorization {
 public:
  /// `strategy` must be modified Huang or implicit LX (implicit LU with
  /// column pivoting). Throws SingularKT when C is rank deficient.
  KtFactorization(const Matrix& C, const Vector& c, const StrategyKind& strategy);

  const Matrix& C() const { return C_; }
  const Vector& c() const { return c_; }
  const Vector& p_particular() const { return p0_; }
  const Matrix& H() const { return H_; }
  const Matrix& P() const { return P_; }
  const Matrix& L() const { return L_; }
  const StrategyKind& strategy() const { return kind_; }
  std::uint64_t mult_count() const { return mults_; }

 private:
  Matrix C_;
  Vector c_;
  Vector p0_;
  Matrix H_;
  Matrix P_;
  Matrix L_;
  StrategyKind kind_;
  std::uint64_t mults_ = 0;
};

/// Solve against a prepared factorization. mult_count excludes the C stage.
KTSolution kt_solve_with(const KtFactorization& f, const Matrix& G, const Vector& g,
                         PMethod p_method, ZMethod z_method);

/// Full solve. mult_count includes the C stage.
KTSolution kt_solve(const KTSystem& sys, PMethod p_method, ZMethod z_method,
                    const StrategyKind& strategy = {Family::modified_huang, {}, false});

/// Dense LU with partial pivoting on the assembled matrix. Throws Singular.
KTSolution kt_dense_baseline(const KTSystem& sys);

const char* to_string(PMethod m);
const char* to_string(ZMethod m);

}  // namespace abspack
