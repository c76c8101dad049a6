#pragma once

#include <abspack/types.hpp>

#include <iosfwd>
#include <optional>
#include <vector>

namespace abspack {

/// Y in the error norm |x - x*|_Y. v_k = A^{-T} Y p_k is never formed.
enum class YScaling {
  identity,          // Y = I
  normal_equations,  // Y = A^T A
  energy_norm,       // Y = A, A symmetric positive definite
};

/// Seeds z_k for the search vectors.
enum class Seed {
  gradient,      // Y (x_k - x*), or A^T r_k when Y = I
  cyclic_unit,   // e_k cyclic; a_k = A^T e_k when Y = I
};

const char* to_string(YScaling y);

struct IterParams {
  Index m = 1;
  YScaling scaling = YScaling::energy_norm;
  Seed seed = Seed::gradient;
  std::optional<Vector> x1;
  Index max_iter = 1000;
  double rtol = 1e-10;
  bool restart = false;  // clear the window every m steps instead of sliding it
  std::optional<Vector> x_star;  // enables error and angle tracking
};

enum class StopReason { converged, max_iter };

/// Entry 0 describes x_1; entry k describes x_{k+1}. `alpha[k-1]`, `gamma[k-1]`
/// and `search[k-1]` belong to the step producing x_{k+1}.
struct IterTrace {
  std::vector<Vector> x;
  std::vector<double> residual;
  std::vector<double> error_Y;  // empty without x_star
  std::vector<double> alpha;
  std::vector<double> gamma;    // |p^T Y e| / (|p| |Y e|); empty without x_star
  std::vector<Vector> search;
  StopReason stop = StopReason::max_iter;

  Index iterations() const { return static_cast<Index>(alpha.size()); }
  const Vector& final_x() const { return x.back(); }
};

/// Full Bodon-ABS recursion with w_k = z_k: exactly n steps on an n x n
/// system. Throws StrategyBreakdown(k) when v_k^T A p_k vanishes.
Vector bodon_abs_full(const Matrix& A, const Vector& b, const Vector& x1, const Matrix& V,
                      const Matrix& Z, const Matrix& H1,
                      std::vector<Vector>* iterates = nullptr);

/// Truncated ABS(m): p_k is the seed made Y-conjugate to the previous m-1
/// search vectors. Throws Stagnation when the pivot vanishes before
/// convergence.
IterTrace abs_m_solve(const Matrix& A, const Vector& b, const IterParams& params);

/// Largest over smallest eigenvalue of Y.
double y_condition(const Matrix& A, YScaling y);

/// Checks |e_{k+1}|_Y <= sqrt(1 - gamma^2 / cond) |e_k|_Y + 1e-10 |e_1|_Y at
/// every step. A negative `gamma` uses the running minimum of the traced
/// angles.
bool theorem4_bound_check(const IterTrace& trace, double Y_cond, double gamma = -1.0);

/// "k,residual[,error_Y]" lines with a header.
void write_residual_history(const IterTrace& trace, std::ostream& os);

}  // namespace abspack
