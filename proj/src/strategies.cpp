#include <abspack/strategies.hpp>

#include <cmath>
#include <string>

namespace abspack {

const char* to_string(Family f) {
  switch (f) {
    case Family::huang: return "huang";
    case Family::modified_huang: return "mhuang";
    case Family::implicit_lu: return "ilu";
    case Family::implicit_lx: return "ilx";
    case Family::implicit_qr: return "iqr";
    case Family::conjugate_direction: return "cgdir";
    case Family::optimally_stable: return "ostab";
    case Family::gilu: return "gilu";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::huang, Family::modified_huang, Family::implicit_lu, Family::implicit_lx,
                   Family::implicit_qr, Family::conjugate_direction, Family::optimally_stable,
                   Family::gilu})
    if (name == to_string(f)) return f;
  return std::nullopt;
}

namespace {

Vector unit(Index n, Index k) { return Vector::Unit(n, k); }

class Huang final : public ParameterStrategy {
 public:
  std::string name() const override { return "huang"; }
  Vector projection_seed(const StepContext& ctx, const Vector&) const override {
    return ctx.A.row(ctx.step).transpose();
  }
};

// p = H(H a), H <- H - p p^T / p^T p. H stays symmetric.
class ModifiedHuang final : public ParameterStrategy {
 public:
  explicit ModifiedHuang(bool second) : second_(second) {}

  std::string name() const override { return "mhuang"; }
  Vector projection_seed(const StepContext&, const Vector& s) const override { return s; }

  Vector direction(const StepContext& ctx, const Vector& s, const Vector&,
                   OpCounter& ops) const override {
    const Matrix& H = ctx.state.H;
    Vector p = H * s;
    ops.add(H.size());
    if (second_) {
      p = H * p;
      ops.add(H.size());
    }
    return p;
  }

  void update(Matrix& H, const Vector&, const Vector&, const Vector& p,
              OpCounter& ops) const override {
    const Index n = H.rows();
    const double pp = p.squaredNorm();
    const Vector f = p / pp;
    ops.add(2 * n + 1);
    H.noalias() -= f * p.transpose();
    ops.add(H.size());
  }

 private:
  bool second_;
};

class ImplicitLU final : public ParameterStrategy {
 public:
  std::string name() const override { return "ilu"; }
  Vector projection_seed(const StepContext& ctx, const Vector&) const override {
    return unit(ctx.A.cols(), ctx.step);
  }
};

// z = w = e_k with k maximizing |e_k^T H a|; ties go to the smallest index.
class ImplicitLX final : public ParameterStrategy {
 public:
  std::string name() const override { return "ilx"; }
  Vector projection_seed(const StepContext& ctx, const Vector& s) const override {
    Index k = 0;
    double best = -1.0;
    for (Index j = 0; j < s.size(); ++j) {
      if (std::abs(s(j)) > best) {
        best = std::abs(s(j));
        k = j;
      }
    }
    return unit(ctx.A.cols(), k);
  }
};

// v = A p with p = H^T e_i; one step per unknown, so m > n is allowed.
class ImplicitQR final : public ParameterStrategy {
 public:
  std::string name() const override { return "iqr"; }
  Index step_count(Index, Index n) const override { return n; }
  Vector scaling(const StepContext& ctx) const override {
    const Vector p = ctx.state.H.row(ctx.step).transpose();
    ctx.ops.add(ctx.A.size());
    return ctx.A * p;
  }
  Vector projection_seed(const StepContext& ctx, const Vector&) const override {
    return unit(ctx.A.cols(), ctx.step);
  }
};

// v = p with p = H^T e_i. Symmetry is checked up front; definiteness only
// through the sign of each pivot p^T A p.
class ConjugateDirection final : public ParameterStrategy {
 public:
  std::string name() const override { return "cgdir"; }
  Vector scaling(const StepContext& ctx) const override {
    const Matrix& A = ctx.A;
    if (ctx.step == 0) {
      if (A.rows() != A.cols())
        throw Error(Errc::unsupported_shape, "conjugate direction needs a square matrix");
      const double scale = A.cwiseAbs().maxCoeff();
      if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
        throw Error(Errc::unsupported_shape, "conjugate direction needs a symmetric matrix");
    }
    const Vector p = ctx.state.H.row(ctx.step).transpose();
    const double curvature = p.dot(A * p);
    ctx.ops.add(A.size() + A.cols());
    if (!(curvature > 0.0))
      throw Error(Errc::strategy_breakdown,
                  "step " + std::to_string(ctx.step + 1) + ": nonpositive pivot p^T A p",
                  ctx.step + 1);
    return p;
  }
  Vector projection_seed(const StepContext& ctx, const Vector&) const override {
    return unit(ctx.A.cols(), ctx.step);
  }
};

// Realized through z = w = H a: orthogonal search vectors and least-norm
// iterates without forming A^{-T}.
class OptimallyStable final : public ParameterStrategy {
 public:
  std::string name() const override { return "ostab"; }
  Vector projection_seed(const StepContext&, const Vector& s) const override { return s; }
};

class Gilu final : public ParameterStrategy {
 public:
  explicit Gilu(Matrix H1) : H1_(std::move(H1)) {}
  std::string name() const override { return "gilu"; }
  Matrix initial_H1(Index n) const override {
    if (H1_.size() == 0) return Matrix::Identity(n, n);
    return H1_;
  }
  Vector projection_seed(const StepContext& ctx, const Vector&) const override {
    return unit(ctx.A.cols(), ctx.step);
  }

 private:
  Matrix H1_;
};

}  // namespace

std::unique_ptr<ParameterStrategy> make_strategy(const StrategyKind& kind) {
  switch (kind.family) {
    case Family::huang: return std::make_unique<Huang>();
    case Family::modified_huang: return std::make_unique<ModifiedHuang>(kind.second_reprojection);
    case Family::implicit_lu: return std::make_unique<ImplicitLU>();
    case Family::implicit_lx: return std::make_unique<ImplicitLX>();
    case Family::implicit_qr: return std::make_unique<ImplicitQR>();
    case Family::conjugate_direction: return std::make_unique<ConjugateDirection>();
    case Family::optimally_stable: return std::make_unique<OptimallyStable>();
    case Family::gilu:
      if (kind.H1.size() != 0) {
        require(kind.H1.rows() == kind.H1.cols(), "GILU H1 must be square");
        if (std::abs(kind.H1.determinant()) == 0.0)
          throw Error(Errc::singular, "GILU H1 must be nonsingular");
      }
      return std::make_unique<Gilu>(kind.H1);
  }
  throw Error(Errc::usage, "unknown strategy");
}

FixedParameters::FixedParameters(Matrix H1, Matrix V, Matrix Z, Matrix W)
    : H1_(std::move(H1)), V_(std::move(V)), Z_(std::move(Z)), W_(std::move(W)) {
  require(V_.cols() == Z_.cols() && Z_.cols() == W_.cols(),
          "FixedParameters: V, Z, W need the same number of columns");
  require(Z_.rows() == W_.rows(), "FixedParameters: Z and W need the same number of rows");
}

Matrix FixedParameters::initial_H1(Index n) const {
  if (H1_.size() == 0) return Matrix::Identity(n, n);
  return H1_;
}

Index FixedParameters::step_count(Index, Index) const { return V_.cols(); }

Vector FixedParameters::scaling(const StepContext& ctx) const { return V_.col(ctx.step); }

Vector FixedParameters::projection_seed(const StepContext& ctx, const Vector&) const {
  return W_.col(ctx.step);
}

Vector FixedParameters::direction_seed(const StepContext& ctx, const Vector&, const Vector&) const {
  return Z_.col(ctx.step);
}

Vector modified_huang_direction(const Matrix& H, const Vector& a, double tol,
                                bool second_reprojection) {
  require(H.rows() == H.cols() && H.cols() == a.size(), "modified_huang_direction: shape mismatch");
  Vector p = H * (H * a);
  if (second_reprojection) p = H * p;
  if (p.norm() <= tol * a.norm())
    throw Error(Errc::dependent_row, "row is dependent on the rows already processed");
  return p;
}

Matrix modified_huang_update(const Matrix& H, const Vector& p) {
  require(H.rows() == p.size(), "modified_huang_update: shape mismatch");
  return H - p * p.transpose() / p.squaredNorm();
}

}  // namespace abspack
