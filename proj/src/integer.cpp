#include <abspack/integer.hpp>

#include <cmath>
#include <utility>

namespace abspack {

IntMatrix::IntMatrix(Index rows, Index cols, std::initializer_list<long> values)
    : IntMatrix(rows, cols) {
  require(static_cast<Index>(values.size()) == rows * cols, "IntMatrix: wrong number of entries");
  std::size_t k = 0;
  for (long v : values) data_[k++] = v;
}

IntMatrix IntMatrix::identity(Index n) {
  IntMatrix I(n, n);
  for (Index i = 0; i < n; ++i) I(i, i) = 1;
  return I;
}

IntMatrix IntMatrix::from(const Eigen::MatrixXd& M) {
  IntMatrix R(M.rows(), M.cols());
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) {
      const double v = M(i, j);
      require(std::isfinite(v) && std::floor(v) == v, "IntMatrix::from: entry is not an integer");
      R(i, j) = v;
    }
  return R;
}

IntVector IntMatrix::row(Index i) const {
  IntVector r(static_cast<std::size_t>(cols_));
  for (Index j = 0; j < cols_; ++j) r[static_cast<std::size_t>(j)] = (*this)(i, j);
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix T(cols_, rows_);
  for (Index i = 0; i < rows_; ++i)
    for (Index j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
  return T;
}

bool IntMatrix::is_zero() const {
  for (const auto& v : data_)
    if (sgn(v) != 0) return false;
  return true;
}

Eigen::MatrixXd IntMatrix::to_double() const {
  Eigen::MatrixXd M(rows_, cols_);
  for (Index i = 0; i < rows_; ++i)
    for (Index j = 0; j < cols_; ++j) M(i, j) = (*this)(i, j).get_d();
  return M;
}

IntVector make_int_vector(std::initializer_list<long> values) {
  IntVector v;
  v.reserve(values.size());
  for (long x : values) v.emplace_back(x);
  return v;
}

IntVector int_vector_from(const Eigen::VectorXd& v) {
  IntVector r(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    require(std::isfinite(v(i)) && std::floor(v(i)) == v(i), "int_vector_from: entry is not an integer");
    r[static_cast<std::size_t>(i)] = v(i);
  }
  return r;
}

Eigen::VectorXd to_double(const IntVector& v) {
  Eigen::VectorXd r(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Index>(i)) = v[i].get_d();
  return r;
}

IntVector operator*(const IntMatrix& A, const IntVector& x) {
  require(static_cast<Index>(x.size()) == A.cols(), "IntMatrix * IntVector: shape mismatch");
  IntVector y(static_cast<std::size_t>(A.rows()));
  for (Index i = 0; i < A.rows(); ++i) {
    BigInt acc = 0;
    for (Index j = 0; j < A.cols(); ++j) acc += A(i, j) * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

IntMatrix operator*(const IntMatrix& A, const IntMatrix& B) {
  require(A.cols() == B.rows(), "IntMatrix * IntMatrix: shape mismatch");
  IntMatrix C(A.rows(), B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index k = 0; k < A.cols(); ++k) {
      if (sgn(A(i, k)) == 0) continue;
      for (Index j = 0; j < B.cols(); ++j) C(i, j) += A(i, k) * B(k, j);
    }
  return C;
}

BigInt dot(const IntVector& a, const IntVector& b) {
  require(a.size() == b.size(), "dot: length mismatch");
  BigInt acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

bool is_zero(const IntVector& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

namespace {

// Bareiss elimination with row pivoting on a working copy; returns the rank
// and the signed determinant of the leading block when square.
std::pair<Index, BigInt> bareiss(IntMatrix M) {
  const Index m = M.rows();
  const Index n = M.cols();
  BigInt prev = 1;
  BigInt sign = 1;
  Index r = 0;
  for (Index c = 0; c < n && r < m; ++c) {
    Index piv = r;
    while (piv < m && sgn(M(piv, c)) == 0) ++piv;
    if (piv == m) continue;
    if (piv != r) {
      for (Index j = 0; j < n; ++j) std::swap(M(piv, j), M(r, j));
      sign = -sign;
    }
    for (Index i = r + 1; i < m; ++i) {
      for (Index j = c + 1; j < n; ++j) {
        M(i, j) = M(i, j) * M(r, c) - M(i, c) * M(r, j);
        mpz_divexact(M(i, j).get_mpz_t(), M(i, j).get_mpz_t(), prev.get_mpz_t());
      }
      M(i, c) = 0;
    }
    prev = M(r, c);
    ++r;
  }
  BigInt det = 0;
  if (m == n && r == n) det = sign * prev;
  return {r, det};
}

}  // namespace

BigInt determinant(const IntMatrix& A) {
  require(A.rows() == A.cols(), "determinant: matrix must be square");
  if (A.rows() == 0) return 1;
  return bareiss(A).second;
}

Index exact_rank(const IntMatrix& A) { return bareiss(A).first; }

}  // namespace abspack
