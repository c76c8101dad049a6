#pragma once

#include <abspack/types.hpp>

#include <gmpxx.h>

#include <initializer_list>
#include <vector>

namespace abspack {

using BigInt = mpz_class;
using IntVector = std::vector<BigInt>;

/// Dense row-major matrix of arbitrary-precision integers. Zero rows or
/// columns are allowed.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}
  IntMatrix(Index rows, Index cols, std::initializer_list<long> values);

  static IntMatrix identity(Index n);
  static IntMatrix from(const Eigen::MatrixXd& M);  // entries must be integral

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  BigInt& operator()(Index i, Index j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const BigInt& operator()(Index i, Index j) const {
    return data_[static_cast<std::size_t>(i * cols_ + j)];
  }

  IntVector row(Index i) const;
  IntMatrix transpose() const;
  bool is_zero() const;

  Eigen::MatrixXd to_double() const;

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<BigInt> data_;
};

IntVector make_int_vector(std::initializer_list<long> values);
IntVector int_vector_from(const Eigen::VectorXd& v);
Eigen::VectorXd to_double(const IntVector& v);

IntVector operator*(const IntMatrix& A, const IntVector& x);
IntMatrix operator*(const IntMatrix& A, const IntMatrix& B);
BigInt dot(const IntVector& a, const IntVector& b);
bool is_zero(const IntVector& v);

/// Fraction-free (Bareiss) elimination.
BigInt determinant(const IntMatrix& A);
Index exact_rank(const IntMatrix& A);

}  // namespace abspack
