#pragma once

#include <abspack/integer.hpp>

#include <iosfwd>
#include <optional>
#include <string>

namespace abspack {

enum class EntryKind { real, integer };

/// Text matrix file:
///   % comment (anywhere on a line)
///   rows cols real|integer
///   one whitespace-delimited row per line
/// Vectors are stored as n x 1 matrices.
struct MatrixFile {
  EntryKind kind = EntryKind::real;
  Matrix values;                    // integer entries beyond 2^53 are rounded here
  std::optional<IntMatrix> exact;   // set for integer files

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
};

/// Throws ParseError naming `source` and the line.
MatrixFile read_matrix(std::istream& in, const std::string& source = "<input>");
MatrixFile read_matrix_file(const std::string& path);

/// Reals use %.17g, so write-then-read is the identity.
void write_matrix(std::ostream& out, const Matrix& M);
void write_matrix(std::ostream& out, const IntMatrix& M);
void write_vector(std::ostream& out, const Vector& v);
void write_vector(std::ostream& out, const IntVector& v);

/// Column n x 1 file to a vector; a 1 x n file is accepted too.
Vector as_vector(const MatrixFile& f);
IntVector as_int_vector(const MatrixFile& f);

}  // namespace abspack
