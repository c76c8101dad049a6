#include <abspack/matrix_io.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace abspack {

namespace {

[[noreturn]] void parse_fail(const std::string& source, std::size_t line, const std::string& msg) {
  std::ostringstream os;
  os << source << ':' << line << ": " << msg;
  throw Error(Errc::parse_error, os.str());
}

std::vector<std::string> tokens_of(const std::string& raw) {
  std::string s = raw.substr(0, raw.find('%'));
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

bool parse_long(const std::string& t, long& v) {
  errno = 0;
  char* end = nullptr;
  v = std::strtol(t.c_str(), &end, 10);
  return errno == 0 && end && *end == '\0' && !t.empty();
}

bool parse_real(const std::string& t, double& v) {
  errno = 0;
  char* end = nullptr;
  v = std::strtod(t.c_str(), &end);
  return errno == 0 && end && *end == '\0' && !t.empty() && std::isfinite(v);
}

bool parse_integer(const std::string& t, BigInt& v) {
  std::size_t k = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (k == t.size()) return false;
  for (std::size_t i = k; i < t.size(); ++i)
    if (t[i] < '0' || t[i] > '9') return false;
  return v.set_str(t[0] == '+' ? t.substr(1) : t, 10) == 0;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MatrixFile read_matrix(std::istream& in, const std::string& source) {
  MatrixFile f;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  Index rows = 0;
  Index cols = 0;
  Index row = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = tokens_of(line);
    if (tok.empty()) continue;
    if (!have_header) {
      long r = 0;
      long c = 0;
      if (tok.size() != 3 || !parse_long(tok[0], r) || !parse_long(tok[1], c) || r < 1 || c < 1)
        parse_fail(source, lineno, "expected header 'rows cols real|integer'");
      if (tok[2] == "real") f.kind = EntryKind::real;
      else if (tok[2] == "integer") f.kind = EntryKind::integer;
      else parse_fail(source, lineno, "kind must be 'real' or 'integer', got '" + tok[2] + "'");
      rows = r;
      cols = c;
      f.values.resize(rows, cols);
      if (f.kind == EntryKind::integer) f.exact = IntMatrix(rows, cols);
      have_header = true;
      continue;
    }
    if (row == rows) parse_fail(source, lineno, "more rows than declared");
    if (static_cast<Index>(tok.size()) != cols) {
      std::ostringstream os;
      os << "row " << row + 1 << " has " << tok.size() << " entries, expected " << cols;
      parse_fail(source, lineno, os.str());
    }
    for (Index j = 0; j < cols; ++j) {
      const std::string& t = tok[static_cast<std::size_t>(j)];
      if (f.kind == EntryKind::integer) {
        BigInt v;
        if (!parse_integer(t, v)) parse_fail(source, lineno, "not an integer: '" + t + "'");
        f.values(row, j) = v.get_d();
        (*f.exact)(row, j) = std::move(v);
      } else {
        double v = 0.0;
        if (!parse_real(t, v)) parse_fail(source, lineno, "not a finite real: '" + t + "'");
        f.values(row, j) = v;
      }
    }
    ++row;
  }
  if (!have_header) parse_fail(source, lineno, "missing header");
  if (row != rows) {
    std::ostringstream os;
    os << "expected " << rows << " rows, found " << row;
    parse_fail(source, lineno, os.str());
  }
  return f;
}

MatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, path + ": cannot open file");
  return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const Matrix& M) {
  out << M.rows() << ' ' << M.cols() << " real\n";
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) out << (j ? " " : "") << format_real(M(i, j));
    out << '\n';
  }
}

void write_matrix(std::ostream& out, const IntMatrix& M) {
  out << M.rows() << ' ' << M.cols() << " integer\n";
  for (Index i = 0; i < M.rows(); ++i) {
    for (Index j = 0; j < M.cols(); ++j) out << (j ? " " : "") << M(i, j);
    out << '\n';
  }
}

void write_vector(std::ostream& out, const Vector& v) { write_matrix(out, Matrix(v)); }

void write_vector(std::ostream& out, const IntVector& v) {
  IntMatrix M(static_cast<Index>(v.size()), 1);
  for (std::size_t i = 0; i < v.size(); ++i) M(static_cast<Index>(i), 0) = v[i];
  write_matrix(out, M);
}

Vector as_vector(const MatrixFile& f) {
  if (f.cols() == 1) return f.values.col(0);
  if (f.rows() == 1) return f.values.row(0).transpose();
  throw Error(Errc::parse_error, "expected a vector (n x 1 or 1 x n)");
}

IntVector as_int_vector(const MatrixFile& f) {
  if (!f.exact) return int_vector_from(as_vector(f));
  const IntMatrix& M = *f.exact;
  IntVector v;
  if (M.cols() == 1) {
    for (Index i = 0; i < M.rows(); ++i) v.push_back(M(i, 0));
  } else if (M.rows() == 1) {
    v = M.row(0);
  } else {
    throw Error(Errc::parse_error, "expected a vector (n x 1 or 1 x n)");
  }
  return v;
}

}  // namespace abspack
