#include "hbl/rational.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace hbl {

namespace {

bool is_integer_text(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Rat parse_rat(std::string_view text) {
  std::string s = trim(text);
  auto slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!is_integer_text(num) || !is_integer_text(den) || den[0] == '-' || den[0] == '+') {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  Int n(num, 10);
  Int d(den, 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rat q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rat& q) { return q.get_str(10); }

std::strong_ordering compare(const Rat& a, const Rat& b) {
  int c = cmp(a, b);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

RatMatrix::RatMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RatMatrix RatMatrix::identity(std::size_t n) {
  RatMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<std::vector<Rat>>& rows, std::size_t cols) {
  RatMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

RatMatrix RatMatrix::from_ints(const std::vector<std::vector<long>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RatMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<Rat> RatMatrix::column(std::size_t c) const {
  std::vector<Rat> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

RatMatrix RatMatrix::transpose() const {
  RatMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

RatMatrix RatMatrix::stack(const RatMatrix& below) const {
  if (cols_ != below.cols_) throw DimensionMismatch("stack: column counts differ");
  RatMatrix out(rows_ + below.rows_, cols_);
  std::copy(data_.begin(), data_.end(), out.data_.begin());
  std::copy(below.data_.begin(), below.data_.end(), out.data_.begin() + data_.size());
  return out;
}

RatMatrix RatMatrix::select_rows(std::span<const std::size_t> rows) const {
  RatMatrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < cols_; ++c) out(i, c) = (*this)(rows[i], c);
  return out;
}

std::vector<Rat> RatMatrix::apply(std::span<const Rat> v) const {
  if (v.size() != cols_) throw DimensionMismatch("apply: vector length differs from column count");
  std::vector<Rat> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Rat acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (sgn(v[c]) != 0) acc += (*this)(r, c) * v[c];
    }
    out[r] = acc;
  }
  return out;
}

bool RatMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rat& q) { return sgn(q) == 0; });
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product: inner dimensions differ");
  RatMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rat& aik = a(i, k);
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (sgn(b(k, j)) != 0) out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

std::strong_ordering compare(const RatMatrix& a, const RatMatrix& b) {
  if (auto c = a.rows() <=> b.rows(); c != 0) return c;
  if (auto c = a.cols() <=> b.cols(); c != 0) return c;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (auto o = compare(a(r, c), b(r, c)); o != 0) return o;
  return std::strong_ordering::equal;
}

Int common_denominator(std::span<const Rat> values) {
  Int d = 1;
  for (const Rat& q : values) {
    Int g;
    mpz_lcm(g.get_mpz_t(), d.get_mpz_t(), q.get_den_mpz_t());
    d = g;
  }
  return d;
}

Rat determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("determinant of non-square matrix");
  RatMatrix a = m;
  const std::size_t n = a.rows();
  Rat det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && sgn(a(piv, col)) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(a(r, col)) == 0) continue;
      Rat f = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

std::string to_string(const RatMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << to_string(m(r, c));
    os << ']';
  }
  os << ']';
  return os.str();
}

}  // namespace hbl
