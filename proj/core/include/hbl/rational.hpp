#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hbl {

/// Exact rational scalar. gmpxx keeps results of arithmetic in lowest terms.
using Rat = mpq_class;
using Int = mpz_class;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses "a/b" or "a" (optionally signed). Floating-point text is rejected.
Rat parse_rat(std::string_view text);
std::string to_string(const Rat& q);

std::strong_ordering compare(const Rat& a, const Rat& b);

/// Dense row-major matrix of rationals. A matrix may have zero rows or zero
/// columns; its shape is still tracked.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols);

  static RatMatrix identity(std::size_t n);
  static RatMatrix from_rows(const std::vector<std::vector<Rat>>& rows, std::size_t cols);
  static RatMatrix from_ints(const std::vector<std::vector<long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rat& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rat& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const Rat> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Rat> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::vector<Rat> column(std::size_t c) const;

  RatMatrix transpose() const;
  /// Rows of *this followed by rows of `below`.
  RatMatrix stack(const RatMatrix& below) const;
  /// Keeps the listed rows, in the given order.
  RatMatrix select_rows(std::span<const std::size_t> rows) const;
  std::vector<Rat> apply(std::span<const Rat> v) const;
  bool is_zero() const;

  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
  friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rat> data_;
};

/// Row-major lexicographic comparison after shape.
std::strong_ordering compare(const RatMatrix& a, const RatMatrix& b);

/// Common denominator (lcm) of a list of rationals; 1 for an empty list.
Int common_denominator(std::span<const Rat> values);

/// Exact determinant of a square matrix.
Rat determinant(const RatMatrix& m);

std::string to_string(const RatMatrix& m);

}  // namespace hbl
