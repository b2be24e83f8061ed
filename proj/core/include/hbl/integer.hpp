#pragma once

#include <cstddef>
#include <vector>

#include "hbl/rational.hpp"

namespace hbl {

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static IntMatrix from_ints(const std::vector<std::vector<long>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RatMatrix to_rational() const;
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

struct SmithForm {
  std::vector<Int> invariant_factors;  // positive, d1 | d2 | ..., zeros omitted
  std::size_t rank = 0;
};

SmithForm smith_normal_form(const IntMatrix& m);

}  // namespace hbl
