#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hbl/rational.hpp"

namespace hbl {

/// Signals that a prime is unsuitable for the data at hand; pick another one.
class BadPrime : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense matrix over F_p with entries in [0, p).
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
      : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::uint32_t prime() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::uint32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<std::uint32_t>& data() const { return data_; }

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

 private:
  std::uint32_t p_ = 2;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint32_t> data_;
};

bool is_prime(std::uint32_t p);
std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p);

/// Entrywise reduction. Throws BadPrime when p divides a denominator.
FpMatrix reduce_entries(const RatMatrix& m, std::uint32_t p);
/// Entrywise reduction that also requires the F_p rank to equal the rational
/// rank. Throws BadPrime otherwise.
FpMatrix mod_p_reduce(const RatMatrix& m, std::uint32_t p);

std::size_t rank_mod_p(const FpMatrix& m);
/// Rank of a small row-major matrix over F_p, destroying `scratch`.
std::size_t rank_mod_p_inplace(std::uint32_t* scratch, std::size_t rows, std::size_t cols, std::uint32_t p);

}  // namespace hbl
