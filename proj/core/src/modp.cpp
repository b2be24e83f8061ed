#include "hbl/modp.hpp"

#include <string>
#include <utility>

#include "hbl/subspace.hpp"

namespace hbl {

bool is_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p, new_r = a % p;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) throw BadPrime("element is not invertible mod " + std::to_string(p));
  if (t < 0) t += p;
  return static_cast<std::uint32_t>(t);
}

namespace {

std::uint32_t reduce_int(const Int& z, std::uint32_t p) {
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
  return static_cast<std::uint32_t>(r.get_ui());
}

}  // namespace

FpMatrix reduce_entries(const RatMatrix& m, std::uint32_t p) {
  if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
  FpMatrix out(p, m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const Rat& q = m(r, c);
      Int den(q.get_den());
      std::uint32_t d = reduce_int(den, p);
      if (d == 0) throw BadPrime("prime " + std::to_string(p) + " divides a denominator");
      std::uint64_t n = reduce_int(Int(q.get_num()), p);
      out(r, c) = static_cast<std::uint32_t>(n * inverse_mod(d, p) % p);
    }
  }
  return out;
}

FpMatrix mod_p_reduce(const RatMatrix& m, std::uint32_t p) {
  FpMatrix out = reduce_entries(m, p);
  if (rank_mod_p(out) != rank(m)) {
    throw BadPrime("rank drops modulo " + std::to_string(p));
  }
  return out;
}

std::size_t rank_mod_p_inplace(std::uint32_t* a, std::size_t rows, std::size_t cols, std::uint32_t p) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t k = c; k < cols; ++k) std::swap(a[piv * cols + k], a[r * cols + k]);
    const std::uint64_t inv = inverse_mod(a[r * cols + c], p);
    for (std::size_t i = r + 1; i < rows; ++i) {
      std::uint32_t x = a[i * cols + c];
      if (x == 0) continue;
      const std::uint64_t f = x * inv % p;
      for (std::size_t k = c; k < cols; ++k) {
        std::uint64_t sub = f * a[r * cols + k] % p;
        a[i * cols + k] = static_cast<std::uint32_t>((a[i * cols + k] + p - sub) % p);
      }
    }
    ++r;
  }
  return r;
}

std::size_t rank_mod_p(const FpMatrix& m) {
  std::vector<std::uint32_t> scratch = m.data();
  return rank_mod_p_inplace(scratch.data(), m.rows(), m.cols(), m.prime());
}

}  // namespace hbl
