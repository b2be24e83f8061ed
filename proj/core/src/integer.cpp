#include "hbl/integer.hpp"

#include <algorithm>

namespace hbl {

IntMatrix IntMatrix::from_ints(const std::vector<std::vector<long>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  IntMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionMismatch("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

RatMatrix IntMatrix::to_rational() const {
  RatMatrix out(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = Rat((*this)(r, c));
  return out;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product: inner dimensions differ");
  IntMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k)
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
  return out;
}

SmithForm smith_normal_form(const IntMatrix& m) {
  IntMatrix a = m;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<Int> diag;

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    // Bring the smallest nonzero entry of the remaining block to (t, t).
    auto find_min = [&]() -> bool {
      bool found = false;
      std::size_t br = t, bc = t;
      Int best;
      for (std::size_t r = t; r < rows; ++r)
        for (std::size_t c = t; c < cols; ++c) {
          if (sgn(a(r, c)) == 0) continue;
          Int v = abs(a(r, c));
          if (!found || v < best) {
            best = v;
            br = r;
            bc = c;
            found = true;
          }
        }
      if (!found) return false;
      for (std::size_t c = 0; c < cols; ++c) std::swap(a(t, c), a(br, c));
      for (std::size_t r = 0; r < rows; ++r) std::swap(a(r, t), a(r, bc));
      return true;
    };
    if (!find_min()) break;

    for (;;) {
      bool dirty = false;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (sgn(a(r, t)) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(r, t).get_mpz_t(), a(t, t).get_mpz_t());
        for (std::size_t c = t; c < cols; ++c) a(r, c) -= q * a(t, c);
        if (sgn(a(r, t)) != 0) dirty = true;
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (sgn(a(t, c)) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(t, c).get_mpz_t(), a(t, t).get_mpz_t());
        for (std::size_t r = t; r < rows; ++r) a(r, c) -= q * a(r, t);
        if (sgn(a(t, c)) != 0) dirty = true;
      }
      if (!dirty) break;
      find_min();
    }
    diag.push_back(abs(a(t, t)));
  }

  // diag(a, b) is equivalent to diag(gcd, lcm); repeat until the chain divides.
  for (std::size_t i = 0; i < diag.size(); ++i) {
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      Int g, l;
      mpz_gcd(g.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      mpz_lcm(l.get_mpz_t(), diag[i].get_mpz_t(), diag[j].get_mpz_t());
      diag[i] = g;
      diag[j] = l;
    }
  }
  SmithForm out;
  out.invariant_factors = std::move(diag);
  out.rank = out.invariant_factors.size();
  return out;
}

}  // namespace hbl
