#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "hbl/datum.hpp"
#include "hbl/datum_io.hpp"
#include "hbl/explore.hpp"

namespace hbl::test {

inline std::string fixture(const std::string& name) { return std::string(HBL_FIXTURE_DIR) + "/" + name; }
inline BLDatum load_fixture(const std::string& name) { return load_datum(fixture(name)).continuum(); }

inline RatMatrix drop_coordinate(std::size_t n, std::size_t j) {
  RatMatrix m(n - 1, n);
  for (std::size_t r = 0, c = 0; c < n; ++c)
    if (c != j) m(r++, c) = 1;
  return m;
}

inline BLDatum loomis_whitney(std::size_t n, ExponentVector t, Mode mode = Mode::Global) {
  BLDatum d;
  d.mode = mode;
  d.n = n;
  for (std::size_t j = 0; j < n; ++j) d.factors.push_back({n - 1, drop_coordinate(n, j)});
  d.t = std::move(t);
  return validate(d);
}

inline BLDatum young(ExponentVector t, Mode mode = Mode::Global) {
  BLDatum d;
  d.mode = mode;
  d.n = 2;
  d.factors = {{1, RatMatrix::from_ints({{1, 0}})}, {1, RatMatrix::from_ints({{0, 1}})}, {1, RatMatrix::from_ints({{1, -1}})}};
  d.t = std::move(t);
  return validate(d);
}

inline BLDatum holder(std::size_t n, ExponentVector t) {
  BLDatum d;
  d.n = n;
  for (std::size_t j = 0; j < t.size(); ++j) d.factors.push_back({n, RatMatrix::identity(n)});
  d.t = std::move(t);
  return validate(d);
}

inline ExponentVector ts(std::initializer_list<const char*> xs) {
  ExponentVector t;
  for (auto x : xs) t.push_back(parse_rat(x));
  return t;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(g_); }
  Rat rat(long span = 3) {
    Rat q(integer(-span, span), integer(1, 3));
    q.canonicalize();
    return q;
  }
  RatMatrix matrix(std::size_t r, std::size_t c, long span = 3) {
    RatMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = integer(0, 2) == 0 ? Rat(0) : rat(span);
    return m;
  }
  Subspace subspace(std::size_t n) { return Subspace::span(matrix(integer(0, n), n)); }
  /// Random surjective map onto a target of the given dimension.
  RatMatrix surjection(std::size_t r, std::size_t n) {
    for (;;) {
      RatMatrix m = matrix(r, n, 2);
      if (rank(m) == r) return m;
    }
  }
  /// Exponents on the 1/4 grid.
  Rat grid_t() {
    Rat q(integer(0, 4), 4);
    q.canonicalize();
    return q;
  }
  BLDatum datum(std::size_t n, std::size_t m, Mode mode = Mode::Global) {
    BLDatum d;
    d.mode = mode;
    d.n = n;
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t r = integer(1, n);
      d.factors.push_back({r, surjection(r, n)});
      d.t.push_back(grid_t());
    }
    return validate(d);
  }
  /// A datum with c = 0: the last exponent absorbs the gap when it can.
  std::optional<BLDatum> homogeneous_datum(std::size_t n, std::size_t m) {
    BLDatum d = datum(n, m);
    Rat gap = homogeneity_gap(d);
    Rat last = d.t.back() + gap / static_cast<long>(d.factors.back().target_dim);
    if (sgn(last) < 0 || last > 1) return std::nullopt;
    d.t.back() = last;
    return validate(d);
  }
  std::mt19937_64& engine() { return g_; }

 private:
  std::mt19937_64 g_;
};

/// Small budget for property loops.
inline SearchBudget quick_budget() {
  SearchBudget b;
  b.random_subspace_samples = 200;
  return b;
}

}  // namespace hbl::test
