#include <algorithm>
#include <unordered_map>

#include "hbl/explore.hpp"

namespace hbl {

std::uint64_t grassmannian_count(std::size_t k, std::uint32_t p) {
  // [n, s]_p = [n-1, s-1]_p + p^s [n-1, s]_p
  std::vector<std::uint64_t> row{1};
  for (std::size_t n = 1; n <= k; ++n) {
    std::vector<std::uint64_t> next(n + 1, 1);
    std::uint64_t ps = 1;
    for (std::size_t s = 1; s < n; ++s) {
      ps *= p;
      next[s] = row[s - 1] + ps * row[s];
    }
    row = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto x : row) total += x;
  return total;
}

Subspace lift(const FpMatrix& rep, bool symmetric) {
  const long p = rep.prime();
  RatMatrix m(rep.rows(), rep.cols());
  for (std::size_t r = 0; r < rep.rows(); ++r)
    for (std::size_t c = 0; c < rep.cols(); ++c) {
      long x = rep(r, c);
      if (symmetric && 2 * x > p) x -= p;
      m(r, c) = x;
    }
  return Subspace::span(m);
}

namespace {

struct Reduced {
  std::size_t rows;
  std::vector<std::uint32_t> data;  // rows x k
};

std::uint64_t encode(std::size_t s, const std::vector<std::size_t>& dims) {
  std::uint64_t key = s;
  for (auto d : dims) key = (key << 5) | d;
  return key;
}

}  // namespace

ScanTable scan_view(const std::vector<RatMatrix>& maps, std::size_t k, std::uint32_t p,
                    std::size_t reps_per_profile) {
  if (maps.size() > 11) throw std::invalid_argument("scan supports at most 11 maps");
  std::vector<Reduced> red;
  for (const auto& g : maps) {
    if (g.cols() != k) throw DimensionMismatch("scan map has the wrong number of columns");
    FpMatrix f = mod_p_reduce(g, p);
    red.push_back({g.rows(), f.data()});
  }

  ScanTable table;
  table.p = p;
  std::unordered_map<std::uint64_t, std::size_t> index;
  std::vector<std::uint32_t> basis;
  std::vector<std::uint32_t> scratch;
  std::vector<std::size_t> dims(maps.size());

  for (std::size_t s = 0; s <= k; ++s) {
    // Pivot sets as increasing column lists.
    std::vector<std::size_t> piv(s);
    for (std::size_t i = 0; i < s; ++i) piv[i] = i;
    while (true) {
      std::vector<bool> is_piv(k, false);
      for (auto c : piv) is_piv[c] = true;
      std::vector<std::pair<std::size_t, std::size_t>> free;
      for (std::size_t r = 0; r < s; ++r)
        for (std::size_t c = piv[r] + 1; c < k; ++c)
          if (!is_piv[c]) free.emplace_back(r, c);

      basis.assign(s * k, 0);
      for (std::size_t r = 0; r < s; ++r) basis[r * k + piv[r]] = 1;
      std::vector<std::uint32_t> digits(free.size(), 0);
      while (true) {
        for (std::size_t f = 0; f < free.size(); ++f) basis[free[f].first * k + free[f].second] = digits[f];

        for (std::size_t j = 0; j < red.size(); ++j) {
          const std::size_t rj = red[j].rows;
          scratch.assign(rj * s, 0);
          for (std::size_t i = 0; i < rj; ++i)
            for (std::size_t r = 0; r < s; ++r) {
              std::uint64_t acc = 0;
              for (std::size_t c = 0; c < k; ++c) acc += std::uint64_t(red[j].data[i * k + c]) * basis[r * k + c];
              scratch[i * s + r] = static_cast<std::uint32_t>(acc % p);
            }
          dims[j] = rank_mod_p_inplace(scratch.data(), rj, s, p);
        }

        std::uint64_t key = encode(s, dims);
        auto it = index.find(key);
        if (it == index.end()) {
          it = index.emplace(key, table.entries.size()).first;
          table.entries.push_back({DimProfile{s, dims, false}, 0, {}, false});
        }
        ScanTable::Entry& e = table.entries[it->second];
        ++e.count;
        if (e.reps.size() < reps_per_profile) {
          FpMatrix rep(p, s, k);
          for (std::size_t r = 0; r < s; ++r)
            for (std::size_t c = 0; c < k; ++c) rep(r, c) = basis[r * k + c];
          e.reps.push_back(std::move(rep));
        }
        ++table.count;

        std::size_t f = 0;
        while (f < digits.size() && ++digits[f] == p) digits[f++] = 0;
        if (f == digits.size()) break;
      }

      // Next combination.
      std::size_t i = s;
      while (i > 0 && piv[i - 1] == k - s + i - 1) --i;
      if (i == 0) break;
      ++piv[i - 1];
      for (std::size_t j = i; j < s; ++j) piv[j] = piv[j - 1] + 1;
    }
  }
  std::sort(table.entries.begin(), table.entries.end(),
            [](const ScanTable::Entry& a, const ScanTable::Entry& b) { return a.profile < b.profile; });
  return table;
}

}  // namespace hbl
