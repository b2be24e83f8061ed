#include "hbl/polytope.hpp"

#include <algorithm>
#include <set>

namespace hbl {

namespace {

bool row_less(const Inequality& a, const Inequality& b) {
  if (a.coeffs != b.coeffs) return a.coeffs < b.coeffs;
  return a.rhs < b.rhs;
}

// `b` implies `a` when t >= 0.
bool implies(const Inequality& b, const Inequality& a) {
  if (b.rhs < a.rhs) return false;
  for (std::size_t j = 0; j < a.coeffs.size(); ++j)
    if (b.coeffs[j] > a.coeffs[j]) return false;
  return true;
}

}  // namespace

Equality homogeneity_row(const BLDatum& d) {
  Equality e;
  for (const auto& f : d.factors) e.coeffs.push_back(Rat(static_cast<long>(f.target_dim)));
  e.rhs = Rat(static_cast<long>(d.n));
  return e;
}

BLPolytope constraints_from_profiles(const std::vector<DimProfile>& profiles, std::size_t m,
                                     std::optional<Equality> homogeneity) {
  BLPolytope p;
  p.m = m;
  p.equality = std::move(homogeneity);
  std::vector<Inequality> rows;
  for (const auto& prof : profiles) {
    if (prof.dim_V == 0) continue;
    if (prof.image_dims.size() != m) throw DimensionMismatch("profile has the wrong number of factors");
    Inequality r;
    for (auto d : prof.image_dims) r.coeffs.push_back(Rat(static_cast<long>(d)));
    r.rhs = Rat(static_cast<long>(prof.dim_V));
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(), row_less);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bool dominated = false;
    for (std::size_t k = 0; k < rows.size() && !dominated; ++k)
      if (k != i && implies(rows[k], rows[i])) dominated = true;
    if (!dominated) p.rows.push_back(rows[i]);
  }
  return p;
}

bool satisfies(const BLPolytope& p, const ExponentVector& t) {
  if (t.size() != p.m) return false;
  for (const auto& x : t)
    if (sgn(x) < 0 || x > 1) return false;
  for (const auto& r : p.rows) {
    Rat s = 0;
    for (std::size_t j = 0; j < p.m; ++j) s += r.coeffs[j] * t[j];
    if (s < r.rhs) return false;
  }
  if (p.equality) {
    Rat s = 0;
    for (std::size_t j = 0; j < p.m; ++j) s += p.equality->coeffs[j] * t[j];
    if (s != p.equality->rhs) return false;
  }
  return true;
}

TightSet tight_set(const BLPolytope& p, const ExponentVector& t) {
  TightSet ts;
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    Rat s = 0;
    for (std::size_t j = 0; j < p.m; ++j) s += p.rows[i].coeffs[j] * t[j];
    if (s == p.rows[i].rhs) ts.rows.push_back(i);
  }
  for (std::size_t j = 0; j < p.m; ++j) {
    if (sgn(t[j]) == 0) ts.at_zero.push_back(j);
    if (t[j] == 1) ts.at_one.push_back(j);
  }
  if (p.equality) {
    Rat s = 0;
    for (std::size_t j = 0; j < p.m; ++j) s += p.equality->coeffs[j] * t[j];
    ts.equality = s == p.equality->rhs;
  }
  return ts;
}

namespace {

// Augmented rows [a | b] kept in reduced echelon form during the search.
struct Echelon {
  std::vector<std::vector<Rat>> rows;
  std::vector<std::size_t> pivots;

  bool add(std::vector<Rat> r, std::size_t m) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Rat f = r[pivots[i]];
      if (sgn(f) == 0) continue;
      for (std::size_t c = 0; c <= m; ++c) r[c] -= f * rows[i][c];
    }
    std::size_t piv = 0;
    while (piv < m && sgn(r[piv]) == 0) ++piv;
    if (piv == m) return false;
    const Rat inv = 1 / r[piv];
    for (auto& x : r) x *= inv;
    for (auto& row : rows) {
      const Rat f = row[piv];
      if (sgn(f) == 0) continue;
      for (std::size_t c = 0; c <= m; ++c) row[c] -= f * r[c];
    }
    rows.push_back(std::move(r));
    pivots.push_back(piv);
    return true;
  }
};

struct VertexSearch {
  const BLPolytope& p;
  std::vector<std::vector<Rat>> candidates;
  std::vector<int> box_coord;  // coordinate fixed by a box facet, or -1
  std::set<ExponentVector> found;

  void run(const Echelon& e, std::size_t start, std::vector<char>& fixed) {
    if (e.rows.size() == p.m) {
      ExponentVector t(p.m);
      for (std::size_t i = 0; i < p.m; ++i) t[e.pivots[i]] = e.rows[i][p.m];
      if (satisfies(p, t)) found.insert(std::move(t));
      return;
    }
    const std::size_t need = p.m - e.rows.size();
    for (std::size_t i = start; i + need <= candidates.size(); ++i) {
      const int bc = box_coord[i];
      if (bc >= 0 && fixed[bc]) continue;
      Echelon next = e;
      if (!next.add(candidates[i], p.m)) continue;
      if (bc >= 0) fixed[bc] = 1;
      run(next, i + 1, fixed);
      if (bc >= 0) fixed[bc] = 0;
    }
  }
};

}  // namespace

VertexSet enumerate_vertices(const BLPolytope& p) {
  if (p.m > kMaxVertexFactors) {
    throw DimensionTooLarge("vertex enumeration supports at most " + std::to_string(kMaxVertexFactors) + " factors");
  }
  VertexSet out;
  out.complete = p.complete;
  if (p.m == 0) return out;
  VertexSearch search{p, {}, {}, {}};
  for (const auto& r : p.rows) {
    std::vector<Rat> a = r.coeffs;
    a.push_back(r.rhs);
    search.candidates.push_back(std::move(a));
    search.box_coord.push_back(-1);
  }
  for (long value : {0L, 1L}) {
    for (std::size_t j = 0; j < p.m; ++j) {
      std::vector<Rat> a(p.m + 1);
      a[j] = 1;
      a[p.m] = value;
      search.candidates.push_back(std::move(a));
      search.box_coord.push_back(static_cast<int>(j));
    }
  }
  Echelon start;
  if (p.equality) {
    std::vector<Rat> a = p.equality->coeffs;
    a.push_back(p.equality->rhs);
    if (!start.add(std::move(a), p.m)) {
      // A zero equality row: either vacuous or infeasible.
      if (sgn(p.equality->rhs) != 0) return out;
    }
  }
  std::vector<char> fixed(p.m, 0);
  search.run(start, 0, fixed);
  for (const auto& v : search.found) {
    out.vertices.push_back(v);
    out.tight.push_back(tight_set(p, v));
  }
  return out;
}

VertexClass classify_vertex(const BLPolytope& p, const ExponentVector& v) {
  VertexClass c;
  TightSet ts = tight_set(p, v);
  for (auto i : ts.rows)
    if (sgn(p.rows[i].rhs) > 0) c.critical_rows.push_back(i);
  c.zero_coords = ts.at_zero;
  c.single_factor_unit = p.m == 1 && v.size() == 1 && v[0] == 1;
  return c;
}

}  // namespace hbl
