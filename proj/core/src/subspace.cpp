#include "hbl/subspace.hpp"

#include <algorithm>

namespace hbl {

RrefResult rref(const RatMatrix& m) {
  RrefResult out{m, {}, 0};
  RatMatrix& a = out.echelon;
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && sgn(a(piv, c)) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      for (std::size_t k = 0; k < cols; ++k) std::swap(a(piv, k), a(r, k));
    }
    if (a(r, c) != 1) {
      Rat inv = 1 / a(r, c);
      for (std::size_t k = c; k < cols; ++k) {
        if (sgn(a(r, k)) != 0) a(r, k) *= inv;
      }
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a(i, c)) == 0) continue;
      Rat f = a(i, c);
      for (std::size_t k = c; k < cols; ++k) {
        if (sgn(a(r, k)) != 0) a(i, k) -= f * a(r, k);
      }
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

std::size_t rank(const RatMatrix& m) { return rref(m).rank; }

Subspace::Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}

Subspace Subspace::full(std::size_t ambient) {
  Subspace s(ambient);
  s.basis_ = RatMatrix::identity(ambient);
  s.pivots_.resize(ambient);
  for (std::size_t i = 0; i < ambient; ++i) s.pivots_[i] = i;
  return s;
}

Subspace Subspace::span(const RatMatrix& generators) {
  RrefResult r = rref(generators);
  Subspace s(generators.cols());
  std::vector<std::size_t> keep(r.rank);
  for (std::size_t i = 0; i < r.rank; ++i) keep[i] = i;
  s.basis_ = r.echelon.select_rows(keep);
  s.pivots_ = std::move(r.pivots);
  return s;
}

Subspace Subspace::coordinate(std::size_t ambient, std::span<const std::size_t> axes) {
  RatMatrix g(axes.size(), ambient);
  for (std::size_t i = 0; i < axes.size(); ++i) {
    if (axes[i] >= ambient) throw DimensionMismatch("coordinate axis out of range");
    g(i, axes[i]) = 1;
  }
  return span(g);
}

bool Subspace::contains(std::span<const Rat> v) const {
  if (v.size() != ambient_) throw DimensionMismatch("contains: vector length differs from ambient dimension");
  std::vector<Rat> rest(v.begin(), v.end());
  for (std::size_t i = 0; i < dim(); ++i) {
    Rat f = rest[pivots_[i]];
    if (sgn(f) == 0) continue;
    for (std::size_t c = 0; c < ambient_; ++c) {
      if (sgn(basis_(i, c)) != 0) rest[c] -= f * basis_(i, c);
    }
  }
  return std::all_of(rest.begin(), rest.end(), [](const Rat& q) { return sgn(q) == 0; });
}

bool Subspace::contains(const Subspace& other) const {
  if (other.ambient_ != ambient_) throw DimensionMismatch("contains: ambient dimensions differ");
  if (other.dim() > dim()) return false;
  for (std::size_t i = 0; i < other.dim(); ++i) {
    if (!contains(other.basis_.row(i))) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const Subspace& a, const Subspace& b) {
  if (auto c = a.ambient_ <=> b.ambient_; c != 0) return c;
  if (auto c = a.dim() <=> b.dim(); c != 0) return c;
  if (auto c = a.pivots_ <=> b.pivots_; c != 0) return c;
  return compare(a.basis_, b.basis_);
}

Subspace kernel(const RatMatrix& m) {
  RrefResult r = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  RatMatrix g(free_cols.size(), n);
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    std::size_t f = free_cols[k];
    g(k, f) = 1;
    for (std::size_t i = 0; i < r.rank; ++i) g(k, r.pivots[i]) = -r.echelon(i, f);
  }
  return Subspace::span(g);
}

Subspace image(const RatMatrix& m, const Subspace& v) {
  if (v.ambient_dim() != m.cols()) throw DimensionMismatch("image: subspace ambient differs from map domain");
  // rows of (m * basis^T)^T = basis * m^T
  return Subspace::span(v.basis() * m.transpose());
}

Subspace image(const RatMatrix& m) { return Subspace::span(m.transpose()); }

Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("sum: ambient dimensions differ");
  return Subspace::span(a.basis().stack(b.basis()));
}

Subspace annihilator(const Subspace& v) { return kernel(v.basis()); }

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw DimensionMismatch("intersect: ambient dimensions differ");
  if (a.contains(b)) return b;
  if (b.contains(a)) return a;
  return kernel(annihilator(a).basis().stack(annihilator(b).basis()));
}

Subspace complement(const Subspace& v) {
  const std::size_t n = v.ambient_dim();
  std::vector<bool> is_pivot(n, false);
  for (auto p : v.pivots()) is_pivot[p] = true;
  std::vector<std::size_t> axes;
  for (std::size_t c = 0; c < n; ++c)
    if (!is_pivot[c]) axes.push_back(c);
  return Subspace::coordinate(n, axes);
}

Subspace preimage(const RatMatrix& m, const Subspace& u) {
  if (u.ambient_dim() != m.rows()) throw DimensionMismatch("preimage: subspace ambient differs from map target");
  return kernel(quotient_map(m, u).map);
}

RatMatrix restrict_map(const RatMatrix& m, const Subspace& domain, const Subspace& target) {
  if (domain.ambient_dim() != m.cols() || target.ambient_dim() != m.rows()) {
    throw DimensionMismatch("restrict_map: shapes differ");
  }
  RatMatrix out(target.dim(), domain.dim());
  for (std::size_t k = 0; k < domain.dim(); ++k) {
    std::vector<Rat> y = m.apply(domain.basis().row(k));
    std::vector<Rat> rest = y;
    for (std::size_t i = 0; i < target.dim(); ++i) {
      Rat coeff = y[target.pivots()[i]];
      out(i, k) = coeff;
      if (sgn(coeff) == 0) continue;
      for (std::size_t c = 0; c < y.size(); ++c) rest[c] -= coeff * target.basis()(i, c);
    }
    if (!std::all_of(rest.begin(), rest.end(), [](const Rat& q) { return sgn(q) == 0; })) {
      throw NotContained("restrict_map: image of domain is not contained in target");
    }
  }
  return out;
}

QuotientMap quotient_map(const RatMatrix& m, const Subspace& killed) {
  if (killed.ambient_dim() != m.rows()) throw DimensionMismatch("quotient_map: killed subspace lives outside the target");
  Subspace comp = complement(killed);
  const auto& keep = comp.pivots();
  RatMatrix out(keep.size(), m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) {
    std::vector<Rat> y = m.column(c);
    for (std::size_t i = 0; i < killed.dim(); ++i) {
      Rat f = y[killed.pivots()[i]];
      if (sgn(f) == 0) continue;
      for (std::size_t r = 0; r < y.size(); ++r) {
        if (sgn(killed.basis()(i, r)) != 0) y[r] -= f * killed.basis()(i, r);
      }
    }
    for (std::size_t r = 0; r < keep.size(); ++r) out(r, c) = y[keep[r]];
  }
  return {std::move(out), std::move(comp)};
}

}  // namespace hbl
