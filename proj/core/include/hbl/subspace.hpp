#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "hbl/rational.hpp"

namespace hbl {

struct RrefResult {
  RatMatrix echelon;                 // same shape as the input
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
  std::size_t rank = 0;
};

/// Reduced row-echelon form with leading entries equal to one.
RrefResult rref(const RatMatrix& m);
std::size_t rank(const RatMatrix& m);

class NotContained : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear subspace of Q^ambient stored by its reduced row-echelon basis.
/// Equal subspaces have identical stored bases, so equality and ordering are
/// entrywise.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient);  // the zero subspace

  static Subspace zero(std::size_t ambient) { return Subspace(ambient); }
  static Subspace full(std::size_t ambient);
  /// Span of the rows of `generators`.
  static Subspace span(const RatMatrix& generators);
  static Subspace coordinate(std::size_t ambient, std::span<const std::size_t> axes);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  std::size_t codim() const { return ambient_ - dim(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_; }

  const RatMatrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  /// The basis as columns: an ambient x dim embedding matrix.
  RatMatrix embedding() const { return basis_.transpose(); }

  bool contains(std::span<const Rat> v) const;
  bool contains(const Subspace& other) const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  /// Canonical order: dimension, then pivot columns, then basis entries.
  friend std::strong_ordering operator<=>(const Subspace& a, const Subspace& b);

 private:
  std::size_t ambient_ = 0;
  RatMatrix basis_;
  std::vector<std::size_t> pivots_;
};

Subspace kernel(const RatMatrix& m);
Subspace image(const RatMatrix& m, const Subspace& v);
Subspace image(const RatMatrix& m);  // column space
Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);
/// Vectors orthogonal to `v` under the standard pairing.
Subspace annihilator(const Subspace& v);
/// Coordinate complement spanned by the standard vectors at non-pivot columns.
Subspace complement(const Subspace& v);
/// {x : m x in u}
Subspace preimage(const RatMatrix& m, const Subspace& u);

/// Matrix of m restricted to `domain`, written in the stored bases of domain
/// and target (dim target x dim domain). Throws NotContained when m(domain)
/// leaves `target`.
RatMatrix restrict_map(const RatMatrix& m, const Subspace& domain, const Subspace& target);

struct QuotientMap {
  RatMatrix map;          // (rows - dim killed) x cols
  Subspace complement;    // coordinate complement of `killed` in the target
};

/// Composes m with the projection onto the coordinate complement of `killed`
/// along `killed`; the result is expressed in the complement's coordinates.
QuotientMap quotient_map(const RatMatrix& m, const Subspace& killed);

}  // namespace hbl
