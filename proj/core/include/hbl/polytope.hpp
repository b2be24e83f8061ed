#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hbl/datum.hpp"
#include "hbl/explore.hpp"

namespace hbl {

/// sum_j coeffs_j t_j >= rhs
struct Inequality {
  std::vector<Rat> coeffs;
  Rat rhs;
  friend bool operator==(const Inequality&, const Inequality&) = default;
};

/// sum_j coeffs_j t_j = rhs
struct Equality {
  std::vector<Rat> coeffs;
  Rat rhs;
  friend bool operator==(const Equality&, const Equality&) = default;
};

/// Exponent polytope cut out by explored profiles, the box [0,1]^m and
/// optionally the homogeneity hyperplane. It is an outer relaxation of the
/// true polytope unless `complete` is set.
struct BLPolytope {
  std::size_t m = 0;
  std::vector<Inequality> rows;
  std::optional<Equality> equality;
  bool complete = false;
};

/// Rows dim l_j(V) . t >= dim V, deduplicated, with dominated rows dropped.
BLPolytope constraints_from_profiles(const std::vector<DimProfile>& profiles, std::size_t m,
                                     std::optional<Equality> homogeneity);
Equality homogeneity_row(const BLDatum& d);

class DimensionTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TightSet {
  std::vector<std::size_t> rows;     // indices into BLPolytope::rows
  std::vector<std::size_t> at_zero;  // t_j = 0
  std::vector<std::size_t> at_one;   // t_j = 1
  bool equality = false;
  friend bool operator==(const TightSet&, const TightSet&) = default;
};

struct VertexSet {
  std::vector<ExponentVector> vertices;  // lexicographic order
  std::vector<TightSet> tight;
  bool complete = false;
};

constexpr std::size_t kMaxVertexFactors = 10;

/// Solves every m x m subsystem of rows, box facets and the equality. Throws
/// DimensionTooLarge when m > 10.
VertexSet enumerate_vertices(const BLPolytope& p);

bool satisfies(const BLPolytope& p, const ExponentVector& t);
TightSet tight_set(const BLPolytope& p, const ExponentVector& t);

struct VertexClass {
  std::vector<std::size_t> critical_rows;  // active profile rows with positive rhs
  std::vector<std::size_t> zero_coords;
  bool single_factor_unit = false;
  bool labeled() const { return !critical_rows.empty() || !zero_coords.empty() || single_factor_unit; }
};

VertexClass classify_vertex(const BLPolytope& p, const ExponentVector& v);

/// Weights lambda >= 0 with sum 1 and sum lambda_k points_k = target, found by
/// an exact phase-one simplex. Empty when target is outside the hull.
std::optional<std::vector<Rat>> convex_weights(const std::vector<ExponentVector>& points, const ExponentVector& target);

}  // namespace hbl
