#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbl/integer.hpp"
#include "hbl/rational.hpp"
#include "hbl/subspace.hpp"

namespace hbl {

/// Reciprocal exponents t_j = 1/p_j; t_j = 0 encodes p_j = infinity.
using ExponentVector = std::vector<Rat>;

enum class Mode { Global, Local, Gut, Discrete, Amalgam };

const char* mode_name(Mode mode);
Mode parse_mode(const std::string& name);

struct Factor {
  std::size_t target_dim = 0;
  RatMatrix map;  // target_dim x n

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Torsion invariants of G and each G_j. Carried for reporting; the decision
/// only depends on ranks.
struct TorsionData {
  std::vector<Int> group;
  std::vector<std::vector<Int>> targets;

  friend bool operator==(const TorsionData&, const TorsionData&) = default;
};

struct BLDatum {
  Mode mode = Mode::Global;
  std::size_t n = 0;
  std::vector<Factor> factors;
  ExponentVector t;
  /// The bounding map l_0. After validation it is always present: the zero
  /// map (0 x n) for global-type modes and the identity for Local.
  std::optional<RatMatrix> map0;
  /// Subspace along which small-scale conditions are void (atomic coordinates).
  /// After validation: {0} for Global/Local/Gut, H for Discrete and Amalgam
  /// unless a narrower one was given.
  std::optional<Subspace> atomic;
  std::optional<TorsionData> torsion;

  std::size_t m() const { return factors.size(); }
  friend bool operator==(const BLDatum&, const BLDatum&) = default;
};

class ValidationError : public std::invalid_argument {
 public:
  enum class Kind { NonSurjectiveFactor, ExponentOutOfRange, ZeroDimensionalFactor, ShapeMismatch, EmptyDatum };
  ValidationError(Kind kind, std::optional<std::size_t> factor, const std::string& what)
      : std::invalid_argument(what), kind_(kind), factor_(factor) {}
  Kind kind() const { return kind_; }
  std::optional<std::size_t> factor() const { return factor_; }

 private:
  Kind kind_;
  std::optional<std::size_t> factor_;
};

/// Checks every structural invariant and returns the normalized datum.
/// Idempotent.
BLDatum validate(const BLDatum& d);

/// c = n - sum_j t_j n_j.
Rat homogeneity_gap(const BLDatum& d);

/// kernel(l_0) for a validated datum.
Subspace kernel0(const BLDatum& d);
/// True when the datum is an instance of the global inequality: kernel(l_0) = H
/// and no atomic directions.
bool is_global_type(const BLDatum& d);

/// The same maps with a different exponent vector (validated).
BLDatum with_exponents(const BLDatum& d, ExponentVector t);
/// The datum with factor `i` removed.
BLDatum drop_factor(const BLDatum& d, std::size_t i);

BLDatum make_global(std::size_t n, const std::vector<RatMatrix>& maps, ExponentVector t);

// Product-structure data.

enum class IndexClass { Bounded, Atomic, General };
const char* class_name(IndexClass c);
IndexClass parse_class(const std::string& name);

struct FinnerIndex {
  std::string id;
  IndexClass cls = IndexClass::General;
  friend bool operator==(const FinnerIndex&, const FinnerIndex&) = default;
};

struct FinnerDatum {
  std::vector<FinnerIndex> indices;
  std::vector<std::vector<std::size_t>> supports;  // index positions, per factor
  ExponentVector t;
  friend bool operator==(const FinnerDatum&, const FinnerDatum&) = default;
};

void validate(const FinnerDatum& f);
BLDatum finner_to_continuum(const FinnerDatum& f);

// Finitely generated abelian groups, free parts only.

struct DiscreteDatum {
  std::size_t free_rank = 0;
  std::vector<IntMatrix> homs;  // r_j x free_rank
  ExponentVector t;
  TorsionData torsion;
};

void validate(const DiscreteDatum& d);
BLDatum discrete_to_rational(const DiscreteDatum& d);

struct SubspaceForm {
  Subspace sigma;                    // inside the direct sum of the targets
  std::vector<RatMatrix> projections;  // n_j x (sum of n_i) coordinate selections
  RatMatrix joint_map;               // (sum of n_i) x n
};

SubspaceForm subspace_form(const BLDatum& d);

}  // namespace hbl
