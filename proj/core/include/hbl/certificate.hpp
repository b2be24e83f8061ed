#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbl/datum.hpp"
#include "hbl/explore.hpp"

namespace hbl {

/// A proof tree replaying the induction on dim H. Every node stores the
/// datum it certifies, so each check is local.
struct Certificate {
  enum class Kind { HolderBase, InvertibleBase, CriticalSplit, DropFactor, ConvexCombination };

  Kind kind = Kind::HolderBase;
  BLDatum datum;

  // CriticalSplit: children[0] lives on W, children[1] on the complement.
  std::optional<Subspace> W;
  std::vector<std::size_t> inner_factors;  // parent indices kept in the inner datum
  std::vector<std::size_t> outer_factors;  // parent indices kept in the outer datum

  // DropFactor
  std::size_t dropped = 0;

  // ConvexCombination: child k certifies the same maps at exponents
  // children[k].datum.t with weight weights[k].
  std::vector<Rat> weights;

  std::vector<Certificate> children;

  friend bool operator==(const Certificate&, const Certificate&) = default;
};

const char* kind_name(Certificate::Kind k);

/// Depth counting split and drop levels only.
std::size_t reduction_depth(const Certificate& c);
std::size_t node_count(const Certificate& c);

/// Builds a certificate for a global-type datum, or returns empty.
std::optional<Certificate> build_certificate(const BLDatum& d, const SearchBudget& budget = {},
                                             AtlasCache* cache = nullptr);

/// The inner and outer data of a split of `d` along `W`.
struct SplitData {
  BLDatum inner;
  BLDatum outer;
  std::vector<std::size_t> inner_factors;
  std::vector<std::size_t> outer_factors;
};
SplitData split_datum(const BLDatum& d, const Subspace& W);

struct CertCheck {
  bool accepted = true;
  std::string reason;
  std::string path;  // e.g. "root/split.inner/drop"
  explicit operator bool() const { return accepted; }
};

/// Exact local checks only; never searches.
CertCheck verify_certificate(const BLDatum& d, const Certificate& cert);

nlohmann::json certificate_to_json(const Certificate& c);
/// Throws ParseError.
Certificate certificate_from_json(const nlohmann::json& j);

// Scaling witnesses.

enum class Violation { RBlowup, rBlowup };
const char* violation_name(Violation v);

struct ScalingWitness {
  Subspace V;
  Subspace V_big;
  Subspace V_small;
  Rat r_exponent;
  Rat R_exponent;
  Violation violation = Violation::RBlowup;
  friend bool operator==(const ScalingWitness&, const ScalingWitness&) = default;
};

class NotAViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ScalingWitness build_witness(const BLDatum& d, const Subspace& V);
CertCheck verify_witness(const BLDatum& d, const ScalingWitness& w);

nlohmann::json witness_to_json(const ScalingWitness& w);
ScalingWitness witness_from_json(const nlohmann::json& j, std::size_t n);

}  // namespace hbl
