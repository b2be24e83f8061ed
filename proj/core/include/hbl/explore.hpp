#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hbl/datum.hpp"
#include "hbl/modp.hpp"

namespace hbl {

struct SearchBudget {
  std::size_t max_lattice_size = 4096;
  std::size_t max_closure_rounds = 16;
  std::vector<std::uint32_t> primes{2, 3, 5};
  std::size_t max_ambient_for_exhaustive_scan = 6;
  std::uint64_t rng_seed = 20240601;
  std::size_t random_subspace_samples = 2000;
  std::size_t threads = 1;
  /// Representatives kept per profile class during a scan.
  std::size_t reps_per_profile = 8;
};

/// (dim V, dim l_1(V), ..., dim l_m(V)).
struct DimProfile {
  std::size_t dim_V = 0;
  std::vector<std::size_t> image_dims;
  bool within_kernel0 = false;

  friend auto operator<=>(const DimProfile&, const DimProfile&) = default;
  friend bool operator==(const DimProfile&, const DimProfile&) = default;
};

DimProfile profile(const BLDatum& d, const Subspace& v);
/// sum_j t_j d_j - dim V for a profile.
Rat profile_value(const ExponentVector& t, const DimProfile& p);

Rat f1(const BLDatum& d, const Subspace& v);
Rat f2(const BLDatum& d, const Subspace& v);

class AmbientTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LatticeClosure {
  std::vector<Subspace> members;  // canonical order
  bool truncated = false;
};

/// Closes `seeds` under pairwise sum and intersection.
LatticeClosure lattice_closure(const std::vector<Subspace>& seeds, const SearchBudget& budget);

/// The smallest W containing V with l_j(W) = l_j(V) for every map.
Subspace closure(const std::vector<RatMatrix>& maps, const Subspace& v);

/// A search space for one condition. Points are subspaces w of Q^k; each
/// stands for V = offset + embed(w) in the datum's space. The objective is
///   value(w) = sum_j t_j dim maps[j](w) - dim w + constant
/// and the condition requires value >= 0 everywhere.
struct SearchView {
  std::size_t ambient = 0;      // n of the datum
  std::size_t k = 0;            // dimension of the search space
  RatMatrix embed;              // ambient x k
  Subspace offset;              // in Q^ambient
  std::vector<RatMatrix> maps;  // r_j x k
  ExponentVector t;
  Rat constant;

  Subspace to_ambient(const Subspace& w) const;
  Rat value(const DimProfile& p) const { return profile_value(t, p) + constant; }
};

/// f1 over subspaces of `domain`.
SearchView kernel_view(const BLDatum& d, const Subspace& domain);
/// f2 over subspaces containing `offset`.
SearchView quotient_view(const BLDatum& d, const Subspace& offset);

/// Scan of every subspace of F_p^k, bucketed by profile. Independent of t.
struct ScanTable {
  struct Entry {
    DimProfile profile;
    std::uint64_t count = 0;
    std::vector<FpMatrix> reps;
    /// Some representative lifts to a rational subspace with the same profile.
    bool lifted = false;
  };
  std::uint32_t p = 0;
  std::uint64_t count = 0;
  std::vector<Entry> entries;  // sorted by profile
  /// Every profile is realized by a rational subspace.
  bool faithful = false;
};

/// Throws BadPrime when p is not good for the maps.
ScanTable scan_view(const std::vector<RatMatrix>& maps, std::size_t k, std::uint32_t p, std::size_t reps_per_profile);

/// Number of subspaces of F_p^k (sum of Gaussian binomials).
std::uint64_t grassmannian_count(std::size_t k, std::uint32_t p);

/// Rational lift of an F_p echelon basis: entries read as integers in [0, p),
/// or in (-p/2, p/2] when `symmetric`.
Subspace lift(const FpMatrix& rep, bool symmetric);

struct Explored {
  Subspace w;
  DimProfile profile;
};

/// t-independent exploration of a view: the rational candidates and the scan
/// tables.
struct Atlas {
  std::size_t k = 0;
  std::vector<Explored> candidates;  // canonical order, deduplicated
  std::vector<ScanTable> scans;      // completed scans over good primes
  std::vector<std::uint32_t> bad_primes;
  bool scan_skipped = false;         // k above the exhaustive-scan limit
  bool truncated = false;
  std::size_t lattice_size = 0;
  std::size_t samples = 0;
};

Atlas explore(const SearchView& view, const SearchBudget& budget);

/// Memo of atlases keyed by view geometry. Thread-safe.
class AtlasCache {
 public:
  std::shared_ptr<const Atlas> get(const SearchView& view, const SearchBudget& budget);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const Atlas>> atlases_;
};

/// The result of evaluating one condition at the view's exponents.
struct ConditionResult {
  Rat explored_min;
  std::vector<Explored> minimizers;  // tie-broken: smallest dim, canonical order
  bool exhaustive = false;
  std::size_t explored = 0;
  std::vector<std::uint32_t> primes_scanned;
  std::optional<Rat> scan_min;  // smallest value seen in any scan
  bool truncated = false;
};

ConditionResult evaluate(const SearchView& view, const Atlas& atlas);

// Entry points operating on a whole datum.

enum class Domain { AllOfH, WithinKernel0 };

struct ScanSummary {
  Rat min_f1;
  std::vector<DimProfile> argmin_profiles;
  std::vector<FpMatrix> representatives;
  std::uint64_t count = 0;
};

ScanSummary grassmannian_scan_mod_p(const BLDatum& d, std::uint32_t p, const SearchBudget& budget = {});
std::optional<Subspace> lift_witness(const BLDatum& d, const FpMatrix& rep);

struct MinResult {
  Rat explored_min;
  std::vector<Subspace> witnesses;
  bool exhaustive = false;
};

MinResult min_f1(const BLDatum& d, Domain domain, const SearchBudget& budget = {});

/// Explored proper nonzero V with f1(V) = 0, smallest dimension first.
std::vector<Subspace> critical_subspaces(const BLDatum& d, const SearchBudget& budget = {},
                                         AtlasCache* cache = nullptr);

}  // namespace hbl
