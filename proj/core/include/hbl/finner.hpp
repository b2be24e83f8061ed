#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbl/datum.hpp"

namespace hbl {

struct IndexReport {
  std::string id;
  IndexClass cls = IndexClass::General;
  Rat sigma;  // sum of t_j over the supports containing the index
  bool ok = true;
};

/// Per-index check for product data: sigma <= 1 on bounded indices, >= 1 on
/// atomic ones, = 1 on general ones.
struct FinnerReport {
  std::vector<IndexReport> indices;
  std::vector<std::size_t> violating;
  bool sufficient = true;
};

FinnerReport check(const FinnerDatum& f);

class SetTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SubsetValue {
  std::uint32_t mask = 0;  // bit i set when index i is in K
  Rat value;               // |K| - sum_j t_j |S_j cap K|
};

constexpr std::size_t kMaxSubsetIndices = 20;

/// All 2^|I| subsets in mask order. Throws SetTooLarge past kMaxSubsetIndices.
std::vector<SubsetValue> subset_criticality(const FinnerDatum& f);

/// Adds one new bounded index to the support of factor j_prime. The result
/// keeps sigma <= 1 at the new index but admits no exponent vector above t
/// with every sigma equal to one.
FinnerDatum make_remark72_instance(const FinnerDatum& base, std::size_t j_prime, std::string new_id = {});

nlohmann::json finner_report_to_json(const FinnerReport& r);

}  // namespace hbl
