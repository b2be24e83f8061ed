#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hbl/certificate.hpp"
#include "hbl/datum.hpp"
#include "hbl/explore.hpp"

namespace hbl {

enum class VerdictKind { Feasible, Infeasible, Undecided };
const char* verdict_name(VerdictKind k);

/// One of the two scaling conditions as checked by the engine.
struct ConditionReport {
  std::string name;  // "large_scale" (f1 on kernel(l_0)) or "small_scale" (f2 above the atomic part)
  std::size_t search_dim = 0;
  ConditionResult result;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Undecided;
  std::optional<Certificate> certificate;
  bool conditions_verified = false;
  std::optional<ScalingWitness> witness;
  std::vector<ConditionReport> conditions;
  std::string note;
};

/// The mode dispatch:
///   f1(V) >= 0 for V inside kernel(l_0), and
///   f2(V) >= 0 for V containing the atomic subspace.
/// Global-type data are then certified; other modes need exhaustive scans.
Verdict decide(const BLDatum& d, const SearchBudget& budget = {}, AtlasCache* cache = nullptr);

nlohmann::json verdict_to_json(const Verdict& v);

}  // namespace hbl
