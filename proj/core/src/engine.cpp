#include "hbl/engine.hpp"

#include "hbl/datum_io.hpp"

namespace hbl {

const char* verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Feasible: return "feasible";
    case VerdictKind::Infeasible: return "infeasible";
    case VerdictKind::Undecided: return "undecided";
  }
  return "undecided";
}

namespace {

struct Check {
  SearchView view;
  std::shared_ptr<const Atlas> atlas;
  ConditionResult result;
};

Check run(SearchView view, const SearchBudget& budget, AtlasCache& cache) {
  Check c{std::move(view), nullptr, {}};
  c.atlas = cache.get(c.view, budget);
  c.result = evaluate(c.view, *c.atlas);
  return c;
}

}  // namespace

Verdict decide(const BLDatum& input, const SearchBudget& budget, AtlasCache* shared) {
  const BLDatum d = validate(input);
  AtlasCache local;
  AtlasCache& cache = shared ? *shared : local;
  Verdict v;

  const Subspace K = kernel0(d);
  const Subspace A = *d.atomic;
  Check large = run(kernel_view(d, K), budget, cache);
  Check small = run(quotient_view(d, A), budget, cache);
  v.conditions.push_back({"large_scale", large.view.k, large.result});
  v.conditions.push_back({"small_scale", small.view.k, small.result});

  for (const Check* c : {&large, &small}) {
    if (sgn(c->result.explored_min) >= 0) continue;
    Subspace V = c->view.to_ambient(c->result.minimizers.front().w);
    ScalingWitness w = build_witness(d, V);
    CertCheck ok = verify_witness(d, w);
    if (!ok) throw std::logic_error("emitted witness failed verification: " + ok.reason);
    v.kind = VerdictKind::Infeasible;
    v.witness = std::move(w);
    return v;
  }

  if (is_global_type(d)) {
    v.certificate = build_certificate(d, budget, &cache);
    if (v.certificate) {
      CertCheck ok = verify_certificate(d, *v.certificate);
      if (!ok) throw std::logic_error("built certificate failed verification at " + ok.path + ": " + ok.reason);
      v.kind = VerdictKind::Feasible;
    } else {
      v.note = "no violation found, but no certificate could be built within the budget";
    }
    return v;
  }
  if (large.result.exhaustive && small.result.exhaustive) {
    v.kind = VerdictKind::Feasible;
    v.conditions_verified = true;
    v.note = "both conditions verified by exhaustive finite-field scans with exact lifts";
  } else {
    v.note = "no violation found, but the search was not exhaustive";
  }
  return v;
}

namespace {

json profile_to_json(const DimProfile& p) { return {{"dim", p.dim_V}, {"image_dims", p.image_dims}}; }

}  // namespace

json verdict_to_json(const Verdict& v) {
  json j = {{"verdict", verdict_name(v.kind)}};
  json conds = json::array();
  for (const auto& c : v.conditions) {
    json minimizers = json::array();
    for (std::size_t i = 0; i < c.result.minimizers.size() && i < 8; ++i)
      minimizers.push_back(profile_to_json(c.result.minimizers[i].profile));
    json cj = {{"name", c.name},
               {"search_dim", c.search_dim},
               {"explored_min", to_string(c.result.explored_min)},
               {"explored", c.result.explored},
               {"exhaustive", c.result.exhaustive},
               {"primes_scanned", c.result.primes_scanned},
               {"truncated", c.result.truncated},
               {"best_profiles", minimizers}};
    if (c.result.scan_min) cj["scan_min"] = to_string(*c.result.scan_min);
    conds.push_back(cj);
  }
  j["conditions"] = conds;
  if (v.witness) j["witness"] = witness_to_json(*v.witness);
  if (v.certificate) {
    j["certificate"] = {{"nodes", node_count(*v.certificate)},
                        {"root", kind_name(v.certificate->kind)},
                        {"depth", reduction_depth(*v.certificate)}};
  }
  if (v.conditions_verified) j["conditions_verified"] = true;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

}  // namespace hbl
