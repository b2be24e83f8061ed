#include "hbl/finner.hpp"

#include <bit>

namespace hbl {

FinnerReport check(const FinnerDatum& f) {
  validate(f);
  FinnerReport rep;
  for (std::size_t i = 0; i < f.indices.size(); ++i) {
    IndexReport ir{f.indices[i].id, f.indices[i].cls, 0, true};
    for (std::size_t j = 0; j < f.supports.size(); ++j)
      for (auto k : f.supports[j])
        if (k == i) ir.sigma += f.t[j];
    switch (ir.cls) {
      case IndexClass::Bounded: ir.ok = ir.sigma <= 1; break;
      case IndexClass::Atomic: ir.ok = ir.sigma >= 1; break;
      case IndexClass::General: ir.ok = ir.sigma == 1; break;
    }
    if (!ir.ok) rep.violating.push_back(i);
    rep.indices.push_back(std::move(ir));
  }
  rep.sufficient = rep.violating.empty();
  return rep;
}

std::vector<SubsetValue> subset_criticality(const FinnerDatum& f) {
  validate(f);
  const std::size_t n = f.indices.size();
  if (n > kMaxSubsetIndices) throw SetTooLarge("subset enumeration is limited to 20 indices");
  std::vector<std::uint32_t> masks;
  for (const auto& s : f.supports) {
    std::uint32_t m = 0;
    for (auto i : s) m |= 1u << i;
    masks.push_back(m);
  }
  std::vector<SubsetValue> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t K = 0; K < (1u << n); ++K) {
    Rat v = std::popcount(K);
    for (std::size_t j = 0; j < masks.size(); ++j) {
      int c = std::popcount(K & masks[j]);
      if (c) v -= f.t[j] * c;
    }
    out.push_back({K, std::move(v)});
  }
  return out;
}

FinnerDatum make_remark72_instance(const FinnerDatum& base, std::size_t j_prime, std::string new_id) {
  if (j_prime >= base.supports.size()) throw std::out_of_range("factor index out of range");
  FinnerDatum f = base;
  if (new_id.empty()) new_id = "i" + std::to_string(f.indices.size());
  f.indices.push_back({std::move(new_id), IndexClass::Bounded});
  f.supports[j_prime].push_back(f.indices.size() - 1);
  return f;
}

nlohmann::json finner_report_to_json(const FinnerReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& ir : r.indices)
    rows.push_back({{"id", ir.id}, {"class", class_name(ir.cls)}, {"sigma", to_string(ir.sigma)}, {"ok", ir.ok}});
  return {{"verdict", r.sufficient ? "sufficient" : "violated"}, {"indices", rows}, {"violating", r.violating}};
}

}  // namespace hbl
