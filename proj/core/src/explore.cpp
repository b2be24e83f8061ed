#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "hbl/explore.hpp"

namespace hbl {

DimProfile profile(const BLDatum& d, const Subspace& v) {
  if (v.ambient_dim() != d.n) throw DimensionMismatch("profile: subspace lives in the wrong space");
  DimProfile p;
  p.dim_V = v.dim();
  RatMatrix e = v.embedding();
  for (const auto& f : d.factors) p.image_dims.push_back(v.is_zero() ? 0 : rank(f.map * e));
  p.within_kernel0 = kernel0(d).contains(v);
  return p;
}

Rat profile_value(const ExponentVector& t, const DimProfile& p) {
  Rat v = -Rat(static_cast<long>(p.dim_V));
  for (std::size_t j = 0; j < t.size(); ++j) v += t[j] * static_cast<long>(p.image_dims[j]);
  return v;
}

Rat f1(const BLDatum& d, const Subspace& v) { return profile_value(d.t, profile(d, v)); }

Rat f2(const BLDatum& d, const Subspace& v) {
  DimProfile p = profile(d, v);
  Rat out = Rat(static_cast<long>(d.n - p.dim_V));
  for (std::size_t j = 0; j < d.m(); ++j) out -= d.t[j] * static_cast<long>(d.factors[j].target_dim - p.image_dims[j]);
  return out;
}

LatticeClosure lattice_closure(const std::vector<Subspace>& seeds, const SearchBudget& budget) {
  LatticeClosure out;
  if (seeds.empty()) return out;
  const std::size_t n = seeds.front().ambient_dim();
  std::set<Subspace> all;
  for (const auto& s : seeds) {
    if (s.ambient_dim() != n) throw DimensionMismatch("lattice_closure: seeds differ in ambient dimension");
    all.insert(s);
  }
  std::vector<Subspace> frontier(all.begin(), all.end());
  for (std::size_t round = 0; round < budget.max_closure_rounds && !frontier.empty(); ++round) {
    std::vector<Subspace> snapshot(all.begin(), all.end());
    std::vector<Subspace> fresh;
    for (const auto& a : frontier) {
      for (const auto& b : snapshot) {
        for (Subspace c : {sum(a, b), intersect(a, b)}) {
          if (all.size() >= budget.max_lattice_size) {
            out.truncated = true;
            break;
          }
          if (all.insert(c).second) fresh.push_back(std::move(c));
        }
      }
    }
    frontier = std::move(fresh);
    if (round + 1 == budget.max_closure_rounds && !frontier.empty()) out.truncated = true;
  }
  out.members.assign(all.begin(), all.end());
  return out;
}

Subspace closure(const std::vector<RatMatrix>& maps, const Subspace& v) {
  Subspace out = Subspace::full(v.ambient_dim());
  for (const auto& g : maps) out = intersect(out, preimage(g, image(g, v)));
  return out;
}

Subspace SearchView::to_ambient(const Subspace& w) const { return sum(offset, image(embed, w)); }

SearchView kernel_view(const BLDatum& d, const Subspace& domain) {
  SearchView v;
  v.ambient = d.n;
  v.k = domain.dim();
  v.embed = domain.embedding();
  v.offset = Subspace::zero(d.n);
  for (const auto& f : d.factors) v.maps.push_back(f.map * v.embed);
  v.t = d.t;
  v.constant = 0;
  return v;
}

SearchView quotient_view(const BLDatum& d, const Subspace& offset) {
  SearchView v;
  Subspace c = complement(offset);
  v.ambient = d.n;
  v.k = c.dim();
  v.embed = c.embedding();
  v.offset = offset;
  v.t = d.t;
  v.constant = Rat(static_cast<long>(v.k));
  for (std::size_t j = 0; j < d.m(); ++j) {
    const RatMatrix& l = d.factors[j].map;
    QuotientMap q = quotient_map(l, image(l, offset));
    v.maps.push_back(q.map * v.embed);
    v.constant -= d.t[j] * static_cast<long>(q.map.rows());
  }
  return v;
}

namespace {

class CandidateSet {
 public:
  explicit CandidateSet(const std::vector<RatMatrix>& maps) : maps_(maps) {}

  const DimProfile& add(const Subspace& w) {
    auto it = items_.find(w);
    if (it != items_.end()) return it->second;
    DimProfile p;
    p.dim_V = w.dim();
    RatMatrix e = w.embedding();
    for (const auto& g : maps_) p.image_dims.push_back(w.is_zero() || g.rows() == 0 ? 0 : rank(g * e));
    profiles_.insert(p);
    return items_.emplace(w, std::move(p)).first->second;
  }
  void add_with_closure(const Subspace& w) {
    add(w);
    add(closure(maps_, w));
  }
  std::vector<Explored> take() const {
    std::vector<Explored> out;
    out.reserve(items_.size());
    for (const auto& [w, p] : items_) out.push_back({w, p});
    return out;
  }
  std::size_t size() const { return items_.size(); }
  bool realized(const DimProfile& p) const { return profiles_.count(p) > 0; }

 private:
  const std::vector<RatMatrix>& maps_;
  std::map<Subspace, DimProfile> items_;
  std::set<DimProfile> profiles_;
};

bool mark_realized(ScanTable& table, const CandidateSet& cands) {
  table.faithful = true;
  for (auto& e : table.entries) {
    if (!e.lifted && cands.realized(e.profile)) e.lifted = true;
    table.faithful &= e.lifted;
  }
  return table.faithful;
}

constexpr std::uint32_t kExtraPrimes[] = {7, 11, 13, 17, 19, 23};
constexpr std::uint64_t kExtraScanLimit = 5'000'000;

}  // namespace

Atlas explore(const SearchView& view, const SearchBudget& budget) {
  Atlas atlas;
  atlas.k = view.k;
  const std::size_t k = view.k;
  CandidateSet cands(view.maps);

  std::vector<Subspace> seeds{Subspace::zero(k), Subspace::full(k)};
  for (const auto& g : view.maps) seeds.push_back(kernel(g));
  LatticeClosure lat = lattice_closure(seeds, budget);
  atlas.truncated = lat.truncated;
  atlas.lattice_size = lat.members.size();
  for (const auto& w : lat.members) cands.add_with_closure(w);

  if (k >= 2) {
    if (k > budget.max_ambient_for_exhaustive_scan) {
      atlas.scan_skipped = true;
    } else {
      std::vector<std::uint32_t> primes = budget.primes;
      for (auto p : kExtraPrimes) primes.push_back(p);
      std::set<std::uint32_t> tried;
      std::size_t faithful = 0;
      for (std::size_t i = 0; i < primes.size(); ++i) {
        const std::uint32_t p = primes[i];
        const bool extra = i >= budget.primes.size();
        if (extra && (faithful >= 2 || grassmannian_count(k, p) > kExtraScanLimit)) break;
        if (!tried.insert(p).second || !is_prime(p)) continue;
        ScanTable table;
        try {
          table = scan_view(view.maps, k, p, budget.reps_per_profile);
        } catch (const BadPrime&) {
          atlas.bad_primes.push_back(p);
          continue;
        }
        for (auto& e : table.entries) {
          for (const auto& rep : e.reps) {
            for (bool symmetric : {false, true}) {
              Subspace w = lift(rep, symmetric);
              if (cands.add(w).image_dims == e.profile.image_dims) e.lifted = true;
              cands.add(closure(view.maps, w));
              if (p == 2) break;  // both readings coincide
            }
          }
        }
        if (mark_realized(table, cands)) ++faithful;
        atlas.scans.push_back(std::move(table));
      }
    }

    std::mt19937_64 rng(budget.rng_seed);
    for (std::size_t i = 0; i < budget.random_subspace_samples; ++i) {
      const std::size_t s = 1 + rng() % (k - 1);
      RatMatrix g(s, k);
      for (std::size_t r = 0; r < s; ++r)
        for (std::size_t c = 0; c < k; ++c) g(r, c) = static_cast<long>(rng() % 7) - 3;
      cands.add_with_closure(Subspace::span(g));
    }
    atlas.samples = budget.random_subspace_samples;
  }
  for (auto& table : atlas.scans) mark_realized(table, cands);
  atlas.candidates = cands.take();
  return atlas;
}

namespace {

std::string view_key(const SearchView& view, const SearchBudget& budget) {
  std::ostringstream os;
  os << view.k << '|';
  for (const auto& g : view.maps) os << g.rows() << ':' << to_string(g) << '|';
  os << budget.max_lattice_size << ',' << budget.max_closure_rounds << ',' << budget.max_ambient_for_exhaustive_scan
     << ',' << budget.rng_seed << ',' << budget.random_subspace_samples << ',' << budget.reps_per_profile;
  for (auto p : budget.primes) os << ',' << p;
  return os.str();
}

}  // namespace

std::shared_ptr<const Atlas> AtlasCache::get(const SearchView& view, const SearchBudget& budget) {
  std::string key = view_key(view, budget);
  {
    std::lock_guard lock(mu_);
    auto it = atlases_.find(key);
    if (it != atlases_.end()) return it->second;
  }
  auto atlas = std::make_shared<const Atlas>(explore(view, budget));
  std::lock_guard lock(mu_);
  return atlases_.emplace(key, atlas).first->second;
}

std::size_t AtlasCache::size() const {
  std::lock_guard lock(mu_);
  return atlases_.size();
}

ConditionResult evaluate(const SearchView& view, const Atlas& atlas) {
  ConditionResult out;
  out.explored = atlas.candidates.size();
  out.truncated = atlas.truncated;
  bool first = true;
  for (const auto& c : atlas.candidates) {
    Rat v = view.value(c.profile);
    if (first || v < out.explored_min) {
      out.explored_min = v;
      out.minimizers.clear();
      first = false;
    }
    if (v == out.explored_min) out.minimizers.push_back(c);
  }
  // Candidates are in canonical order, which already ranks by dimension.

  if (view.k <= 1) {
    out.exhaustive = true;
    return out;
  }
  std::size_t good = 0;
  for (const auto& table : atlas.scans) {
    out.primes_scanned.push_back(table.p);
    Rat table_min;
    bool have = false;
    for (const auto& e : table.entries) {
      Rat v = view.value(e.profile);
      if (!have || v < table_min) table_min = v;
      have = true;
    }
    if (!out.scan_min || table_min < *out.scan_min) out.scan_min = table_min;
    bool lifted = table_min == out.explored_min;
    for (const auto& e : table.entries)
      if (view.value(e.profile) == table_min && !e.lifted) lifted = false;
    if (lifted) ++good;
  }
  out.exhaustive = good >= 2;
  return out;
}

ScanSummary grassmannian_scan_mod_p(const BLDatum& d, std::uint32_t p, const SearchBudget& budget) {
  if (d.n > budget.max_ambient_for_exhaustive_scan) {
    throw AmbientTooLarge("ambient dimension " + std::to_string(d.n) + " exceeds the exhaustive-scan limit");
  }
  SearchView view = kernel_view(d, Subspace::full(d.n));
  ScanTable table = scan_view(view.maps, view.k, p, budget.reps_per_profile);
  ScanSummary out;
  out.count = table.count;
  bool first = true;
  for (const auto& e : table.entries) {
    Rat v = view.value(e.profile);
    if (first || v < out.min_f1) {
      out.min_f1 = v;
      out.argmin_profiles.clear();
      out.representatives.clear();
      first = false;
    }
    if (v == out.min_f1) {
      out.argmin_profiles.push_back(e.profile);
      out.representatives.insert(out.representatives.end(), e.reps.begin(), e.reps.end());
    }
  }
  return out;
}

std::optional<Subspace> lift_witness(const BLDatum& d, const FpMatrix& rep) {
  const std::uint32_t p = rep.prime();
  if (rep.cols() != d.n) throw DimensionMismatch("lift_witness: representative lives in the wrong space");
  DimProfile modp{rep.rows(), {}, false};
  for (const auto& f : d.factors) {
    FpMatrix l = mod_p_reduce(f.map, p);
    std::vector<std::uint32_t> prod(l.rows() * rep.rows(), 0);
    for (std::size_t i = 0; i < l.rows(); ++i)
      for (std::size_t r = 0; r < rep.rows(); ++r) {
        std::uint64_t acc = 0;
        for (std::size_t c = 0; c < d.n; ++c) acc += std::uint64_t(l(i, c)) * rep(r, c);
        prod[i * rep.rows() + r] = static_cast<std::uint32_t>(acc % p);
      }
    modp.image_dims.push_back(rank_mod_p_inplace(prod.data(), l.rows(), rep.rows(), p));
  }
  const Rat target = profile_value(d.t, modp);
  if (target >= 0) return std::nullopt;
  for (bool symmetric : {false, true}) {
    Subspace v = lift(rep, symmetric);
    if (f1(d, v) == target) return v;
  }
  return std::nullopt;
}

MinResult min_f1(const BLDatum& d, Domain domain, const SearchBudget& budget) {
  Subspace space = domain == Domain::AllOfH ? Subspace::full(d.n) : kernel0(d);
  SearchView view = kernel_view(d, space);
  Atlas atlas = explore(view, budget);
  ConditionResult r = evaluate(view, atlas);
  MinResult out{r.explored_min, {}, r.exhaustive};
  for (const auto& e : r.minimizers) out.witnesses.push_back(view.to_ambient(e.w));
  std::sort(out.witnesses.begin(), out.witnesses.end());
  return out;
}

std::vector<Subspace> critical_subspaces(const BLDatum& d, const SearchBudget& budget, AtlasCache* cache) {
  SearchView view = kernel_view(d, Subspace::full(d.n));
  std::shared_ptr<const Atlas> atlas =
      cache ? cache->get(view, budget) : std::make_shared<const Atlas>(explore(view, budget));
  std::vector<Subspace> out;
  for (const auto& c : atlas->candidates) {
    if (c.w.is_zero() || c.w.is_full()) continue;
    if (view.value(c.profile) == 0) out.push_back(c.w);
  }
  return out;
}

}  // namespace hbl
