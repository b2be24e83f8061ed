#include <doctest.h>

#include "hbl/engine.hpp"
#include "hbl/finner.hpp"
#include "support.hpp"

using namespace hbl;
using namespace hbl::test;

namespace {

FinnerDatum lw_finner() { return *load_datum(fixture("finner_lw.json")).finner; }

FinnerDatum random_finner(Rng& rng, std::size_t indices, std::size_t factors) {
  FinnerDatum f;
  for (std::size_t i = 0; i < indices; ++i)
    f.indices.push_back({"x" + std::to_string(i), static_cast<IndexClass>(rng.integer(0, 2))});
  for (std::size_t j = 0; j < factors; ++j) {
    std::vector<std::size_t> s;
    while (s.empty())
      for (std::size_t i = 0; i < indices; ++i)
        if (rng.integer(0, 1)) s.push_back(i);
    f.supports.push_back(s);
    f.t.push_back(rng.grid_t());
  }
  return f;
}

}  // namespace

TEST_CASE("index sums on the Loomis-Whitney product datum") {
  FinnerReport r = check(lw_finner());
  CHECK(r.sufficient);
  REQUIRE(r.indices.size() == 3);
  for (const auto& i : r.indices) CHECK(i.sigma == 1);
  CHECK(finner_report_to_json(r)["verdict"] == "sufficient");
}

TEST_CASE("each index class has its own inequality") {
  FinnerDatum f = lw_finner();
  f.t = ts({"1/2", "1/2", "1"});
  FinnerReport g = check(f);
  CHECK_FALSE(g.sufficient);
  CHECK(g.violating == std::vector<std::size_t>{0, 1});
  CHECK(g.indices[0].sigma == Rat(3, 2));

  f.indices[0].cls = f.indices[1].cls = IndexClass::Atomic;
  CHECK(check(f).violating.empty());
  f.indices[0].cls = IndexClass::Bounded;
  CHECK(check(f).violating == std::vector<std::size_t>{0});

  f.t = ts({"1/4", "1/4", "1/4"});
  f.indices = {{"a", IndexClass::Bounded}, {"b", IndexClass::Bounded}, {"c", IndexClass::Bounded}};
  CHECK(check(f).sufficient);
  auto j = finner_report_to_json(check(f));
  CHECK(j["indices"][0]["class"] == "bounded");
  CHECK(j["indices"][0]["sigma"] == "1/2");
}

TEST_CASE("subset values") {
  FinnerDatum f = lw_finner();
  auto v = subset_criticality(f);
  REQUIRE(v.size() == 8);
  for (const auto& s : v) {
    CHECK(s.mask == static_cast<std::uint32_t>(&s - v.data()));
    // Direct count: |K| - sum_j t_j |S_j cap K|.
    Rat expect = 0;
    for (std::size_t i = 0; i < 3; ++i)
      if (s.mask >> i & 1) expect += 1;
    for (std::size_t j = 0; j < 3; ++j)
      for (auto i : f.supports[j])
        if (s.mask >> i & 1) expect -= f.t[j];
    CHECK(s.value == expect);
  }
  FinnerDatum big;
  for (std::size_t i = 0; i <= kMaxSubsetIndices; ++i) big.indices.push_back({"i" + std::to_string(i), IndexClass::General});
  big.supports = {{0}};
  big.t = ts({"1"});
  CHECK_THROWS_AS(subset_criticality(big), SetTooLarge);
}

TEST_CASE("the extended instance keeps bounded sums but loses every dominating critical vector") {
  FinnerDatum base = lw_finner();
  FinnerDatum f = make_remark72_instance(base, 0, "i'");
  CHECK(f == *load_datum(fixture("remark72.json")).finner);
  FinnerReport r = check(f);
  CHECK(r.sufficient);
  CHECK(r.indices.back().sigma == Rat(1, 2));
  CHECK(r.indices.back().cls == IndexClass::Bounded);
  CHECK(decide(finner_to_continuum(f)).kind == VerdictKind::Feasible);

  // Grid search over s >= t with denominators up to 8.
  std::vector<Rat> grid;
  for (long q = 1; q <= 8; ++q)
    for (long p = 0; p <= q; ++p) {
      Rat x(p, q);
      x.canonicalize();
      grid.push_back(x);
    }
  std::size_t found = 0;
  for (const auto& a : grid)
    for (const auto& b : grid)
      for (const auto& c : grid) {
        ExponentVector s{a, b, c};
        bool dominates = true;
        for (std::size_t j = 0; j < 3; ++j) dominates &= s[j] >= f.t[j];
        if (!dominates) continue;
        FinnerDatum g = f;
        g.t = s;
        bool all_one = true;
        for (const auto& i : check(g).indices) all_one &= i.sigma == 1;
        found += all_one;
      }
  CHECK(found == 0);
  // Without the new index the symmetric vector is critical.
  CHECK(check(base).sufficient);
}

TEST_CASE("default id for the new index") {
  FinnerDatum f = make_remark72_instance(lw_finner(), 1);
  CHECK(f.indices.size() == 4);
  CHECK(f.indices.back().id == "i3");
  CHECK(f.supports[1].back() == 3);
}

TEST_CASE("property: the index check matches the engine on small product data") {
  Rng rng(71);
  for (int i = 0; i < 120; ++i) {
    FinnerDatum f = random_finner(rng, rng.integer(1, 3), rng.integer(1, 3));
    BLDatum d = finner_to_continuum(f);
    Verdict v = decide(d, quick_budget());
    REQUIRE(v.kind != VerdictKind::Undecided);
    CAPTURE(finner_to_json(f).dump());
    CHECK((v.kind == VerdictKind::Feasible) == check(f).sufficient);
  }
}
