#include <doctest.h>

#include <algorithm>
#include <set>

#include "hbl/explore.hpp"
#include "support.hpp"

using namespace hbl;
using namespace hbl::test;

namespace {

// Counts subsets of F_p^k that are closed under addition and scaling.
std::uint64_t brute_force_subspace_count(std::size_t k, std::uint32_t p) {
  std::size_t q = 1;
  for (std::size_t i = 0; i < k; ++i) q *= p;
  auto add = [&](std::size_t a, std::size_t b) {
    std::size_t out = 0, w = 1;
    for (std::size_t i = 0; i < k; ++i, a /= p, b /= p, w *= p) out += ((a % p + b % p) % p) * w;
    return out;
  };
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (1ull << q); ++mask) {
    if (!(mask & 1)) continue;
    bool closed = true;
    for (std::size_t a = 0; a < q && closed; ++a)
      for (std::size_t b = 0; b < q && closed; ++b)
        if ((mask >> a & 1) && (mask >> b & 1) && !(mask >> add(a, b) & 1)) closed = false;
    if (closed) ++count;  // over a prime field additive closure implies scaling
  }
  return count;
}

std::set<Subspace> naive_closure(std::vector<Subspace> seeds) {
  std::set<Subspace> all(seeds.begin(), seeds.end());
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<Subspace> cur(all.begin(), all.end());
    for (const auto& a : cur)
      for (const auto& b : cur) {
        grew |= all.insert(sum(a, b)).second;
        grew |= all.insert(intersect(a, b)).second;
      }
  }
  return all;
}

Subspace line(std::vector<long> v) { return Subspace::span(RatMatrix::from_ints({v})); }

}  // namespace

TEST_CASE("Grassmannian counts agree with enumeration") {
  CHECK(grassmannian_count(3, 2) == 16);
  CHECK(brute_force_subspace_count(3, 2) == 16);
  CHECK(grassmannian_count(2, 3) == brute_force_subspace_count(2, 3));
  CHECK(grassmannian_count(4, 2) == brute_force_subspace_count(4, 2));
  CHECK(grassmannian_count(2, 5) == 8);
  CHECK(grassmannian_count(6, 2) == 1 + 63 + 651 + 1395 + 651 + 63 + 1);
  CHECK(grassmannian_count(0, 7) == 1);
}

TEST_CASE("scans of Loomis-Whitney cover every subspace") {
  BLDatum d = loomis_whitney(3, ts({"1/2", "1/2", "1/2"}));
  ScanSummary s = grassmannian_scan_mod_p(d, 2);
  CHECK(s.count == 16);
  CHECK(s.min_f1 == 0);
  ScanSummary s3 = grassmannian_scan_mod_p(d, 3);
  CHECK(s3.count == grassmannian_count(3, 3));
  CHECK(s3.min_f1 == 0);

  BLDatum bad = loomis_whitney(3, ts({"1", "1/4", "1/4"}));
  ScanSummary sb = grassmannian_scan_mod_p(bad, 2);
  CHECK(sb.min_f1 == Rat(-1, 2));
  REQUIRE_FALSE(sb.representatives.empty());
  auto w = lift_witness(bad, sb.representatives.front());
  REQUIRE(w);
  CHECK(f1(bad, *w) == Rat(-1, 2));
}

TEST_CASE("bad primes are refused") {
  BLDatum d = make_global(2, {RatMatrix::from_ints({{1, 1}, {1, -1}})}, ts({"1"}));
  CHECK_THROWS_AS(grassmannian_scan_mod_p(d, 2), BadPrime);
  CHECK_NOTHROW(grassmannian_scan_mod_p(d, 3));
}

TEST_CASE("lattice closure examples") {
  SearchBudget b;
  auto young = lattice_closure({line({1, 0}), line({0, 1}), line({1, 1})}, b);
  CHECK(young.members.size() == 5);
  CHECK_FALSE(young.truncated);

  std::vector<Subspace> seeds{line({1, 0, 0}), line({0, 1, 0}), line({1, 1, 1})};
  auto three = lattice_closure(seeds, b);
  CHECK(three.members.size() == 8);
  CHECK(std::set<Subspace>(three.members.begin(), three.members.end()) == naive_closure(seeds));

  SearchBudget tiny;
  tiny.max_lattice_size = 3;
  CHECK(lattice_closure(seeds, tiny).truncated);
}

TEST_CASE("closure under equal images") {
  std::vector<RatMatrix> maps{RatMatrix::from_ints({{1, 0, 0}}), RatMatrix::from_ints({{0, 1, 0}})};
  // Adding e_3 changes no image.
  CHECK(closure(maps, line({1, 0, 0})) == Subspace::span(RatMatrix::from_ints({{1, 0, 0}, {0, 0, 1}})));
  CHECK(closure(maps, Subspace::zero(3)) == line({0, 0, 1}));
}

TEST_CASE("min_f1 examples") {
  auto lw = min_f1(loomis_whitney(3, ts({"1/2", "1/2", "1/2"})), Domain::AllOfH);
  CHECK(lw.explored_min == 0);
  CHECK(lw.exhaustive);
  auto y = min_f1(young(ts({"1/2", "1/2", "1/2"})), Domain::AllOfH);
  CHECK(y.explored_min == Rat(-1, 2));
  REQUIRE_FALSE(y.witnesses.empty());
  CHECK(y.witnesses.front().is_full());
  auto local = min_f1(load_fixture("gut_young.json"), Domain::WithinKernel0);
  CHECK(local.explored_min == 0);
}

TEST_CASE("critical subspaces of Young's datum") {
  auto crit = critical_subspaces(young(ts({"1/2", "1/2", "1"})));
  // The kernels of the first two maps are critical: 1/2 + 1 - 1 = 1/2 for ker l_3, 0 for the others.
  REQUIRE(crit.size() >= 1);
  for (const auto& v : crit) CHECK(f1(young(ts({"1/2", "1/2", "1"})), v) == 0);
}

TEST_CASE("views reproduce f1 and f2") {
  BLDatum d = young(ts({"1/2", "1/2", "1/2"}), Mode::Local);
  SearchView kv = kernel_view(d, kernel0(d));
  CHECK(kv.k == 0);
  SearchView qv = quotient_view(d, *d.atomic);
  CHECK(qv.k == 2);
  for (const auto& v : {Subspace::zero(2), line({1, 0}), line({1, 1}), Subspace::full(2)})
    CHECK(qv.value(profile(d, qv.to_ambient(v))) == f2(d, v));
}

TEST_CASE("property: f1 and f2 identities") {
  Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    BLDatum d = rng.datum(rng.integer(1, 4), rng.integer(1, 4));
    Subspace v = rng.subspace(d.n);
    CHECK(f2(d, v) == f1(d, v) + homogeneity_gap(d));
    CHECK(f1(d, Subspace::zero(d.n)) == 0);
    CHECK(f2(d, Subspace::full(d.n)) == 0);
    // Closure keeps every image, so f1 can only drop.
    std::vector<RatMatrix> maps;
    for (const auto& f : d.factors) maps.push_back(f.map);
    Subspace w = closure(maps, v);
    CHECK(w.contains(v));
    CHECK(f1(d, w) <= f1(d, v));
  }
}

TEST_CASE("property: exhaustive scan minimum matches brute force over F_2") {
  Rng rng(32);
  for (int i = 0; i < 30; ++i) {
    auto hd = rng.homogeneous_datum(rng.integer(1, 3), rng.integer(1, 3));
    if (!hd) continue;
    ScanSummary s;
    try {
      s = grassmannian_scan_mod_p(*hd, 2);
    } catch (const BadPrime&) {
      continue;
    }
    CHECK(s.count == grassmannian_count(hd->n, 2));
    // Every rational subspace in the explored atlas reduces to some scanned profile.
    auto m = min_f1(*hd, Domain::AllOfH, quick_budget());
    CHECK(m.explored_min >= s.min_f1);
  }
}
