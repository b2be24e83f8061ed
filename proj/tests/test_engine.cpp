#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "hbl/engine.hpp"
#include "support.hpp"

using namespace hbl;
using namespace hbl::test;

namespace {

VerdictKind kind(const BLDatum& d) { return decide(d, quick_budget()).kind; }

// On Q^2 every subspace is 0, H, a kernel line, or a line in no kernel, so the
// minima of f1 and f2 are taken over these.
VerdictKind plane_oracle(const BLDatum& d) {
  std::vector<Subspace> cands{Subspace::zero(2), Subspace::full(2)};
  for (const auto& f : d.factors)
    if (f.target_dim == 1) cands.push_back(kernel(f.map));
  for (long a = 1;; ++a) {
    Subspace g = Subspace::span(RatMatrix::from_ints({{1, a}}));
    bool in_kernel = false;
    for (const auto& f : d.factors) in_kernel |= f.map.apply(g.basis().row(0)) == std::vector<Rat>(f.target_dim);
    if (!in_kernel) {
      cands.push_back(g);
      break;
    }
  }
  for (const auto& v : cands) {
    if (kernel0(d).contains(v) && sgn(f1(d, v)) < 0) return VerdictKind::Infeasible;
    if (v.contains(*d.atomic) && sgn(f2(d, v)) < 0) return VerdictKind::Infeasible;
  }
  return VerdictKind::Feasible;
}

BLDatum change_basis(const BLDatum& d, const RatMatrix& T, Rng& rng) {
  BLDatum e = d;
  for (auto& f : e.factors) {
    RatMatrix S = rng.surjection(f.target_dim, f.target_dim);
    f.map = S * f.map * T;
  }
  return validate(e);
}

RatMatrix invertible(std::size_t n, Rng& rng) { return rng.surjection(n, n); }

}  // namespace

TEST_CASE("fixture verdicts") {
  struct Case {
    const char* file;
    VerdictKind expected;
  };
  for (auto [file, expected] : {Case{"lw3.json", VerdictKind::Feasible}, Case{"lw4.json", VerdictKind::Feasible},
                                Case{"young.json", VerdictKind::Feasible}, Case{"young_sym.json", VerdictKind::Feasible},
                                Case{"holder.json", VerdictKind::Feasible}, Case{"holder_line.json", VerdictKind::Feasible},
                                Case{"discrete_young.json", VerdictKind::Feasible},
                                Case{"gut_young.json", VerdictKind::Feasible}, Case{"finner_lw.json", VerdictKind::Feasible},
                                Case{"remark72.json", VerdictKind::Feasible},
                                Case{"lw3_infeasible.json", VerdictKind::Infeasible},
                                Case{"lw3_local_infeasible.json", VerdictKind::Infeasible},
                                Case{"young_infeasible.json", VerdictKind::Infeasible}}) {
    CAPTURE(file);
    CHECK(decide(load_fixture(file)).kind == expected);
  }
}

TEST_CASE("feasible global data carry a verified certificate") {
  BLDatum d = load_fixture("lw4.json");
  Verdict v = decide(d);
  REQUIRE(v.certificate);
  CHECK(verify_certificate(d, *v.certificate));
}

TEST_CASE("infeasible data carry a verified witness") {
  BLDatum d = load_fixture("lw3_infeasible.json");
  Verdict v = decide(d);
  REQUIRE(v.witness);
  CHECK(v.witness->violation == Violation::RBlowup);
  CHECK(v.witness->V == Subspace::coordinate(3, std::vector<std::size_t>{0}));
  CHECK(v.witness->R_exponent == Rat(1, 2));
  CHECK(verify_witness(d, *v.witness));

  BLDatum l = load_fixture("lw3_local_infeasible.json");
  Verdict lv = decide(l);
  REQUIRE(lv.witness);
  CHECK(lv.witness->violation == Violation::rBlowup);
  CHECK(lv.witness->V.is_zero());
}

TEST_CASE("non-global modes need exhaustive scans") {
  Verdict v = decide(load_fixture("gut_young.json"));
  CHECK(v.conditions_verified);
  CHECK_FALSE(v.certificate);
  CHECK(v.conditions.size() == 2);
}

TEST_CASE("mode semantics on Young's maps") {
  // Global needs c = 0; local allows c >= 0 with the small-scale condition.
  CHECK(kind(young(ts({"1/2", "1/2", "1/2"}))) == VerdictKind::Infeasible);
  CHECK(kind(young(ts({"1/2", "1/2", "1/2"}), Mode::Local)) == VerdictKind::Feasible);
  CHECK(kind(young(ts({"1", "1", "1"}), Mode::Local)) == VerdictKind::Infeasible);
  CHECK(kind(young(ts({"1", "1", "1"}), Mode::Discrete)) == VerdictKind::Feasible);
  CHECK(kind(young(ts({"0", "0", "0"}), Mode::Discrete)) == VerdictKind::Infeasible);
}

TEST_CASE("verdict JSON") {
  auto j = verdict_to_json(decide(load_fixture("young.json")));
  CHECK(j["verdict"] == "feasible");
  CHECK(j.contains("certificate"));
  auto k = verdict_to_json(decide(load_fixture("young_infeasible.json")));
  CHECK(k["verdict"] == "infeasible");
  CHECK(k.contains("witness"));
}

TEST_CASE("property: verdicts on the plane match the enumeration oracle") {
  Rng rng(51);
  for (int i = 0; i < 150; ++i) {
    Mode mode = static_cast<Mode>(rng.integer(0, 1));
    BLDatum d = rng.datum(2, rng.integer(1, 4), mode);
    if (mode == Mode::Global && rng.integer(0, 1)) {
      auto h = rng.homogeneous_datum(2, d.m());
      if (h) d = *h;
    }
    CAPTURE(datum_to_json(d).dump());
    CHECK(kind(d) == plane_oracle(d));
  }
}

TEST_CASE("property: verdicts ignore factor order and choice of bases") {
  Rng rng(52);
  for (int i = 0; i < 60; ++i) {
    std::size_t n = rng.integer(1, 3);
    auto h = rng.homogeneous_datum(n, rng.integer(2, 4));
    BLDatum d = h ? *h : rng.datum(n, 3, Mode::Local);
    VerdictKind base = kind(d);
    REQUIRE(base != VerdictKind::Undecided);

    BLDatum p = d;
    std::vector<std::size_t> perm(d.m());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    for (std::size_t j = 0; j < d.m(); ++j) {
      p.factors[j] = d.factors[perm[j]];
      p.t[j] = d.t[perm[j]];
    }
    CHECK(kind(validate(p)) == base);
    BLDatum c = change_basis(d, invertible(n, rng), rng);
    CAPTURE(datum_to_json(d).dump());
    CAPTURE(datum_to_json(c).dump());
    CHECK(kind(c) == base);
  }
}

TEST_CASE("property: gut mode interpolates between global and local") {
  Rng rng(53);
  for (int i = 0; i < 60; ++i) {
    std::size_t n = rng.integer(1, 3);
    BLDatum d = rng.datum(n, rng.integer(1, 3));
    BLDatum g0 = d, gid = d, local = d;
    g0.mode = gid.mode = Mode::Gut;
    g0.map0 = RatMatrix(0, n);
    gid.map0 = RatMatrix::identity(n);
    local.mode = Mode::Local;
    local.map0.reset();
    CHECK(kind(validate(g0)) == kind(d));
    CHECK(kind(validate(gid)) == kind(validate(local)));
  }
}
