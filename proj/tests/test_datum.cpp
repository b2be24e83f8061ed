#include <doctest.h>

#include "hbl/datum.hpp"
#include "hbl/datum_io.hpp"
#include "support.hpp"

using namespace hbl;
using namespace hbl::test;

namespace {

ValidationError::Kind kind_of(const BLDatum& d) {
  try {
    validate(d);
  } catch (const ValidationError& e) {
    return e.kind();
  }
  FAIL("expected a validation error");
  return ValidationError::Kind::EmptyDatum;
}

}  // namespace

TEST_CASE("validation rejects malformed data") {
  BLDatum d = young(ts({"1/2", "1/2", "1"}));

  BLDatum bad = d;
  bad.factors[1].map = RatMatrix::from_ints({{0, 0}});
  CHECK(kind_of(bad) == ValidationError::Kind::NonSurjectiveFactor);

  bad = d;
  bad.t[2] = Rat(3, 2);
  CHECK(kind_of(bad) == ValidationError::Kind::ExponentOutOfRange);
  bad.t[2] = -1;
  CHECK(kind_of(bad) == ValidationError::Kind::ExponentOutOfRange);

  bad = d;
  bad.factors[0] = {0, RatMatrix(0, 2)};
  CHECK(kind_of(bad) == ValidationError::Kind::ZeroDimensionalFactor);

  bad = d;
  bad.t.pop_back();
  CHECK(kind_of(bad) == ValidationError::Kind::ShapeMismatch);

  BLDatum empty;
  empty.n = 2;
  CHECK(kind_of(empty) == ValidationError::Kind::EmptyDatum);

  try {
    bad = d;
    bad.factors[1].map = RatMatrix::from_ints({{0, 0}});
    validate(bad);
  } catch (const ValidationError& e) {
    CHECK(e.factor() == std::optional<std::size_t>(1));
  }
}

TEST_CASE("normalization fills the bounding map and atomic part") {
  BLDatum g = young(ts({"1/2", "1/2", "1"}));
  CHECK(g.map0->rows() == 0);
  CHECK(g.atomic->is_zero());
  CHECK(kernel0(g).is_full());
  CHECK(is_global_type(g));

  BLDatum l = young(ts({"1/2", "1/2", "1"}), Mode::Local);
  CHECK(*l.map0 == RatMatrix::identity(2));
  CHECK(kernel0(l).is_zero());
  CHECK_FALSE(is_global_type(l));

  BLDatum disc = young(ts({"1", "1", "1"}), Mode::Discrete);
  CHECK(disc.atomic->is_full());
  CHECK_FALSE(is_global_type(disc));

  CHECK(validate(l) == l);
  CHECK(validate(disc) == disc);
}

TEST_CASE("homogeneity gap") {
  CHECK(homogeneity_gap(young(ts({"1/2", "1/2", "1"}))) == 0);
  CHECK(homogeneity_gap(young(ts({"1/2", "1/2", "1/2"}))) == Rat(1, 2));
  CHECK(homogeneity_gap(loomis_whitney(3, ts({"1/2", "1/2", "1/2"}))) == 0);
  CHECK(homogeneity_gap(loomis_whitney(4, ts({"1/3", "1/3", "1/3", "1/3"}))) == 0);
  CHECK(homogeneity_gap(holder(2, ts({"1/2", "1/4", "1/4"}))) == 0);
}

TEST_CASE("drop_factor and with_exponents") {
  BLDatum d = young(ts({"1/2", "1/2", "1"}));
  BLDatum e = drop_factor(d, 2);
  CHECK(e.m() == 2);
  CHECK(e.t == ts({"1/2", "1/2"}));
  BLDatum w = with_exponents(d, ts({"1", "1", "0"}));
  CHECK(w.factors == d.factors);
  CHECK(w.t[0] == 1);
}

TEST_CASE("fixtures load and round trip through JSON") {
  for (auto name : {"young.json", "lw3.json", "lw4.json", "holder.json", "holder_line.json", "gut_young.json",
                    "lw3_local_infeasible.json", "discrete_young.json", "adversarial_n7.json"}) {
    CAPTURE(name);
    BLDatum d = load_fixture(name);
    CHECK(datum_from_json(datum_to_json(d)) == d);
    CHECK(datum_from_json(json::parse(datum_to_json(d).dump())) == d);
  }
  BLDatum g = load_fixture("gut_young.json");
  CHECK(g.mode == Mode::Gut);
  CHECK(kernel0(g) == Subspace::span(RatMatrix::from_ints({{0, 1}})));
}

TEST_CASE("parse errors name the offending field") {
  auto message = [](const std::string& text) -> std::string {
    try {
      parse_datum_text(text);
    } catch (const ParseError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(R"({"mode":"global","n":2})").find("factors") != std::string::npos);
  CHECK(message(R"({"mode":"global","n":2,"factors":[{"target_dim":1,"matrix":[[1,0]],"t":0.5}]})").find("t") !=
        std::string::npos);
  CHECK(message(R"({"mode":"global","n":2,"factors":[{"target_dim":1,"matrix":[[1,0,0]],"t":"1"}]})")
            .find("entries") != std::string::npos);
  CHECK(message(R"({"mode":"gut","n":2,"factors":[{"target_dim":1,"matrix":[[1,0]],"t":"1"}]})").find("ell0") !=
        std::string::npos);
  CHECK(message("{\n\"mode\": \"global\",\n  oops }").find("line") != std::string::npos);
  CHECK_THROWS_AS(parse_datum_text(R"({"mode":"sideways","n":1,"factors":[]})"), ParseError);
  CHECK_THROWS_AS(load_datum("/nonexistent/datum.json"), ParseError);
}

TEST_CASE("product-structure data become coordinate projections") {
  DatumFile f = load_datum(fixture("finner_lw.json"));
  REQUIRE(f.finner);
  BLDatum d = f.continuum();
  CHECK(d == loomis_whitney(3, ts({"1/2", "1/2", "1/2"})));
  CHECK_THROWS_AS(parse_datum_text(R"({"mode":"finner","factors":[{"t":"1"}],
      "finner":{"indices":[{"id":"a","class":"general"}],"supports":[["z"]]}})"),
                  ParseError);
}

TEST_CASE("discrete data reduce to the rational maps") {
  DiscreteDatum dd;
  dd.free_rank = 2;
  dd.homs = {IntMatrix::from_ints({{1, 0}}), IntMatrix::from_ints({{0, 2}}), IntMatrix::from_ints({{1, -1}})};
  dd.t = ts({"1", "1", "1"});
  BLDatum d = discrete_to_rational(dd);
  CHECK(d.mode == Mode::Discrete);
  CHECK(d.factors[1].map == RatMatrix::from_ints({{0, 2}}));
  CHECK(d.atomic->is_full());
}

TEST_CASE("subspace form") {
  BLDatum d = young(ts({"1/2", "1/2", "1"}));
  SubspaceForm s = subspace_form(d);
  CHECK(s.joint_map.rows() == 3);
  CHECK(s.sigma.ambient_dim() == 3);
  CHECK(s.sigma.dim() == 2);
  CHECK(s.sigma.contains(std::vector<Rat>{1, 0, 1}));
  CHECK(s.projections.size() == 3);
  CHECK(s.projections[2] == RatMatrix::from_ints({{0, 0, 1}}));
}

TEST_CASE("property: validation is idempotent and JSON is lossless") {
  Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    Mode mode = static_cast<Mode>(rng.integer(0, 1));
    BLDatum d = rng.datum(rng.integer(1, 4), rng.integer(1, 4), mode);
    CHECK(validate(d) == d);
    CHECK(datum_from_json(datum_to_json(d)) == d);
  }
}
