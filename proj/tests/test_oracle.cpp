#include <doctest.h>

#include <cmath>

#include "hbl/oracle.hpp"
#include "support.hpp"

using namespace hbl;
using namespace hbl::test;
using Eigen::MatrixXd;

namespace {

MatrixXd scalar(double a) { return MatrixXd::Constant(1, 1, a); }

// Young's datum with f_j = exp(-pi a_j x^2): Lambda = (a1 a2 + a1 a3 + a2 a3)^(-1/2)
// and ||f_j||_p = (p a_j)^(-1/(2p)).
double young_closed_form(const std::vector<double>& t, const std::vector<double>& a) {
  double log_lambda = -0.5 * std::log(a[0] * a[1] + a[0] * a[2] + a[1] * a[2]);
  double log_norms = 0;
  for (int j = 0; j < 3; ++j)
    if (t[j] > 0) log_norms += -0.5 * t[j] * std::log(a[j] / t[j]);
  return log_lambda - log_norms;
}

GaussianTuple random_tuple(const BLDatum& d, Rng& rng) {
  GaussianTuple g;
  std::normal_distribution<double> n01;
  for (const auto& f : d.factors) {
    auto k = static_cast<Eigen::Index>(f.target_dim);
    MatrixXd B(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index c = 0; c < k; ++c) B(r, c) = n01(rng.engine());
    g.A.push_back(B * B.transpose() + 0.5 * MatrixXd::Identity(k, k));
  }
  return g;
}

}  // namespace

TEST_CASE("a single invertible factor has ratio one") {
  BLDatum d = make_global(2, {RatMatrix::from_ints({{2, 1}, {1, 1}})}, ts({"1"}));
  Rng rng(61);
  for (int i = 0; i < 5; ++i) CHECK(std::abs(gaussian_ratio(d, random_tuple(d, rng)).log_ratio) < 1e-12);
}

TEST_CASE("Young's datum matches the closed form") {
  BLDatum d = young(ts({"1/2", "1/2", "1"}));
  for (auto a : {std::vector<double>{1, 1, 1}, {2, 0.5, 3}, {0.1, 7, 1.3}}) {
    GaussianTuple g{{scalar(a[0]), scalar(a[1]), scalar(a[2])}};
    CHECK(gaussian_ratio(d, g).log_ratio == doctest::Approx(young_closed_form({0.5, 0.5, 1}, a)).epsilon(1e-12));
  }
  BLDatum s = young(ts({"2/3", "2/3", "2/3"}));
  GaussianTuple g{{scalar(1.5), scalar(1), scalar(0.25)}};
  CHECK(gaussian_ratio(s, g).log_ratio ==
        doctest::Approx(young_closed_form({2.0 / 3, 2.0 / 3, 2.0 / 3}, {1.5, 1, 0.25})).epsilon(1e-12));
}

TEST_CASE("exact powers of the ratio") {
  BLDatum d = young(ts({"1/2", "1/2", "1"}));
  CHECK(exponent_denominator(d) == 2);
  std::vector<RatMatrix> id(3, RatMatrix::identity(1));
  auto p = ratio_exact_power(d, id);
  REQUIRE(p);
  CHECK(*p == Rat(4, 9));
  auto e = exact_log_ratio(d, GaussianTuple{{scalar(1), scalar(1), scalar(1)}});
  REQUIRE(e);
  CHECK(*e == doctest::Approx(0.5 * std::log(2.0 / 3)).epsilon(1e-14));

  BLDatum sing = make_global(2, {RatMatrix::from_ints({{1, 0}})}, ts({"1"}));
  CHECK_FALSE(ratio_exact_power(sing, {RatMatrix::identity(1)}));
  CHECK(gaussian_ratio(sing, GaussianTuple{{scalar(1)}}).infinite);
}

TEST_CASE("invalid tuples") {
  BLDatum d = young(ts({"1/2", "1/2", "1"}));
  try {
    gaussian_ratio(d, GaussianTuple{{scalar(1), scalar(-1), scalar(1)}});
    FAIL("expected NotPositiveDefinite");
  } catch (const NotPositiveDefinite& e) {
    CHECK(e.factor == 1);
  }
  CHECK_THROWS_AS(gaussian_ratio(d, GaussianTuple{{scalar(1), scalar(1)}}), DimensionMismatch);
}

TEST_CASE("property: gradient agrees with central differences") {
  Rng rng(62);
  for (int i = 0; i < 20; ++i) {
    BLDatum d = rng.datum(rng.integer(1, 3), rng.integer(2, 4));
    GaussianTuple g = random_tuple(d, rng);
    if (gaussian_ratio(d, g).infinite) continue;
    auto grad = gaussian_gradient(d, g);
    const double h = 1e-6;
    for (std::size_t j = 0; j < d.m(); ++j)
      for (Eigen::Index r = 0; r < g.A[j].rows(); ++r)
        for (Eigen::Index c = 0; c <= r; ++c) {
          GaussianTuple up = g, dn = g;
          up.A[j](r, c) += h;
          dn.A[j](r, c) -= h;
          if (r != c) {
            up.A[j](c, r) += h;
            dn.A[j](c, r) -= h;
          }
          double fd = (gaussian_ratio(d, up).log_ratio - gaussian_ratio(d, dn).log_ratio) / (2 * h);
          double an = r == c ? grad[j](r, c) : 2 * grad[j](r, c);
          CHECK(std::abs(fd - an) < 1e-5);
        }
  }
}

TEST_CASE("property: homogeneous data are scale invariant, exactly") {
  Rng rng(63);
  int checked = 0;
  while (checked < 20) {
    auto h = rng.homogeneous_datum(rng.integer(1, 3), rng.integer(1, 3));
    if (!h) continue;
    std::vector<RatMatrix> A;
    for (const auto& f : h->factors) {
      RatMatrix B = rng.surjection(f.target_dim, f.target_dim);
      A.push_back(B * B.transpose());
    }
    auto base = ratio_exact_power(*h, A);
    if (!base) continue;
    for (Rat lambda : {Rat(2), Rat(3), Rat(7, 5)}) {
      std::vector<RatMatrix> scaled = A;
      for (auto& m : scaled)
        for (std::size_t r = 0; r < m.rows(); ++r)
          for (auto& x : m.row(r)) x *= lambda;
      CHECK(ratio_exact_power(*h, scaled) == base);
    }
    ++checked;
  }
}

TEST_CASE("ascent traces are monotone and classified") {
  AscentOptions o;
  o.restarts = 2;
  o.iterations = 300;
  AscentReport lw = ascent(loomis_whitney(3, ts({"1/2", "1/2", "1/2"})), o);
  for (const auto& t : lw.traces) {
    for (std::size_t i = 1; i < t.log_ratio.size(); ++i) CHECK(t.log_ratio[i] >= t.log_ratio[i - 1]);
    REQUIRE(t.final_exact);
    CHECK(*t.final_exact <= 1e-9);
  }
  CHECK(lw.status != TraceStatus::Diverging);

  AscentOptions full = o;
  full.iterations = 2000;
  AscentReport bad = ascent(loomis_whitney(3, ts({"1", "1/4", "1/4"})), full);
  CHECK(bad.status == TraceStatus::Diverging);
  CHECK_FALSE(bad.traces.front().final_exact);

  AscentReport y = ascent(young(ts({"1/2", "1/2", "1"})), o);
  CHECK(y.status == TraceStatus::Drifting);
  for (const auto& t : y.traces) {
    REQUIRE(t.final_exact);
    CHECK(*t.final_exact <= 0);
    CHECK(*t.final_exact > -1e-3);
  }
}

TEST_CASE("blow-up slopes match the witness exponents") {
  BLDatum lw = loomis_whitney(3, ts({"1", "1/4", "1/4"}));
  ScalingWitness w = build_witness(lw, Subspace::coordinate(3, std::vector<std::size_t>{0}));
  SlopeMeasurement ex = blowup_slope_exact(lw, w);
  CHECK(ex.predicted == 0.5);
  CHECK(std::abs(ex.measured - ex.predicted) < 1e-6);
  SlopeMeasurement fl = blowup_slope_float(lw, w, 4, 6);
  CHECK(std::abs(fl.measured - 0.5) < 1e-6);

  BLDatum local = load_fixture("lw3_local_infeasible.json");
  ScalingWitness r = build_witness(local, Subspace::zero(3));
  CHECK(predicted_slope(r) == 1);
  CHECK(std::abs(blowup_slope_exact(local, r).measured - 1) < 1e-6);
}

TEST_CASE("a critical subspace gives a flat family") {
  BLDatum d = young(ts({"1/2", "1/2", "1"}));
  Subspace V = kernel(d.factors[2].map);
  REQUIRE(f1(d, V) == 0);
  ScalingWitness w;
  w.V = w.V_big = V;
  w.V_small = Subspace::zero(2);
  w.R_exponent = 0;
  w.r_exponent = f2(d, V);
  w.violation = Violation::RBlowup;
  CHECK(std::abs(blowup_slope_exact(d, w).measured) < 1e-6);
  CHECK(std::abs(blowup_slope_float(d, w, 10, 14).measured) < 1e-4);
}

TEST_CASE("Monte Carlo integrals of indicator boxes") {
  BLDatum h = make_global(1, {RatMatrix::identity(1), RatMatrix::identity(1)}, ts({"1/2", "1/2"}));
  auto one = monte_carlo_lambda(h, {Box{{0}, {1}}, Box{{0}, {1}}}, 4096);
  CHECK(std::abs(one.estimate - 1) < 1e-9);
  auto none = monte_carlo_lambda(h, {Box{{0}, {1}}, Box{{2}, {3}}}, 4096);
  CHECK(none.estimate == 0);

  BLDatum y = young(ts({"1/2", "1/2", "1"}));
  auto half = monte_carlo_lambda(y, {Box{{0}, {1}}, Box{{0}, {1}}, Box{{0}, {1}}}, 1 << 16);
  CHECK(std::abs(half.estimate - 0.5) < std::max(3 * half.standard_error, 1e-3));

  CHECK_THROWS_AS(monte_carlo_lambda(make_global(2, {RatMatrix::from_ints({{1, 0}})}, ts({"1"})), {Box{{0}, {1}}}, 64),
                  std::invalid_argument);
}

TEST_CASE("Monte Carlo agrees with the Gaussian determinant") {
  Rng rng(64);
  for (int i = 0; i < 5; ++i) {
    BLDatum d = rng.datum(2, 3);
    GaussianTuple g = random_tuple(d, rng);
    auto mc = monte_carlo_gaussian(d, g, 1 << 15);
    MatrixXd M = MatrixXd::Zero(2, 2);
    for (std::size_t j = 0; j < d.m(); ++j) {
      MatrixXd l(d.factors[j].target_dim, 2);
      for (std::size_t r = 0; r < d.factors[j].target_dim; ++r)
        for (std::size_t c = 0; c < 2; ++c) l(r, c) = d.factors[j].map(r, c).get_d();
      M += l.transpose() * g.A[j] * l;
    }
    double exact = 1 / std::sqrt(M.determinant());
    CHECK(std::abs(mc.estimate - exact) <= 3 * mc.standard_error + 1e-6 * exact);
  }
}
