#include "hbl/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace hbl {

namespace {

Eigen::MatrixXd to_eigen(const RatMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).get_d();
  return out;
}

std::vector<Eigen::MatrixXd> eigen_maps(const BLDatum& d) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& f : d.factors) out.push_back(to_eigen(f.map));
  return out;
}

double log_p_term(const Rat& t, std::size_t nj) {
  if (sgn(t) == 0) return 0;  // t log(1/t) -> 0
  return -static_cast<double>(nj) * std::log(t.get_d());
}

void check_shapes(const BLDatum& d, std::size_t count) {
  if (count != d.m()) throw DimensionMismatch("one matrix per factor is required");
}

struct Evaluation {
  RatioValue value;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> A;
  Eigen::MatrixXd Minv;
};

// log det M is read off a QR factorization of the stacked L_j^T l_j
// (M = F^T F), which keeps relative accuracy when M is ill-conditioned.
Evaluation evaluate(const BLDatum& d, const std::vector<Eigen::MatrixXd>& maps, const GaussianTuple& g) {
  check_shapes(d, g.A.size());
  Evaluation e;
  Eigen::Index rows = 0;
  for (const auto& f : d.factors) rows += static_cast<Eigen::Index>(f.target_dim);
  Eigen::MatrixXd F(rows, d.n);
  double acc = 0;
  for (std::size_t j = 0, r = 0; j < d.m(); ++j) {
    const auto nj = static_cast<Eigen::Index>(d.factors[j].target_dim);
    if (g.A[j].rows() != nj || g.A[j].cols() != nj)
      throw DimensionMismatch("A_" + std::to_string(j) + " has the wrong size");
    e.A.emplace_back(g.A[j]);
    if (e.A.back().info() != Eigen::Success)
      throw NotPositiveDefinite(j, "A_" + std::to_string(j) + " is not positive definite");
    Eigen::MatrixXd L = e.A.back().matrixL();
    acc += d.t[j].get_d() * (log_p_term(d.t[j], nj) + 2 * L.diagonal().array().log().sum());
    F.middleRows(r, nj) = L.transpose() * maps[j];
    r += nj;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(F);
  Eigen::MatrixXd R = qr.matrixR().topRows(d.n).triangularView<Eigen::Upper>();
  double logdetM = 0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double rii = std::abs(R(i, i));
    if (!(rii > 0)) {
      e.value.infinite = true;
      e.value.log_ratio = std::numeric_limits<double>::infinity();
      return e;
    }
    logdetM += 2 * std::log(rii);
  }
  e.value.log_ratio = 0.5 * (acc - logdetM);
  // M^{-1} = P R^{-1} R^{-T} P^T
  Eigen::MatrixXd Rinv = R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(d.n, d.n));
  const auto& P = qr.colsPermutation();
  e.Minv = P * (Rinv * Rinv.transpose()) * P.transpose();
  return e;
}

std::vector<Eigen::MatrixXd> gradient_from(const BLDatum& d, const std::vector<Eigen::MatrixXd>& maps,
                                           const Evaluation& e) {
  std::vector<Eigen::MatrixXd> G;
  for (std::size_t j = 0; j < d.m(); ++j) {
    const auto nj = static_cast<Eigen::Index>(d.factors[j].target_dim);
    Eigen::MatrixXd Ainv = e.A[j].solve(Eigen::MatrixXd::Identity(nj, nj));
    Eigen::MatrixXd g = 0.5 * (d.t[j].get_d() * Ainv - maps[j] * e.Minv * maps[j].transpose());
    G.push_back(0.5 * (g + g.transpose()));
  }
  return G;
}

Rat rat_pow(Rat base, long e) {
  if (e < 0) {
    base = 1 / base;
    e = -e;
  }
  Rat out = 1;
  while (e > 0) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

double log_rat(const Rat& q) {
  if (abs(q - 1) < Rat(1, 2)) return std::log1p(Rat(q - 1).get_d());
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log(mn) - std::log(md) + static_cast<double>(en - ed) * std::log(2.0);
}

RatMatrix rat_inverse(const RatMatrix& a) {
  const std::size_t n = a.rows();
  RatMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = a(r, c);
    aug(r, n + r) = 1;
  }
  RrefResult rr = rref(aug);
  if (rr.rank < n || rr.pivots[n - 1] != n - 1) throw std::domain_error("singular matrix");
  RatMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = rr.echelon(r, n + c);
  return inv;
}

/// Orthogonal projector onto U inside Q^k.
RatMatrix projector(const Subspace& U) {
  const std::size_t k = U.ambient_dim();
  if (U.is_zero()) return RatMatrix(k, k);
  RatMatrix B = U.embedding();
  RatMatrix gram = U.basis() * B;
  return B * rat_inverse(gram) * U.basis();
}

Eigen::MatrixXd projector_d(const Subspace& U) { return to_eigen(projector(U)); }

const Subspace& family_subspace(const ScalingWitness& w) {
  return w.violation == Violation::RBlowup ? w.V_big : w.V;
}

}  // namespace

RatioValue gaussian_ratio(const BLDatum& d, const GaussianTuple& g) { return evaluate(d, eigen_maps(d), g).value; }

std::vector<Eigen::MatrixXd> gaussian_gradient(const BLDatum& d, const GaussianTuple& g) {
  auto maps = eigen_maps(d);
  Evaluation e = evaluate(d, maps, g);
  if (e.value.infinite) throw std::domain_error("the ratio is infinite at this tuple");
  return gradient_from(d, maps, e);
}

Int exponent_denominator(const BLDatum& d) { return common_denominator(d.t); }

std::optional<Rat> ratio_exact_power(const BLDatum& d, const std::vector<RatMatrix>& A) {
  check_shapes(d, A.size());
  const Int D = exponent_denominator(d);
  if (!D.fits_slong_p()) throw std::overflow_error("exponent denominator too large");
  const long Dl = D.get_si();
  RatMatrix M(d.n, d.n);
  Rat out = 1;
  for (std::size_t j = 0; j < d.m(); ++j) {
    const auto& l = d.factors[j].map;
    const auto nj = d.factors[j].target_dim;
    if (A[j].rows() != nj || A[j].cols() != nj) throw DimensionMismatch("A_" + std::to_string(j) + " has the wrong size");
    Rat det = determinant(A[j]);
    if (sgn(det) <= 0) throw NotPositiveDefinite(j, "A_" + std::to_string(j) + " is not positive definite");
    RatMatrix LtAL = l.transpose() * A[j] * l;
    for (std::size_t r = 0; r < d.n; ++r)
      for (std::size_t c = 0; c < d.n; ++c) M(r, c) += LtAL(r, c);
    if (sgn(d.t[j]) == 0) continue;
    Rat e = d.t[j] * Dl;  // integral by the choice of D
    Rat p = 1 / d.t[j];
    out *= rat_pow(rat_pow(p, static_cast<long>(nj)) * det, e.get_num().get_si());
  }
  Rat detM = d.n ? determinant(M) : Rat(1);
  if (sgn(detM) == 0) return std::nullopt;
  return out * rat_pow(detM, -Dl);
}

std::optional<double> exact_log_ratio(const BLDatum& d, const GaussianTuple& g) {
  check_shapes(d, g.A.size());
  std::vector<RatMatrix> A;
  for (const auto& a : g.A) {
    RatMatrix q(a.rows(), a.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index c = 0; c < a.cols(); ++c) q(r, c) = (Rat(a(r, c)) + Rat(a(c, r))) / 2;
    A.push_back(std::move(q));
  }
  auto p = ratio_exact_power(d, A);
  if (!p) return std::nullopt;
  return log_rat(*p) / (2 * exponent_denominator(d).get_d());
}

const char* trace_status_name(TraceStatus s) {
  switch (s) {
    case TraceStatus::Converged: return "converged";
    case TraceStatus::Drifting: return "drifting";
    case TraceStatus::Diverging: return "diverging";
  }
  return "converged";
}

namespace {

double normal(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng), b = u(rng);
  return std::sqrt(-2 * std::log1p(-a)) * std::cos(2 * std::numbers::pi * b);
}

double eigen_spread(const GaussianTuple& g) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& A : g.A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
    hi = std::max(hi, es.eigenvalues().maxCoeff());
  }
  return lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
}

RatioTrace run_trace(const BLDatum& d, const std::vector<Eigen::MatrixXd>& maps, const AscentOptions& o,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Eigen::Index> offs{0};
  for (const auto& f : d.factors) offs.push_back(offs.back() + static_cast<Eigen::Index>(f.target_dim * f.target_dim));
  const Eigen::Index N = offs.back();

  // x packs the B_j column-major; A_j = B_j B_j^T + eps I.
  auto tuple_of = [&](const Eigen::VectorXd& x) {
    GaussianTuple g;
    for (std::size_t j = 0; j < d.m(); ++j) {
      const auto nj = static_cast<Eigen::Index>(d.factors[j].target_dim);
      Eigen::Map<const Eigen::MatrixXd> b(x.data() + offs[j], nj, nj);
      g.A.push_back(b * b.transpose() + o.epsilon * Eigen::MatrixXd::Identity(nj, nj));
    }
    return g;
  };
  auto grad_of = [&](const Eigen::VectorXd& x, const Evaluation& e) {
    auto G = gradient_from(d, maps, e);
    Eigen::VectorXd out(N);
    for (std::size_t j = 0; j < d.m(); ++j) {
      const auto nj = static_cast<Eigen::Index>(d.factors[j].target_dim);
      Eigen::Map<const Eigen::MatrixXd> b(x.data() + offs[j], nj, nj);
      Eigen::MatrixXd gb = 2 * G[j] * b;
      out.segment(offs[j], nj * nj) = Eigen::Map<const Eigen::VectorXd>(gb.data(), nj * nj);
    }
    return out;
  };

  Eigen::VectorXd x(N);
  for (std::size_t j = 0; j < d.m(); ++j) {
    const auto nj = static_cast<Eigen::Index>(d.factors[j].target_dim);
    for (Eigen::Index c = 0; c < nj; ++c)
      for (Eigen::Index r = 0; r < nj; ++r) x[offs[j] + c * nj + r] = (r == c ? 1.0 : 0.0) + 0.5 * normal(rng);
  }

  RatioTrace tr;
  tr.seed = seed;
  GaussianTuple g = tuple_of(x);
  Evaluation e = evaluate(d, maps, g);
  tr.log_ratio.push_back(e.value.log_ratio);
  std::size_t above = 0;
  bool diverged = e.value.infinite;
  Eigen::VectorXd grad = diverged ? Eigen::VectorXd::Zero(N) : grad_of(x, e);
  // Inverse Hessian estimate for the ascent; starts as a unit-length step.
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(N, N) / std::max(grad.norm(), 1e-300);

  for (std::size_t it = 0; it < o.iterations && !diverged; ++it) {
    if (!(grad.squaredNorm() > 0) || !grad.allFinite()) break;
    Eigen::VectorXd dir = H * grad;
    if (!(dir.dot(grad) > 0)) {
      H = Eigen::MatrixXd::Identity(N, N) / grad.norm();
      dir = H * grad;
    }
    bool accepted = false;
    double step = 1;
    Eigen::VectorXd xt;
    for (int h = 0; h <= 40; ++h, step *= 0.5) {
      xt = x + step * dir;
      GaussianTuple tg = tuple_of(xt);
      Evaluation te;
      try {
        te = evaluate(d, maps, tg);
      } catch (const NotPositiveDefinite&) {
        continue;
      }
      if (te.value.infinite) {
        diverged = true;
        break;
      }
      if (!std::isfinite(te.value.log_ratio)) {
        diverged = tr.log_ratio.back() > o.ceiling;
        break;
      }
      if (te.value.log_ratio > e.value.log_ratio) {
        g = std::move(tg);
        e = std::move(te);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    Eigen::VectorXd ng = grad_of(xt, e);
    Eigen::VectorXd sv = xt - x, yv = grad - ng;  // curvature of -log_ratio
    const double sy = sv.dot(yv);
    if (sy > 1e-14 * sv.norm() * yv.norm() && std::isfinite(sy)) {
      if (it == 0) H = Eigen::MatrixXd::Identity(N, N) * (sy / yv.squaredNorm());
      const double rho = 1 / sy;
      Eigen::MatrixXd V = Eigen::MatrixXd::Identity(N, N) - rho * yv * sv.transpose();
      H = V.transpose() * H * V + rho * sv * sv.transpose();
    }
    x = std::move(xt);
    grad = std::move(ng);
    tr.log_ratio.push_back(e.value.log_ratio);
    above = e.value.log_ratio > o.ceiling ? above + 1 : 0;
    if (above >= o.sustain) diverged = true;
  }

  tr.final = g;
  if (diverged)
    tr.status = TraceStatus::Diverging;
  else if (eigen_spread(g) > o.degeneracy)
    tr.status = TraceStatus::Drifting;
  else
    tr.status = TraceStatus::Converged;
  return tr;
}

}  // namespace

AscentReport ascent(const BLDatum& input, const AscentOptions& o) {
  const BLDatum d = validate(input);
  const auto maps = eigen_maps(d);
  AscentReport rep;
  rep.best_log_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < o.restarts; ++r) {
    rep.traces.push_back(run_trace(d, maps, o, o.seed + 0x9E3779B97F4A7C15ull * r));
    auto& t = rep.traces.back();
    if (t.status != TraceStatus::Diverging) t.final_exact = exact_log_ratio(d, t.final);
    rep.best_log_ratio = std::max(rep.best_log_ratio, rep.traces.back().log_ratio.back());
  }
  rep.status = TraceStatus::Converged;
  for (const auto& t : rep.traces) {
    if (t.status == TraceStatus::Diverging) rep.status = TraceStatus::Diverging;
    if (t.status == TraceStatus::Drifting && rep.status == TraceStatus::Converged) rep.status = TraceStatus::Drifting;
  }
  return rep;
}

GaussianTuple blowup_family(const BLDatum& d, const ScalingWitness& w, double s) {
  const Subspace& V = family_subspace(w);
  GaussianTuple g;
  for (const auto& f : d.factors) {
    Eigen::MatrixXd P = projector_d(image(f.map, V));
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(P.rows(), P.cols());
    if (w.violation == Violation::RBlowup)
      g.A.push_back(std::exp(-2 * s) * P + (I - P));
    else
      g.A.push_back(P + std::exp(2 * s) * (I - P));
  }
  return g;
}

std::vector<RatMatrix> blowup_family_exact(const BLDatum& d, const ScalingWitness& w, const Rat& lambda) {
  const Subspace& V = family_subspace(w);
  const Rat l2 = lambda * lambda;
  std::vector<RatMatrix> out;
  for (const auto& f : d.factors) {
    RatMatrix P = projector(image(f.map, V));
    RatMatrix A(P.rows(), P.cols());
    for (std::size_t r = 0; r < P.rows(); ++r)
      for (std::size_t c = 0; c < P.cols(); ++c) {
        Rat id = r == c ? 1 : 0;
        if (w.violation == Violation::RBlowup)
          A(r, c) = P(r, c) / l2 + (id - P(r, c));
        else
          A(r, c) = P(r, c) + l2 * (id - P(r, c));
      }
    out.push_back(std::move(A));
  }
  return out;
}

Rat predicted_slope(const ScalingWitness& w) {
  return w.violation == Violation::RBlowup ? w.R_exponent : Rat(-w.r_exponent);
}

SlopeMeasurement blowup_slope_exact(const BLDatum& d, const ScalingWitness& w) {
  const double D = exponent_denominator(d).get_d();
  auto log_ratio_at = [&](unsigned bits) {
    Rat lambda = 1;
    mpz_mul_2exp(lambda.get_num_mpz_t(), lambda.get_num_mpz_t(), bits);
    auto p = ratio_exact_power(d, blowup_family_exact(d, w, lambda));
    if (!p) throw std::domain_error("the blow-up family hits a singular form");
    return log_rat(*p) / (2 * D);
  };
  const double l20 = log_ratio_at(20), l24 = log_ratio_at(24);
  return {(l24 - l20) / (4 * std::log(2.0)), predicted_slope(w).get_d(), true};
}

SlopeMeasurement blowup_slope_float(const BLDatum& d, const ScalingWitness& w, double s0, double s1) {
  const double a = gaussian_ratio(d, blowup_family(d, w, s0)).log_ratio;
  const double b = gaussian_ratio(d, blowup_family(d, w, s1)).log_ratio;
  return {(b - a) / (s1 - s0), predicted_slope(w).get_d(), false};
}

MonteCarloResult quasi_monte_carlo(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& lo,
                                   const Eigen::VectorXd& hi, std::size_t samples, std::uint64_t seed) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  const auto dim = lo.size();
  if (dim > 8) throw std::invalid_argument("quasi-Monte Carlo supports at most 8 dimensions");
  constexpr std::size_t kShifts = 16;
  const std::size_t per = std::max<std::size_t>(1, samples / kShifts);
  double volume = 1;
  for (Eigen::Index i = 0; i < dim; ++i) volume *= std::max(0.0, hi[i] - lo[i]);

  MonteCarloResult res;
  res.samples = per * kShifts;
  if (volume == 0) return res;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> means;
  Eigen::VectorXd y(dim);
  for (std::size_t s = 0; s < kShifts; ++s) {
    std::vector<double> shift(dim);
    for (auto& x : shift) x = u(rng);
    double acc = 0;
    for (std::size_t k = 1; k <= per; ++k) {
      for (Eigen::Index i = 0; i < dim; ++i) {
        double h = 0, inv = 1.0 / kPrimes[i];
        for (std::size_t q = k; q > 0; q /= kPrimes[i], inv /= kPrimes[i]) h += static_cast<double>(q % kPrimes[i]) * inv;
        double v = h + shift[i];
        v -= std::floor(v);
        y[i] = lo[i] + v * (hi[i] - lo[i]);
      }
      acc += f(y);
    }
    means.push_back(volume * acc / static_cast<double>(per));
  }
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / kShifts;
  double var = 0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= kShifts - 1;
  res.estimate = mean;
  res.standard_error = std::sqrt(var / kShifts);
  return res;
}

MonteCarloResult monte_carlo_lambda(const BLDatum& input, const std::vector<Box>& boxes, std::size_t samples,
                                    std::uint64_t seed) {
  const BLDatum d = validate(input);
  if (d.n > 4) throw std::invalid_argument("monte_carlo_lambda needs n <= 4");
  check_shapes(d, boxes.size());
  const auto maps = eigen_maps(d);
  Eigen::Index N = 0;
  for (std::size_t j = 0; j < d.m(); ++j) {
    if (boxes[j].lo.size() != d.factors[j].target_dim || boxes[j].hi.size() != d.factors[j].target_dim)
      throw DimensionMismatch("box " + std::to_string(j) + " has the wrong dimension");
    N += static_cast<Eigen::Index>(d.factors[j].target_dim);
  }
  Eigen::MatrixXd J(N, d.n);
  Eigen::VectorXd zlo(N), zhi(N);
  for (std::size_t j = 0, row = 0; j < d.m(); ++j)
    for (std::size_t i = 0; i < d.factors[j].target_dim; ++i, ++row) {
      J.row(row) = maps[j].row(i);
      zlo[row] = boxes[j].lo[i];
      zhi[row] = boxes[j].hi[i];
    }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
  if (lu.rank() < static_cast<Eigen::Index>(d.n))
    throw std::invalid_argument("joint map is not injective; the integral is not over a bounded region");
  // y = J^+ J y, so interval arithmetic on J^+ bounds the support.
  Eigen::MatrixXd Jp = (J.transpose() * J).ldlt().solve(J.transpose());
  Eigen::VectorXd lo(d.n), hi(d.n);
  for (std::size_t r = 0; r < d.n; ++r) {
    lo[r] = hi[r] = 0;
    for (Eigen::Index k = 0; k < N; ++k) {
      double a = Jp(r, k) * zlo[k], b = Jp(r, k) * zhi[k];
      lo[r] += std::min(a, b);
      hi[r] += std::max(a, b);
    }
  }
  auto integrand = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd z = J * y;
    for (Eigen::Index k = 0; k < N; ++k)
      if (z[k] < zlo[k] || z[k] > zhi[k]) return 0.0;
    return 1.0;
  };
  return quasi_monte_carlo(integrand, lo, hi, samples, seed);
}

MonteCarloResult monte_carlo_gaussian(const BLDatum& input, const GaussianTuple& g, std::size_t samples,
                                      std::uint64_t seed) {
  const BLDatum d = validate(input);
  if (d.n > 4) throw std::invalid_argument("monte_carlo_gaussian needs n <= 4");
  const auto maps = eigen_maps(d);
  Evaluation e = evaluate(d, maps, g);
  if (e.value.infinite) throw std::domain_error("the quadratic form is degenerate");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(d.n, d.n);
  for (std::size_t j = 0; j < d.m(); ++j) M += maps[j].transpose() * g.A[j] * maps[j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  const double L = std::sqrt(40.0 / (std::numbers::pi * es.eigenvalues().minCoeff()));
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(d.n, -L), hi = Eigen::VectorXd::Constant(d.n, L);
  auto integrand = [&](const Eigen::VectorXd& y) {
    double v = 1;
    for (std::size_t j = 0; j < d.m(); ++j) {
      Eigen::VectorXd x = maps[j] * y;
      v *= std::exp(-std::numbers::pi * x.dot(g.A[j] * x));
    }
    return v;
  };
  return quasi_monte_carlo(integrand, lo, hi, samples, seed);
}

}  // namespace hbl
