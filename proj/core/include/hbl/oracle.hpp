#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hbl/certificate.hpp"
#include "hbl/datum.hpp"

namespace hbl {

// Inputs are f_j(x) = exp(-pi x.A_j x); with this normalization every norm is
// a pure determinant power:
//   log ratio = -1/2 log det M + 1/2 sum_j t_j (n_j log p_j + log det A_j),
//   M = sum_j l_j^T A_j l_j.

struct GaussianTuple {
  std::vector<Eigen::MatrixXd> A;
};

class NotPositiveDefinite : public std::invalid_argument {
 public:
  NotPositiveDefinite(std::size_t j, const std::string& what) : std::invalid_argument(what), factor(j) {}
  std::size_t factor;
};

struct RatioValue {
  double log_ratio = 0;
  bool infinite = false;  // M singular
};

RatioValue gaussian_ratio(const BLDatum& d, const GaussianTuple& g);
/// d log_ratio / d A_j, symmetric.
std::vector<Eigen::MatrixXd> gaussian_gradient(const BLDatum& d, const GaussianTuple& g);

/// Least common denominator D of the exponents.
Int exponent_denominator(const BLDatum& d);
/// ratio^(2D), exactly. Empty when M is singular.
std::optional<Rat> ratio_exact_power(const BLDatum& d, const std::vector<RatMatrix>& A);
/// log_ratio of a floating-point tuple, each entry read as the exact dyadic
/// rational it stores (symmetrized). Empty when M is singular.
std::optional<double> exact_log_ratio(const BLDatum& d, const GaussianTuple& g);

enum class TraceStatus { Converged, Drifting, Diverging };
const char* trace_status_name(TraceStatus s);

struct RatioTrace {
  std::uint64_t seed = 0;
  std::vector<double> log_ratio;  // one entry per accepted step, starting point first
  GaussianTuple final;
  /// log_ratio at `final` recomputed in exact arithmetic; empty for diverging runs.
  std::optional<double> final_exact;
  TraceStatus status = TraceStatus::Converged;
};

struct AscentOptions {
  std::size_t restarts = 8;
  std::size_t iterations = 2000;
  std::uint64_t seed = 1;
  double ceiling = 50;
  std::size_t sustain = 100;
  double epsilon = 1e-12;
  /// Eigenvalue spread of the final tuple above which a run counts as drifting.
  double degeneracy = 1e8;
};

struct AscentReport {
  std::vector<RatioTrace> traces;
  TraceStatus status = TraceStatus::Converged;
  double best_log_ratio = 0;
};

AscentReport ascent(const BLDatum& d, const AscentOptions& opts = {});

/// The scaling family attached to a witness: for R_blowup, eigenvalue
/// e^(-2s) on l_j(V_big) and 1 on its orthocomplement; for r_blowup,
/// eigenvalue 1 on l_j(V) and e^(2s) on its orthocomplement.
GaussianTuple blowup_family(const BLDatum& d, const ScalingWitness& w, double s);
/// The same family at scale lambda = e^s, in exact arithmetic.
std::vector<RatMatrix> blowup_family_exact(const BLDatum& d, const ScalingWitness& w, const Rat& lambda);

/// The slope of log_ratio in s predicted by the witness exponents.
Rat predicted_slope(const ScalingWitness& w);

struct SlopeMeasurement {
  double measured = 0;
  double predicted = 0;
  bool exact = false;
};

/// Slope between lambda = 2^20 and 2^24, each ratio evaluated exactly.
SlopeMeasurement blowup_slope_exact(const BLDatum& d, const ScalingWitness& w);
/// Finite difference of the floating-point ratio between s0 and s1.
SlopeMeasurement blowup_slope_float(const BLDatum& d, const ScalingWitness& w, double s0, double s1);

struct Box {
  std::vector<double> lo, hi;
};

struct MonteCarloResult {
  double estimate = 0;
  double standard_error = 0;
  std::size_t samples = 0;
};

/// Randomly shifted Halton estimate of the integral of f over [lo, hi].
MonteCarloResult quasi_monte_carlo(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& lo,
                                   const Eigen::VectorXd& hi, std::size_t samples, std::uint64_t seed);

/// Lambda(1_{B_1}, ..., 1_{B_m}) for boxes B_j in H_j. Requires n <= 4 and an
/// injective joint map.
MonteCarloResult monte_carlo_lambda(const BLDatum& d, const std::vector<Box>& boxes, std::size_t samples,
                                    std::uint64_t seed = 7);
/// Lambda of the Gaussian tuple, integrated over a truncating box.
MonteCarloResult monte_carlo_gaussian(const BLDatum& d, const GaussianTuple& g, std::size_t samples,
                                      std::uint64_t seed = 7);

}  // namespace hbl
