#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "philab/measures.hpp"
#include "philab/queue.hpp"

namespace philab {

/// One continuous-time sample path: piecewise-constant, states one longer
/// than jump_times, consecutive states differing by exactly +-1.
struct Trajectory {
  std::vector<double> jump_times;
  std::vector<int> states;
  std::uint64_t seed = 0;

  /// State at time t (right-continuous).
  int state_at(double t) const;
};

/// Exact simulation through the embedded jump chain: at state n the holding
/// time is exponential with rate lambda + n mu, then a birth with
/// probability lambda / (lambda + n mu), else a death.  A zero total rate
/// (lambda = 0 at state 0) absorbs the path.  Deterministic given (seed,
/// stream); path i of a multi-path experiment uses stream index i.
Trajectory simulate_path(const QueueParams& params, int n0, double t_max,
                         std::uint64_t seed, std::uint64_t stream = 0);

/// Empirical law of the state at time t across independent seeded paths.
DiscreteMeasure empirical_law(const QueueParams& params, int n0, double t,
                              std::size_t paths, std::uint64_t seed);

/// Scale factor, fluid initial condition x, diffusive offset y, horizon,
/// path count and seed for the accelerated-arrivals experiments (rates
/// N lambda and mu, started from floor(N x + sqrt(N) y)).
struct ScalingConfig {
  int N = 100;
  double x = 1.0;
  double y = 0.0;
  double t_max = 1.0;
  std::size_t paths = 1000;
  std::uint64_t seed = 1;

  int initial_state() const;
};

struct FluidReport {
  ScalingConfig cfg;
  double mean_sup_deviation = 0.0;  ///< E sup_{s<=t_max} |X_s/N - m(s)|
  double max_sup_deviation = 0.0;
  double std_error = 0.0;
};

/// Sup-norm deviation of the rescaled path from the deterministic relaxation
/// m(s) = rho + (x - rho) e^{-mu s}; the sup over each constant segment is
/// attained at a segment endpoint because m is monotone.
FluidReport fluid_experiment(const ScalingConfig& cfg,
                             const QueueParams& params);

struct CltReport {
  ScalingConfig cfg;
  double t = 0.0;
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  double mean_std_error = 0.0;
  double target_mean = 0.0;      ///< y e^{-mu t}
  double target_variance = 0.0;  ///< (lambda + x mu)(1 - e^{-2 mu t})/(2 mu)
};

/// Sample moments of (X_{t_max} - N m(t_max)) / sqrt(N) against the
/// Gaussian limit marginals.
CltReport clt_experiment(const ScalingConfig& cfg, const QueueParams& params);

/// Two-sided Kolmogorov-Smirnov statistic of sorted samples against a
/// continuous CDF.
double ks_statistic(const std::vector<double>& sorted_samples,
                    const std::function<double(double)>& cdf);

/// Asymptotic KS p-value with the standard small-sample correction.
double ks_p_value(double statistic, std::size_t n);

}  // namespace philab
