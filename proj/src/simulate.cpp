#include "philab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace philab {

namespace {

/// Runs body(i) for i in [0, count), chunked over a few threads.  Each call
/// touches only its own index, so results are deterministic regardless of
/// the thread count; callers reduce the per-index slots sequentially.
void parallel_indices(std::size_t count,
                      const std::function<void(std::size_t)>& body) {
  const std::size_t hw = std::thread::hardware_concurrency();
  const std::size_t workers = std::clamp<std::size_t>(hw, 1, 8);
  if (count < 512 || workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
  for (std::thread& th : pool) th.join();
}

}  // namespace

int Trajectory::state_at(double t) const {
  const auto it =
      std::upper_bound(jump_times.begin(), jump_times.end(), t);
  const std::size_t idx =
      static_cast<std::size_t>(it - jump_times.begin());
  return states[idx];
}

Trajectory simulate_path(const QueueParams& params, int n0, double t_max,
                         std::uint64_t seed, std::uint64_t stream) {
  if (n0 < 0) throw std::invalid_argument("simulate_path needs n0 >= 0");
  if (!(t_max >= 0.0)) throw std::invalid_argument("simulate_path needs t_max >= 0");
  RngStream rng(seed, stream);
  Trajectory path;
  path.seed = seed;
  path.states.push_back(n0);
  double t = 0.0;
  int n = n0;
  for (;;) {
    const double rate = params.lambda + static_cast<double>(n) * params.mu;
    if (!(rate > 0.0)) break;  // absorbed (lambda = 0 at the empty state)
    t += rng.exponential(rate);
    if (t > t_max) break;
    const bool birth = rng.bernoulli(params.lambda / rate);
    n += birth ? 1 : -1;
    path.jump_times.push_back(t);
    path.states.push_back(n);
  }
  return path;
}

DiscreteMeasure empirical_law(const QueueParams& params, int n0, double t,
                              std::size_t paths, std::uint64_t seed) {
  if (paths == 0) throw std::invalid_argument("empirical_law needs paths >= 1");
  std::vector<int> sampled(paths);
  parallel_indices(paths, [&](std::size_t i) {
    sampled[i] = simulate_path(params, n0, t, seed, i).state_at(t);
  });
  const int top = *std::max_element(sampled.begin(), sampled.end());
  std::vector<double> counts(static_cast<std::size_t>(top) + 1, 0.0);
  for (const int s : sampled) counts[static_cast<std::size_t>(s)] += 1.0;
  return DiscreteMeasure::from_weights(0, std::move(counts));
}

int ScalingConfig::initial_state() const {
  const double z = std::floor(static_cast<double>(N) * x +
                              std::sqrt(static_cast<double>(N)) * y);
  if (z < 0.0) {
    throw std::invalid_argument("scaling start floor(Nx + sqrt(N) y) < 0");
  }
  return static_cast<int>(z);
}

FluidReport fluid_experiment(const ScalingConfig& cfg,
                             const QueueParams& params) {
  if (!(params.mu > 0.0)) {
    throw std::invalid_argument("fluid_experiment needs mu > 0");
  }
  if (cfg.N < 1 || cfg.paths == 0) {
    throw std::invalid_argument("fluid_experiment needs N >= 1 and paths >= 1");
  }
  const QueueParams scaled(static_cast<double>(cfg.N) * params.lambda,
                           params.mu);
  const double rho = params.rho();
  const int z0 = cfg.initial_state();
  const double n_inv = 1.0 / static_cast<double>(cfg.N);
  const auto fluid = [&](double s) {
    return rho + (cfg.x - rho) * std::exp(-params.mu * s);
  };

  std::vector<double> sup(cfg.paths, 0.0);
  parallel_indices(cfg.paths, [&](std::size_t i) {
    const Trajectory path =
        simulate_path(scaled, z0, cfg.t_max, cfg.seed, i);
    double worst = 0.0;
    for (std::size_t seg = 0; seg < path.states.size(); ++seg) {
      const double level = static_cast<double>(path.states[seg]) * n_inv;
      const double begin = seg == 0 ? 0.0 : path.jump_times[seg - 1];
      const double end =
          seg < path.jump_times.size() ? path.jump_times[seg] : cfg.t_max;
      worst = std::max({worst, std::fabs(level - fluid(begin)),
                        std::fabs(level - fluid(end))});
    }
    sup[i] = worst;
  });

  FluidReport report;
  report.cfg = cfg;
  NeumaierSum mean_acc;
  for (const double s : sup) mean_acc.add(s);
  report.mean_sup_deviation = mean_acc.value() / static_cast<double>(cfg.paths);
  report.max_sup_deviation = *std::max_element(sup.begin(), sup.end());
  NeumaierSum var_acc;
  for (const double s : sup) {
    const double d = s - report.mean_sup_deviation;
    var_acc.add(d * d);
  }
  report.std_error = cfg.paths > 1
                         ? std::sqrt(var_acc.value() /
                                     (static_cast<double>(cfg.paths) *
                                      (static_cast<double>(cfg.paths) - 1.0)))
                         : 0.0;
  return report;
}

CltReport clt_experiment(const ScalingConfig& cfg, const QueueParams& params) {
  if (!(params.mu > 0.0)) {
    throw std::invalid_argument("clt_experiment needs mu > 0");
  }
  if (cfg.N < 1 || cfg.paths == 0) {
    throw std::invalid_argument("clt_experiment needs N >= 1 and paths >= 1");
  }
  const QueueParams scaled(static_cast<double>(cfg.N) * params.lambda,
                           params.mu);
  const double rho = params.rho();
  const int z0 = cfg.initial_state();
  const double t = cfg.t_max;
  const double m_t = rho + (cfg.x - rho) * std::exp(-params.mu * t);
  const double sqrt_n = std::sqrt(static_cast<double>(cfg.N));

  std::vector<double> z(cfg.paths, 0.0);
  parallel_indices(cfg.paths, [&](std::size_t i) {
    const Trajectory path = simulate_path(scaled, z0, t, cfg.seed, i);
    z[i] = (static_cast<double>(path.state_at(t)) -
            static_cast<double>(cfg.N) * m_t) /
           sqrt_n;
  });

  CltReport report;
  report.cfg = cfg;
  report.t = t;
  NeumaierSum mean_acc;
  for (const double v : z) mean_acc.add(v);
  report.sample_mean = mean_acc.value() / static_cast<double>(cfg.paths);
  NeumaierSum var_acc;
  for (const double v : z) {
    const double d = v - report.sample_mean;
    var_acc.add(d * d);
  }
  report.sample_variance =
      cfg.paths > 1
          ? var_acc.value() / (static_cast<double>(cfg.paths) - 1.0)
          : 0.0;
  report.mean_std_error =
      std::sqrt(report.sample_variance / static_cast<double>(cfg.paths));
  const double p_t = std::exp(-params.mu * t);
  report.target_mean = cfg.y * p_t;
  report.target_variance = (params.lambda + cfg.x * params.mu) *
                           (1.0 - p_t * p_t) / (2.0 * params.mu);
  return report;
}

double ks_statistic(const std::vector<double>& sorted_samples,
                    const std::function<double(double)>& cdf) {
  const std::size_t n = sorted_samples.size();
  if (n == 0) throw std::invalid_argument("ks_statistic needs samples");
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double value = cdf(sorted_samples[i]);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    worst = std::max({worst, std::fabs(value - lo), std::fabs(value - hi)});
  }
  return worst;
}

double ks_p_value(double statistic, std::size_t n) {
  const double root = std::sqrt(static_cast<double>(n));
  const double arg = (root + 0.12 + 0.11 / root) * statistic;
  return kolmogorov_tail(arg);
}

}  // namespace philab
