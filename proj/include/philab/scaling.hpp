#pragma once

#include <functional>
#include <vector>

#include "philab/numerics.hpp"
#include "philab/phi.hpp"
#include "philab/queue.hpp"

namespace philab {

/// Gauss-Hermite quadrature view of a normal law: nodes/weights are
/// transformed so that sums against them integrate against
/// N(mean, variance) with total weight 1.  Moment exactness (mass, mean,
/// variance) is checked on construction to 1e-12.
class GaussianMeasure {
 public:
  GaussianMeasure(double mean, double variance, int node_count = 128);

  double mean() const { return mean_; }
  double variance() const { return variance_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  template <typename Fn>
  double expectation(Fn&& fn) const {
    NeumaierSum sum;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      sum.add(weights_[i] * fn(nodes_[i]));
    }
    return sum.value();
  }

 private:
  double mean_ = 0.0;
  double variance_ = 1.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// <Phi(g)> - Phi(<g>) under the Gaussian quadrature measure.
double gaussian_phi_entropy(const GaussianMeasure& gm, const PhiFunction& phi,
                            const std::function<double(double)>& g);

/// Both sides of the Poisson entropy bound along the central-limit
/// rescaling, with their Gaussian targets and relative gaps.
struct ScalingReport {
  std::vector<int> n_grid;
  std::vector<double> lhs_sequence;
  std::vector<double> rhs_sequence;
  double lhs_target = 0.0;
  double rhs_target = 0.0;
  std::vector<double> lhs_gap;
  std::vector<double> rhs_gap;
};

/// Entropy of g((k - rho N)/sqrt(N)) under Poisson(rho N) against
/// rho N <A(f_N, D f_N)>, for each N; targets are the N(0, rho) entropy of
/// g and (rho/2) <C(g, g')>.
ScalingReport poisson_to_gauss(const PhiFunction& phi, double rho,
                               const std::function<double(double)>& g,
                               const std::function<double(double)>& g_prime,
                               const std::vector<int>& n_grid,
                               int node_count = 128);

/// Time profiles of the two limiting constants and their ratio
/// theta = (1 + 2p) / (1 + p), p = e^{-mu t}.
struct ThetaPoint {
  double t = 0.0;
  double k_band = 0.0;     ///< (rho q / 2)(1 + 2p)
  double k_refined = 0.0;  ///< (rho q / 2)(1 + p)
  double theta = 0.0;
};

std::vector<ThetaPoint> theta_curve(const QueueParams& params,
                                    const std::vector<double>& times);

/// Law of the limiting Ornstein-Uhlenbeck marginal started from y:
/// N(y p, (1 - p^2) rho).
GaussianMeasure ou_marginal(const QueueParams& params, double y, double t,
                            int node_count = 128);

/// Scaled local bounds around the equilibrium fluid point: exact entropy of
/// the rescaled process plus the three recovered constants (literal banded
/// bracket, its B-weakened form, and the refined bracket), each divided by
/// the limiting <C(g, g')> so they are comparable with k_band / k_refined.
struct OuLocalReport {
  std::vector<int> n_grid;
  double t = 0.0;
  double y = 0.0;
  double k_band_target = 0.0;
  double k_refined_target = 0.0;
  double theta_target = 0.0;
  double quad_c = 0.0;       ///< <OU law, C(g, g')>
  double entropy_target = 0.0;
  std::vector<double> entropy;
  std::vector<double> k_band_literal;
  std::vector<double> k_band;
  std::vector<double> k_refined;
  std::vector<double> theta_ratio;  ///< k_band / k_refined per N
};

OuLocalReport ou_local_check(const PhiFunction& phi,
                             const QueueParams& params, double y, double t,
                             const std::function<double(double)>& g,
                             const std::function<double(double)>& g_prime,
                             const std::vector<int>& n_grid,
                             int node_count = 128);

}  // namespace philab
