#include "philab/scaling.hpp"

#include <cmath>
#include <stdexcept>

#include "philab/measures.hpp"
#include "philab/transforms.hpp"

namespace philab {
namespace {

constexpr double kTail = 1e-12;

double relative_gap(double value, double target) {
  return std::fabs(value - target) / std::max(std::fabs(target), 1e-30);
}

}  // namespace

GaussianMeasure::GaussianMeasure(double mean, double variance, int node_count)
    : mean_(mean), variance_(variance) {
  if (!(variance > 0.0)) {
    throw std::domain_error("Gaussian quadrature needs variance > 0");
  }
  if (node_count < 2) {
    throw std::invalid_argument("Gaussian quadrature needs >= 2 nodes");
  }
  const auto [h_nodes, h_weights] = gauss_hermite(node_count);
  const double stretch = std::sqrt(2.0 * variance);
  const double normalize = 1.0 / std::sqrt(M_PI);
  nodes_.resize(h_nodes.size());
  weights_.resize(h_nodes.size());
  for (std::size_t i = 0; i < h_nodes.size(); ++i) {
    nodes_[i] = mean + stretch * h_nodes[i];
    weights_[i] = normalize * h_weights[i];
  }
  const double mass = expectation([](double) { return 1.0; });
  const double first = expectation([&](double y) { return y - mean; });
  const double second =
      expectation([&](double y) { return (y - mean) * (y - mean); });
  if (std::fabs(mass - 1.0) > 1e-12 || std::fabs(first) > 1e-12 ||
      std::fabs(second - variance) > 1e-12 * std::max(1.0, variance)) {
    throw std::logic_error("Gaussian quadrature failed its moment checks");
  }
}

double gaussian_phi_entropy(const GaussianMeasure& gm, const PhiFunction& phi,
                            const std::function<double(double)>& g) {
  const double mean_g = gm.expectation(g);
  const double mean_phi =
      gm.expectation([&](double y) { return phi.eval(g(y)); });
  return mean_phi - phi.eval(mean_g);
}

ScalingReport poisson_to_gauss(const PhiFunction& phi, double rho,
                               const std::function<double(double)>& g,
                               const std::function<double(double)>& g_prime,
                               const std::vector<int>& n_grid,
                               int node_count) {
  if (!(rho > 0.0)) {
    throw std::domain_error("central-limit rescaling needs rho > 0");
  }
  ScalingReport out;
  out.n_grid = n_grid;
  const GaussianMeasure gm(0.0, rho, node_count);
  out.lhs_target = gaussian_phi_entropy(gm, phi, g);
  out.rhs_target = 0.5 * rho * gm.expectation([&](double y) {
    const double gp = g_prime(y);
    return phi.d2(g(y)) * gp * gp;
  });
  for (int n : n_grid) {
    if (n < 1) throw std::invalid_argument("grid sizes must be >= 1");
    const double rho_n = rho * n;
    const double root = std::sqrt(static_cast<double>(n));
    const DiscreteMeasure law = DiscreteMeasure::poisson(rho_n, kTail);
    auto f = [&](int k) { return g((k - rho_n) / root); };
    const double lhs = law.phi_entropy_fn(phi, f);
    const double rhs = rho_n * law.expectation_fn([&](int k) {
      return transform_A(phi, TransformPoint(f(k), f(k + 1) - f(k)));
    });
    out.lhs_sequence.push_back(lhs);
    out.rhs_sequence.push_back(rhs);
    out.lhs_gap.push_back(relative_gap(lhs, out.lhs_target));
    out.rhs_gap.push_back(relative_gap(rhs, out.rhs_target));
  }
  return out;
}

std::vector<ThetaPoint> theta_curve(const QueueParams& params,
                                    const std::vector<double>& times) {
  if (params.mu <= 0.0 || params.lambda <= 0.0) {
    throw std::domain_error("constant profiles need lambda > 0 and mu > 0");
  }
  const double rho = params.rho();
  std::vector<ThetaPoint> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t < 0.0) throw std::invalid_argument("times must be nonnegative");
    const double p = params.p(t);
    const double q = params.q(t);
    ThetaPoint point;
    point.t = t;
    point.k_band = 0.5 * rho * q * (1.0 + 2.0 * p);
    point.k_refined = 0.5 * rho * q * (1.0 + p);
    point.theta = (1.0 + 2.0 * p) / (1.0 + p);
    out.push_back(point);
  }
  return out;
}

GaussianMeasure ou_marginal(const QueueParams& params, double y, double t,
                            int node_count) {
  if (params.mu <= 0.0 || params.lambda <= 0.0) {
    throw std::domain_error(
        "the limiting diffusion needs lambda > 0 and mu > 0");
  }
  if (!(t > 0.0)) {
    throw std::domain_error(
        "the limiting marginal is a point mass at t = 0; need t > 0");
  }
  const double p = params.p(t);
  return GaussianMeasure(y * p, (1.0 - p * p) * params.rho(), node_count);
}

OuLocalReport ou_local_check(const PhiFunction& phi,
                             const QueueParams& params, double y, double t,
                             const std::function<double(double)>& g,
                             const std::function<double(double)>& g_prime,
                             const std::vector<int>& n_grid,
                             int node_count) {
  if (params.mu <= 0.0 || params.lambda <= 0.0) {
    throw std::domain_error("local rescaling needs lambda > 0 and mu > 0");
  }
  if (!(t > 0.0)) {
    throw std::domain_error("local rescaling needs t > 0");
  }
  const double rho = params.rho();
  const double p = params.p(t);
  const double q = params.q(t);

  OuLocalReport out;
  out.n_grid = n_grid;
  out.t = t;
  out.y = y;
  out.k_band_target = 0.5 * rho * q * (1.0 + 2.0 * p);
  out.k_refined_target = 0.5 * rho * q * (1.0 + p);
  out.theta_target = (1.0 + 2.0 * p) / (1.0 + p);

  const GaussianMeasure limit = ou_marginal(params, y, t, node_count);
  out.quad_c = limit.expectation([&](double u) {
    const double gp = g_prime(u);
    return phi.d2(g(u)) * gp * gp;
  });
  out.entropy_target = gaussian_phi_entropy(limit, phi, g);
  if (!(out.quad_c > 0.0)) {
    throw std::domain_error(
        "the limiting quadratic form vanishes; pick a non-constant g");
  }

  for (int n : n_grid) {
    if (n < 1) throw std::invalid_argument("grid sizes must be >= 1");
    const QueueParams scaled{params.lambda * n, params.mu};
    const double rho_n = rho * n;
    const double root = std::sqrt(static_cast<double>(n));
    const long long z = static_cast<long long>(std::floor(rho_n + root * y));
    if (z < 1) {
      throw std::domain_error(
          "rescaled start state must be >= 1; increase N or y");
    }
    const int zn = static_cast<int>(z);
    const DiscreteMeasure law = mehler_law(scaled, t, zn, kTail);
    const DiscreteMeasure down = mehler_law(scaled, t, zn - 1, kTail);

    auto f = [&](int k) { return g((k - rho_n) / root); };
    auto a_fwd = [&](int k) {
      return transform_A(phi, TransformPoint(f(k), f(k + 1) - f(k)));
    };
    auto a_tau = [&](int k) {
      return transform_A(phi, TransformPoint(f(k + 1), f(k) - f(k + 1)));
    };
    auto b_fwd = [&](int k) {
      return transform_B(phi, TransformPoint(f(k), f(k + 1) - f(k)));
    };
    auto c_fwd = [&](int k) { return transform_C(phi, f(k), f(k + 1) - f(k)); };

    out.entropy.push_back(law.phi_entropy_fn(phi, f));

    const double head = rho_n * q * law.expectation_fn(a_fwd);
    const double literal =
        head + zn * p * q * down.expectation_fn([&](int k) {
          return q * a_fwd(k) + p * a_tau(k);
        });
    const double weak = head + zn * p * q * down.expectation_fn(b_fwd);

    const double c1 = (1.0 - p * p * p) / 3.0;
    const double c2 = q * q * (2.0 + p) / 6.0;
    const double refined =
        rho_n * law.expectation_fn([&](int k) {
          return c1 * a_fwd(k) + c2 * (a_tau(k) + 0.5 * c_fwd(k));
        }) +
        0.5 * zn * p * down.expectation_fn([&](int k) {
          return (1.0 - p * p) * a_tau(k) + 0.5 * q * q * c_fwd(k);
        });

    out.k_band_literal.push_back(literal / out.quad_c);
    out.k_band.push_back(weak / out.quad_c);
    out.k_refined.push_back(refined / out.quad_c);
    out.theta_ratio.push_back(weak / refined);
  }
  return out;
}

}  // namespace philab
