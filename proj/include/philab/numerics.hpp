#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace philab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// log(e^a + e^b), safe for -inf arguments.
double log_add(double a, double b);

/// log(sum_i e^{x_i}) with a single max shift; -inf for an empty range.
double log_sum_exp(std::span<const double> xs);

/// Neumaier-compensated accumulator (improved Kahan): exact to ~1 ulp of the
/// condition number for the alternating-sign sums used in expectations.
class NeumaierSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// ---------------------------------------------------------------------------
// Counter-based splittable RNG.
//
// Each (seed, stream) pair yields an independent deterministic sequence; the
// core is the SplitMix64 finalizer applied to an affine counter, so streams
// can be created in parallel without shared state.
// ---------------------------------------------------------------------------
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on [0,1) with 53 random bits.
  double uniform01();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Exponential with the given rate (inverse CDF; rate > 0).
  double exponential(double rate);
  /// True with probability p.
  bool bernoulli(double p);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t counter_;
  std::uint64_t gamma_;
};

// ---------------------------------------------------------------------------
// Gauss-Legendre quadrature.
// ---------------------------------------------------------------------------
struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  int evaluations = 0;
};

/// Fixed-order Gauss-Legendre on [a,b] (order 16 panel).
double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b);

/// Adaptive bisection built on 16-point panels; stops when the panel-vs-split
/// discrepancy is below abs_tol (plus rel_tol * |value|), up to max_depth levels.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol = 1e-12, double rel_tol = 0.0,
                                    int max_depth = 20);

// ---------------------------------------------------------------------------
// Eigenvalues of a real symmetric tridiagonal matrix (ascending order).
// diag has size m, off has size m-1.
// ---------------------------------------------------------------------------
std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& diag,
                                            const std::vector<double>& off);

/// Gauss-Hermite rule for the weight e^{-x^2} on R (Golub-Welsch):
/// sum_i w_i f(x_i) ~= integral f(x) e^{-x^2} dx, sum_i w_i = sqrt(pi).
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
HermiteRule gauss_hermite(int n);

/// Quantile of the standard normal distribution (Acklam initial guess +
/// one Halley step on the erfc-based CDF; ~1e-15 accurate inside (0,1)).
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double x);

/// Kolmogorov distribution tail Q(x) = 2 sum_{k>=1} (-1)^{k-1} e^{-2k^2x^2}.
double kolmogorov_tail(double x);

}  // namespace philab
