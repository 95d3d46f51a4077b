#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "philab/grid.hpp"
#include "philab/numerics.hpp"
#include "philab/phi.hpp"
#include "philab/report.hpp"

namespace philab {

enum class MeasureKind {
  kBernoulli,
  kBinomial,
  kPoisson,
  kBinomialPoisson,
  kBernoulliProduct,
  kGeometric,
  kGeneric,
};

/// Probability measure on a finite integer window [lo, hi].  Unbounded laws
/// are truncated with an explicit bound on the discarded mass, carried along
/// so every total-variation or expectation statement stays honest.
class DiscreteMeasure {
 public:
  static DiscreteMeasure bernoulli(double p);
  static DiscreteMeasure binomial(int n, double p);
  static DiscreteMeasure poisson(double rho, double tail_bound = 1e-13);
  static DiscreteMeasure geometric(double r, double tail_bound = 1e-13);
  /// Law of a Binomial(n, p) plus an independent Poisson(rho).
  static DiscreteMeasure binomial_poisson(int n, double p, double rho,
                                          double tail_bound = 1e-13);
  /// Law of a sum of independent Bernoulli(p_i).
  static DiscreteMeasure bernoulli_product(const std::vector<double>& ps);
  /// Normalizes the given nonnegative weights (e.g. empirical counts).
  static DiscreteMeasure from_weights(int lo, std::vector<double> weights);

  MeasureKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(weights_.size()) - 1; }
  std::size_t support_size() const { return weights_.size(); }

  /// Mass of the atom at k; zero outside the stored window.
  double mass(int k) const;
  /// Sum of stored atom masses (1 minus the truncated tail, up to rounding).
  double total_mass() const;
  /// Upper bound on the probability mass lost to truncation.
  double tail_bound() const { return tail_bound_; }

  double mean() const;
  double variance() const;

  /// Law of the sum of independent draws from *this and other.
  DiscreteMeasure convolve(const DiscreteMeasure& other) const;

  /// <Q, f> over the stored atoms; throws if the support leaves f's window.
  double expectation(const GridFunction& f) const;
  template <typename Fn>
  double expectation_fn(Fn&& fn) const {
    NeumaierSum sum;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      sum.add(weights_[i] * fn(lo_ + static_cast<int>(i)));
    }
    return sum.value();
  }

  /// <Q, Phi(f)> - Phi(<Q, f>); f must map the support into phi's interval.
  double phi_entropy(const PhiFunction& phi, const GridFunction& f) const;
  template <typename Fn>
  double phi_entropy_fn(const PhiFunction& phi, Fn&& fn) const {
    const double mean_f = expectation_fn(fn);
    const double lifted =
        expectation_fn([&](int k) { return phi.eval(fn(k)); });
    return lifted - phi.eval(mean_f);
  }

 private:
  DiscreteMeasure(MeasureKind kind, int lo, std::vector<double> weights,
                  double tail_bound, std::string name);

  MeasureKind kind_;
  int lo_;
  std::vector<double> weights_;
  double tail_bound_;
  std::string name_;
};

/// Upper bound on the total-variation distance: half the l1 gap between the
/// stored atoms plus half of both truncation bounds.
double tv_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Integration-by-parts identities for the binomial, Poisson and
/// binomial-plus-Poisson families, checked on random parameters/functions.
enum class MeasureIdentityId {
  kIppBin,     ///< <B(n,p), h f> = n p <B(n-1,p), f(1+.)>
  kIppBinBw,   ///< <B(n,p), (n-h) f> = n q <B(n-1,p), f>
  kIppPoi,     ///< <P(rho), h f> = rho <P(rho), f(1+.)>
  kIppBinpoi,  ///< mixed rule for B(n,p) * P(rho)
};

std::string_view to_tag(MeasureIdentityId id);

VerificationReport check_measure_identity(MeasureIdentityId id,
                                          const SampleConfig& config);

}  // namespace philab
