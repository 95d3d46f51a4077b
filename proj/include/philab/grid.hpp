#pragma once

#include <string>
#include <vector>

#include "philab/numerics.hpp"
#include "philab/phi.hpp"

namespace philab {

/// Real-valued function on an integer window [lo, hi].  Evaluation outside
/// the window throws, so truncation bugs surface instead of reading zeros.
class GridFunction {
 public:
  GridFunction(int lo, std::vector<double> values);

  static GridFunction constant(int lo, int hi, double value);
  template <typename Fn>
  static GridFunction from_callable(int lo, int hi, Fn&& fn) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int n = lo; n <= hi; ++n) values.push_back(fn(n));
    return GridFunction(lo, std::move(values));
  }

  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }
  bool contains(int n) const { return n >= lo() && n <= hi(); }

  double operator()(int n) const;
  void set(int n, double value);
  const std::vector<double>& values() const { return values_; }

  double min_value() const;
  double max_value() const;

  /// Throws if any value leaves the interval where phi is defined.
  void validate_codomain(const PhiFunction& phi) const;

 private:
  int lo_;
  std::vector<double> values_;
};

/// Largest |Phi| over the window of f: the roundoff floor of entropy-type
/// quantities, which are assembled from Phi evaluations of this size however
/// small the entropy itself ends up.
double phi_sup_magnitude(const PhiFunction& phi, const GridFunction& f);

/// Families of test functions used by the randomized identity and
/// inequality sweeps.  Values always land inside [value_lo, value_hi].
enum class SamplerFamily {
  kRandomBounded,      ///< iid uniform values
  kLinear,             ///< linear interpolation between endpoint values a, b
  kExpTilt,            ///< normalized exponential profile exp(theta * n)
  kIndicator,          ///< two-level profile on a random subset
  kPerturbedConstant,  ///< constant c plus uniform noise of amplitude eps
};

struct SamplerSpec {
  SamplerFamily family = SamplerFamily::kRandomBounded;
  double a = 0.0;  ///< family parameter (endpoint / theta / level c)
  double b = 0.0;  ///< family parameter (endpoint / amplitude eps)

  static SamplerSpec random_bounded() { return {SamplerFamily::kRandomBounded}; }
  static SamplerSpec linear(double a, double b) {
    return {SamplerFamily::kLinear, a, b};
  }
  static SamplerSpec exp_tilt(double theta) {
    return {SamplerFamily::kExpTilt, theta};
  }
  static SamplerSpec indicator() { return {SamplerFamily::kIndicator}; }
  static SamplerSpec perturbed_constant(double c, double eps) {
    return {SamplerFamily::kPerturbedConstant, c, eps};
  }

  std::string label() const;
};

/// Draws GridFunctions from a family, mapped into a fixed value range.
class FunctionSampler {
 public:
  FunctionSampler(SamplerSpec spec, double value_lo, double value_hi);

  GridFunction draw(int window_lo, int window_hi, RngStream& rng) const;

  const SamplerSpec& spec() const { return spec_; }
  double value_lo() const { return value_lo_; }
  double value_hi() const { return value_hi_; }

  /// Battery cycled through by the randomized sweeps: random, monotone,
  /// exponential, two-level, and near-constant profiles inside phi's box.
  static std::vector<SamplerSpec> default_battery(const PhiFunction& phi);

 private:
  SamplerSpec spec_;
  double value_lo_;
  double value_hi_;
};

}  // namespace philab
