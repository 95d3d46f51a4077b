#include "philab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace philab {

GridFunction::GridFunction(int lo, std::vector<double> values)
    : lo_(lo), values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("GridFunction needs a nonempty window");
  }
}

GridFunction GridFunction::constant(int lo, int hi, double value) {
  if (hi < lo) throw std::invalid_argument("GridFunction window is empty");
  return GridFunction(lo,
                      std::vector<double>(static_cast<std::size_t>(hi - lo + 1),
                                          value));
}

double GridFunction::operator()(int n) const {
  if (!contains(n)) {
    throw std::out_of_range("GridFunction evaluated at " + std::to_string(n) +
                            " outside window [" + std::to_string(lo()) + ", " +
                            std::to_string(hi()) + "]");
  }
  return values_[static_cast<std::size_t>(n - lo_)];
}

void GridFunction::set(int n, double value) {
  if (!contains(n)) {
    throw std::out_of_range("GridFunction::set at " + std::to_string(n) +
                            " outside window");
  }
  values_[static_cast<std::size_t>(n - lo_)] = value;
}

double GridFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double GridFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

void GridFunction::validate_codomain(const PhiFunction& phi) const {
  for (int n = lo(); n <= hi(); ++n) {
    const double value = (*this)(n);
    if (!phi.contains(value)) {
      throw std::domain_error("GridFunction value " + std::to_string(value) +
                              " at n=" + std::to_string(n) +
                              " leaves the interval of " + phi.name());
    }
  }
}

double phi_sup_magnitude(const PhiFunction& phi, const GridFunction& f) {
  double mag = 0.0;
  for (int n = f.lo(); n <= f.hi(); ++n) {
    mag = std::max(mag, std::fabs(phi.eval(f(n))));
  }
  return mag;
}

std::string SamplerSpec::label() const {
  switch (family) {
    case SamplerFamily::kRandomBounded:
      return "RANDOM_BOUNDED";
    case SamplerFamily::kLinear:
      return "LINEAR(" + std::to_string(a) + "," + std::to_string(b) + ")";
    case SamplerFamily::kExpTilt:
      return "EXP_TILT(" + std::to_string(a) + ")";
    case SamplerFamily::kIndicator:
      return "INDICATOR";
    case SamplerFamily::kPerturbedConstant:
      return "PERTURBED_CONSTANT(" + std::to_string(a) + "," +
             std::to_string(b) + ")";
  }
  return "UNKNOWN";
}

FunctionSampler::FunctionSampler(SamplerSpec spec, double value_lo,
                                 double value_hi)
    : spec_(spec), value_lo_(value_lo), value_hi_(value_hi) {
  if (!(value_lo < value_hi)) {
    throw std::invalid_argument("FunctionSampler needs value_lo < value_hi");
  }
}

GridFunction FunctionSampler::draw(int window_lo, int window_hi,
                                   RngStream& rng) const {
  if (window_hi < window_lo) {
    throw std::invalid_argument("FunctionSampler window is empty");
  }
  const std::size_t size = static_cast<std::size_t>(window_hi - window_lo + 1);
  std::vector<double> values(size);
  const double span = value_hi_ - value_lo_;
  switch (spec_.family) {
    case SamplerFamily::kRandomBounded: {
      for (double& v : values) v = rng.uniform(value_lo_, value_hi_);
      break;
    }
    case SamplerFamily::kLinear: {
      // Endpoint values a at window_lo, b at window_hi; clamp into range.
      const double a = std::clamp(spec_.a, value_lo_, value_hi_);
      const double b = std::clamp(spec_.b, value_lo_, value_hi_);
      const double denom =
          size > 1 ? static_cast<double>(window_hi - window_lo) : 1.0;
      for (std::size_t i = 0; i < size; ++i) {
        const double t = static_cast<double>(i) / denom;
        values[i] = a + (b - a) * t;
      }
      break;
    }
    case SamplerFamily::kExpTilt: {
      // exp(theta * n), peak normalized to 1, then mapped into the range
      // [lo + 0.05 span, hi - 0.05 span] to stay clear of the boundary.
      const double theta = spec_.a;
      const int peak = theta >= 0.0 ? window_hi : window_lo;
      const double lo = value_lo_ + 0.05 * span;
      const double hi = value_hi_ - 0.05 * span;
      for (std::size_t i = 0; i < size; ++i) {
        const int n = window_lo + static_cast<int>(i);
        const double profile = std::exp(theta * static_cast<double>(n - peak));
        values[i] = lo + (hi - lo) * profile;
      }
      break;
    }
    case SamplerFamily::kIndicator: {
      // Two-level profile on a random subset; resample until non-constant
      // (when the window allows it) so the draw carries information.
      const double low = value_lo_ + 0.05 * span;
      const double high = value_hi_ - 0.05 * span;
      for (int attempt = 0; attempt < 64; ++attempt) {
        bool any_low = false;
        bool any_high = false;
        for (double& v : values) {
          const bool in_set = rng.bernoulli(0.5);
          v = in_set ? high : low;
          (in_set ? any_high : any_low) = true;
        }
        if (size == 1 || (any_low && any_high)) break;
      }
      break;
    }
    case SamplerFamily::kPerturbedConstant: {
      const double c = std::clamp(spec_.a, value_lo_, value_hi_);
      const double eps = spec_.b;
      for (double& v : values) {
        v = std::clamp(c + eps * rng.uniform(-1.0, 1.0), value_lo_, value_hi_);
      }
      break;
    }
  }
  return GridFunction(window_lo, std::move(values));
}

std::vector<SamplerSpec> FunctionSampler::default_battery(
    const PhiFunction& phi) {
  const double lo = phi.box_lo();
  const double hi = phi.box_hi();
  const double span = hi - lo;
  const double mid = lo + 0.5 * span;
  return {
      SamplerSpec::random_bounded(),
      SamplerSpec::linear(lo + 0.1 * span, hi - 0.1 * span),
      SamplerSpec::linear(hi - 0.1 * span, lo + 0.1 * span),
      SamplerSpec::exp_tilt(0.3),
      SamplerSpec::exp_tilt(-0.5),
      SamplerSpec::indicator(),
      SamplerSpec::perturbed_constant(mid, 0.05 * span),
      SamplerSpec::perturbed_constant(mid, 1e-4 * span),
  };
}

}  // namespace philab
