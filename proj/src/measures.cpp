#include "philab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace philab {

namespace {

double log_poisson_pmf(double rho, int k) {
  return -rho + static_cast<double>(k) * std::log(rho) -
         std::lgamma(static_cast<double>(k) + 1.0);
}

double log_binomial_pmf(int n, double p, int k) {
  if (p == 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p == 1.0) return k == n ? 0.0 : kNegInf;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
         std::lgamma(nd - kd + 1.0) + kd * std::log(p) +
         (nd - kd) * std::log1p(-p);
}

std::string fmt_double(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return std::string(buf);
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(MeasureKind kind, int lo,
                                 std::vector<double> weights,
                                 double tail_bound, std::string name)
    : kind_(kind),
      lo_(lo),
      weights_(std::move(weights)),
      tail_bound_(tail_bound),
      name_(std::move(name)) {
  if (weights_.empty()) {
    throw std::invalid_argument("DiscreteMeasure needs a nonempty support");
  }
}

DiscreteMeasure DiscreteMeasure::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("Bernoulli parameter must lie in [0,1]");
  }
  return DiscreteMeasure(MeasureKind::kBernoulli, 0, {1.0 - p, p}, 0.0,
                         "Bernoulli(" + fmt_double(p) + ")");
}

DiscreteMeasure DiscreteMeasure::binomial(int n, double p) {
  if (n < 0) throw std::invalid_argument("Binomial needs n >= 0");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("Binomial parameter must lie in [0,1]");
  }
  std::vector<double> weights(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const double lw = log_binomial_pmf(n, p, k);
    weights[static_cast<std::size_t>(k)] =
        lw == kNegInf ? 0.0 : std::exp(lw);
  }
  return DiscreteMeasure(MeasureKind::kBinomial, 0, std::move(weights), 0.0,
                         "Binomial(" + std::to_string(n) + "," +
                             fmt_double(p) + ")");
}

DiscreteMeasure DiscreteMeasure::poisson(double rho, double tail_bound) {
  if (!(rho > 0.0)) throw std::invalid_argument("Poisson needs rho > 0");
  if (!(tail_bound > 0.0)) {
    throw std::invalid_argument("Poisson needs a positive tail bound");
  }
  // Upper cut: beyond K > rho the atom ratio is rho/(k+1) < rho/(K+1), so the
  // discarded upper tail is dominated by a geometric series.
  const double half_tail = 0.5 * tail_bound;
  int hi = static_cast<int>(std::ceil(rho)) + 1;
  double tail_hi = 0.0;
  for (;; ++hi) {
    const double ratio = rho / (static_cast<double>(hi) + 2.0);
    if (ratio >= 1.0) continue;
    const double bound = std::exp(log_poisson_pmf(rho, hi + 1)) / (1.0 - ratio);
    if (bound < half_tail) {
      tail_hi = bound;
      break;
    }
  }
  // Lower cut: below L < rho the ratio going down is k/rho, geometric again.
  int lo = 0;
  double tail_lo = 0.0;
  if (rho > 4.0) {
    int cand = static_cast<int>(std::floor(rho));
    while (cand > 1) {
      const double ratio = static_cast<double>(cand - 1) / rho;
      const double bound =
          std::exp(log_poisson_pmf(rho, cand - 1)) / (1.0 - ratio);
      if (bound < half_tail) {
        lo = cand;
        tail_lo = bound;
        break;
      }
      cand = cand > 16 ? cand - cand / 8 : cand - 1;
    }
  }
  std::vector<double> weights(static_cast<std::size_t>(hi - lo) + 1);
  for (int k = lo; k <= hi; ++k) {
    weights[static_cast<std::size_t>(k - lo)] =
        std::exp(log_poisson_pmf(rho, k));
  }
  return DiscreteMeasure(MeasureKind::kPoisson, lo, std::move(weights),
                         tail_lo + tail_hi,
                         "Poisson(" + fmt_double(rho) + ")");
}

DiscreteMeasure DiscreteMeasure::geometric(double r, double tail_bound) {
  if (!(r > 0.0 && r < 1.0)) {
    throw std::invalid_argument("Geometric needs ratio in (0,1)");
  }
  // P(X > K) = r^{K+1}.
  const int hi = std::max(
      1, static_cast<int>(std::ceil(std::log(tail_bound) / std::log(r))));
  std::vector<double> weights(static_cast<std::size_t>(hi) + 1);
  for (int k = 0; k <= hi; ++k) {
    weights[static_cast<std::size_t>(k)] =
        (1.0 - r) * std::pow(r, static_cast<double>(k));
  }
  return DiscreteMeasure(MeasureKind::kGeometric, 0, std::move(weights),
                         std::pow(r, static_cast<double>(hi) + 1.0),
                         "Geometric(" + fmt_double(r) + ")");
}

DiscreteMeasure DiscreteMeasure::binomial_poisson(int n, double p, double rho,
                                                  double tail_bound) {
  DiscreteMeasure out = binomial(n, p).convolve(poisson(rho, tail_bound));
  out.kind_ = MeasureKind::kBinomialPoisson;
  out.name_ = "Binomial(" + std::to_string(n) + "," + fmt_double(p) +
              ")*Poisson(" + fmt_double(rho) + ")";
  return out;
}

DiscreteMeasure DiscreteMeasure::bernoulli_product(
    const std::vector<double>& ps) {
  if (ps.empty()) {
    throw std::invalid_argument("bernoulli_product needs at least one factor");
  }
  std::vector<double> weights{1.0};
  for (const double p : ps) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("Bernoulli parameter must lie in [0,1]");
    }
    std::vector<double> next(weights.size() + 1, 0.0);
    for (std::size_t k = 0; k < weights.size(); ++k) {
      next[k] += weights[k] * (1.0 - p);
      next[k + 1] += weights[k] * p;
    }
    weights = std::move(next);
  }
  return DiscreteMeasure(MeasureKind::kBernoulliProduct, 0, std::move(weights),
                         0.0,
                         "BernoulliSum(d=" + std::to_string(ps.size()) + ")");
}

DiscreteMeasure DiscreteMeasure::from_weights(int lo,
                                              std::vector<double> weights) {
  NeumaierSum total;
  for (const double w : weights) {
    if (!(w >= 0.0)) {
      throw std::invalid_argument("from_weights needs nonnegative weights");
    }
    total.add(w);
  }
  const double z = total.value();
  if (!(z > 0.0)) {
    throw std::invalid_argument("from_weights needs positive total mass");
  }
  for (double& w : weights) w /= z;
  return DiscreteMeasure(MeasureKind::kGeneric, lo, std::move(weights), 0.0,
                         "Generic");
}

double DiscreteMeasure::mass(int k) const {
  if (k < lo() || k > hi()) return 0.0;
  return weights_[static_cast<std::size_t>(k - lo_)];
}

double DiscreteMeasure::total_mass() const {
  NeumaierSum sum;
  for (const double w : weights_) sum.add(w);
  return sum.value();
}

double DiscreteMeasure::mean() const {
  NeumaierSum sum;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    sum.add(weights_[i] * static_cast<double>(lo_ + static_cast<int>(i)));
  }
  return sum.value() / total_mass();
}

double DiscreteMeasure::variance() const {
  const double m = mean();
  NeumaierSum sum;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double d = static_cast<double>(lo_ + static_cast<int>(i)) - m;
    sum.add(weights_[i] * d * d);
  }
  return sum.value() / total_mass();
}

DiscreteMeasure DiscreteMeasure::convolve(const DiscreteMeasure& other) const {
  const int lo = lo_ + other.lo_;
  std::vector<double> weights(weights_.size() + other.weights_.size() - 1,
                              0.0);
  // Truncated atoms are all within ~17 decades of the peak, so the products
  // cannot underflow; accumulate each target atom with compensation.
  std::vector<NeumaierSum> acc(weights.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double wi = weights_[i];
    if (wi == 0.0) continue;
    for (std::size_t j = 0; j < other.weights_.size(); ++j) {
      acc[i + j].add(wi * other.weights_[j]);
    }
  }
  for (std::size_t m = 0; m < weights.size(); ++m) weights[m] = acc[m].value();
  return DiscreteMeasure(MeasureKind::kGeneric, lo, std::move(weights),
                         tail_bound_ + other.tail_bound_,
                         name_ + "*" + other.name_);
}

double DiscreteMeasure::expectation(const GridFunction& f) const {
  if (lo() < f.lo() || hi() > f.hi()) {
    throw std::out_of_range("measure support [" + std::to_string(lo()) + "," +
                            std::to_string(hi()) +
                            "] leaves the function window [" +
                            std::to_string(f.lo()) + "," +
                            std::to_string(f.hi()) + "]");
  }
  return expectation_fn([&](int k) { return f(k); });
}

double DiscreteMeasure::phi_entropy(const PhiFunction& phi,
                                    const GridFunction& f) const {
  if (lo() < f.lo() || hi() > f.hi()) {
    throw std::out_of_range("measure support leaves the function window");
  }
  return phi_entropy_fn(phi, [&](int k) { return f(k); });
}

double tv_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  const int lo = std::min(a.lo(), b.lo());
  const int hi = std::max(a.hi(), b.hi());
  NeumaierSum gap;
  for (int k = lo; k <= hi; ++k) {
    gap.add(std::fabs(a.mass(k) - b.mass(k)));
  }
  return 0.5 * gap.value() + 0.5 * (a.tail_bound() + b.tail_bound());
}

std::string_view to_tag(MeasureIdentityId id) {
  switch (id) {
    case MeasureIdentityId::kIppBin: return "IPP_BIN";
    case MeasureIdentityId::kIppBinBw: return "IPP_BIN_BW";
    case MeasureIdentityId::kIppPoi: return "IPP_POI";
    case MeasureIdentityId::kIppBinpoi: return "IPP_BINPOI";
  }
  return "UNKNOWN";
}

VerificationReport check_measure_identity(MeasureIdentityId id,
                                          const SampleConfig& config) {
  VerificationReport report;
  report.tag = std::string(to_tag(id));
  report.seed = config.seed;
  report.tolerance = 1e-10;
  RngStream rng(config.seed, 3);
  constexpr double kTail = 1e-16;

  for (std::size_t c = 0; c < config.count; ++c) {
    const int n = 1 + static_cast<int>(rng.below(20));
    const double p = rng.uniform(0.05, 0.95);
    const double rho = rng.uniform(0.2, 5.0);

    // Random bounded test function on a window covering every pairing below.
    const int f_hi = n + 64;
    std::vector<double> fv(static_cast<std::size_t>(f_hi) + 1);
    for (double& v : fv) v = rng.uniform(-1.0, 1.0);
    const GridFunction f(0, std::move(fv));
    const auto shifted = [&](int k) { return f(k + 1); };

    const std::string where = "case=" + std::to_string(c) +
                              " n=" + std::to_string(n) +
                              " p=" + fmt_double(p) +
                              " rho=" + fmt_double(rho);
    switch (id) {
      case MeasureIdentityId::kIppBin: {
        const DiscreteMeasure bin = DiscreteMeasure::binomial(n, p);
        const DiscreteMeasure binm = DiscreteMeasure::binomial(n - 1, p);
        const double lhs =
            bin.expectation_fn([&](int k) { return k * f(k); });
        const double rhs = n * p * binm.expectation_fn(shifted);
        report.record_deviation(lhs, rhs, where);
        break;
      }
      case MeasureIdentityId::kIppBinBw: {
        const DiscreteMeasure bin = DiscreteMeasure::binomial(n, p);
        const DiscreteMeasure binm = DiscreteMeasure::binomial(n - 1, p);
        const double lhs =
            bin.expectation_fn([&](int k) { return (n - k) * f(k); });
        const double rhs = n * (1.0 - p) * binm.expectation(f);
        report.record_deviation(lhs, rhs, where);
        break;
      }
      case MeasureIdentityId::kIppPoi: {
        const DiscreteMeasure poi = DiscreteMeasure::poisson(rho, kTail);
        const double lhs =
            poi.expectation_fn([&](int k) { return k * f(k); });
        const double rhs = rho * poi.expectation_fn(shifted);
        report.record_deviation(lhs, rhs, where);
        break;
      }
      case MeasureIdentityId::kIppBinpoi: {
        const DiscreteMeasure mix =
            DiscreteMeasure::binomial_poisson(n, p, rho, kTail);
        const DiscreteMeasure mixm =
            DiscreteMeasure::binomial_poisson(n - 1, p, rho, kTail);
        const double lhs =
            mix.expectation_fn([&](int k) { return k * f(k); });
        const double rhs = n * p * mixm.expectation_fn(shifted) +
                           rho * mix.expectation_fn(shifted);
        report.record_deviation(lhs, rhs, where);
        break;
      }
    }
  }
  report.finish_identity();
  report.description =
      "integration by parts over random parameters and functions";
  return report;
}

}  // namespace philab
