#include "philab/phi.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "philab/numerics.hpp"

namespace philab {

struct PhiFunction::Impl {
  PhiFamily family = PhiFamily::Custom;
  std::string name;
  double lo = kNegInf;
  double hi = kPosInf;
  double box_lo = -1.0;
  double box_hi = 1.0;
  double alpha = 0.0;
  std::function<double(double)> f0, f1, f2, f3, f4;
};

PhiFunction::PhiFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

double PhiFunction::interval_lo() const { return impl_->lo; }
double PhiFunction::interval_hi() const { return impl_->hi; }
bool PhiFunction::contains(double u) const { return u > impl_->lo && u < impl_->hi; }
double PhiFunction::eval(double u) const { return impl_->f0(u); }
double PhiFunction::d1(double u) const { return impl_->f1(u); }
double PhiFunction::d2(double u) const { return impl_->f2(u); }
double PhiFunction::d3(double u) const { return impl_->f3(u); }
double PhiFunction::d4(double u) const { return impl_->f4(u); }
PhiFamily PhiFunction::family() const { return impl_->family; }
double PhiFunction::alpha() const { return impl_->alpha; }
const std::string& PhiFunction::name() const { return impl_->name; }
double PhiFunction::box_lo() const { return impl_->box_lo; }
double PhiFunction::box_hi() const { return impl_->box_hi; }

namespace {

std::shared_ptr<PhiFunction::Impl> base(PhiFamily fam, std::string name, double lo, double hi,
                                        double box_lo, double box_hi) {
  auto impl = std::make_shared<PhiFunction::Impl>();
  impl->family = fam;
  impl->name = std::move(name);
  impl->lo = lo;
  impl->hi = hi;
  impl->box_lo = box_lo;
  impl->box_hi = box_hi;
  return impl;
}

// Derivatives of the power mixture Phi(u) = integral_1^2 u^p dp = u(u-1)/log u,
// computed by differentiating under the integral: Phi^(k)(u) =
// integral_1^2 p(p-1)...(p-k+1) u^{p-k} dp. The integrand is analytic in p, so
// a fixed 16-point panel already gives ~machine precision; two panels are used
// for headroom.
double power_mixture_dk(double u, int k) {
  auto integrand = [&](double p) {
    double coeff = 1.0;
    for (int j = 0; j < k; ++j) coeff *= (p - j);
    return coeff * std::pow(u, p - k);
  };
  return gauss_legendre_panel(integrand, 1.0, 1.5) + gauss_legendre_panel(integrand, 1.5, 2.0);
}

// Gaussian isoperimetric profile I(x) = phi(Phi^{-1}(x)) and helpers.
double isop_t(double x) { return normal_quantile(x); }
double isop_I(double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::acos(-1.0)); }

}  // namespace

PhiFunction PhiFunction::p1() {
  auto impl = base(PhiFamily::P1, "P1", 0.0, kPosInf, 0.05, 20.0);
  impl->f0 = [](double u) { return u * std::log(u); };
  impl->f1 = [](double u) { return std::log(u) + 1.0; };
  impl->f2 = [](double u) { return 1.0 / u; };
  impl->f3 = [](double u) { return -1.0 / (u * u); };
  impl->f4 = [](double u) { return 2.0 / (u * u * u); };
  return PhiFunction(impl);
}

PhiFunction PhiFunction::p2() {
  auto impl = base(PhiFamily::P2, "P2", kNegInf, kPosInf, -10.0, 10.0);
  impl->f0 = [](double u) { return u * u; };
  impl->f1 = [](double u) { return 2.0 * u; };
  impl->f2 = [](double) { return 2.0; };
  impl->f3 = [](double) { return 0.0; };
  impl->f4 = [](double) { return 0.0; };
  return PhiFunction(impl);
}

PhiFunction PhiFunction::p3(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw std::invalid_argument("P3 exponent must lie in (1,2)");
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "P3:%g", alpha);
  auto impl = base(PhiFamily::P3, buf, 0.0, kPosInf, 0.05, 20.0);
  impl->alpha = alpha;
  double a = alpha;
  impl->f0 = [a](double u) { return std::pow(u, a); };
  impl->f1 = [a](double u) { return a * std::pow(u, a - 1.0); };
  impl->f2 = [a](double u) { return a * (a - 1.0) * std::pow(u, a - 2.0); };
  impl->f3 = [a](double u) { return a * (a - 1.0) * (a - 2.0) * std::pow(u, a - 3.0); };
  impl->f4 = [a](double u) { return a * (a - 1.0) * (a - 2.0) * (a - 3.0) * std::pow(u, a - 4.0); };
  return PhiFunction(impl);
}

PhiFunction PhiFunction::neg_log() {
  auto impl = base(PhiFamily::NegLog, "NEG_LOG", 0.0, kPosInf, 0.05, 20.0);
  impl->f0 = [](double u) { return -std::log(u); };
  impl->f1 = [](double u) { return -1.0 / u; };
  impl->f2 = [](double u) { return 1.0 / (u * u); };
  impl->f3 = [](double u) { return -2.0 / (u * u * u); };
  impl->f4 = [](double u) { return 6.0 / (u * u * u * u); };
  return PhiFunction(impl);
}

PhiFunction PhiFunction::neg_xlog_negx() {
  auto impl = base(PhiFamily::NegXLogNegX, "NEG_XLOGNEGX", kNegInf, 0.0, -20.0, -0.05);
  impl->f0 = [](double u) { return -u * std::log(-u); };
  impl->f1 = [](double u) { return -std::log(-u) - 1.0; };
  impl->f2 = [](double u) { return -1.0 / u; };
  impl->f3 = [](double u) { return 1.0 / (u * u); };
  impl->f4 = [](double u) { return -2.0 / (u * u * u); };
  return PhiFunction(impl);
}

PhiFunction PhiFunction::power_mixture() {
  auto impl = base(PhiFamily::PowerMixture, "POWER_MIXTURE", 0.0, kPosInf, 0.05, 20.0);
  impl->f0 = [](double u) { return power_mixture_dk(u, 0); };
  impl->f1 = [](double u) { return power_mixture_dk(u, 1); };
  impl->f2 = [](double u) { return power_mixture_dk(u, 2); };
  impl->f3 = [](double u) { return power_mixture_dk(u, 3); };
  impl->f4 = [](double u) { return power_mixture_dk(u, 4); };
  return PhiFunction(impl);
}

PhiFunction PhiFunction::neg_gauss_isop() {
  auto impl = base(PhiFamily::NegGaussIsop, "NEG_GAUSS_ISOP", 0.0, 1.0, 1e-4, 1.0 - 1e-4);
  // Phi = -I with I' (x) = -t(x) and I'' = -1/I, where t(x) is the standard
  // normal quantile. All higher derivatives close in terms of t and I.
  impl->f0 = [](double u) { return -isop_I(isop_t(u)); };
  impl->f1 = [](double u) { return isop_t(u); };
  impl->f2 = [](double u) { return 1.0 / isop_I(isop_t(u)); };
  impl->f3 = [](double u) {
    double t = isop_t(u);
    double I = isop_I(t);
    return t / (I * I);
  };
  impl->f4 = [](double u) {
    double t = isop_t(u);
    double I = isop_I(t);
    return (1.0 + 2.0 * t * t) / (I * I * I);
  };
  return PhiFunction(impl);
}

PhiFunction PhiFunction::custom(std::string name, double lo, double hi,
                                std::function<double(double)> f0, std::function<double(double)> f1,
                                std::function<double(double)> f2, std::function<double(double)> f3,
                                std::function<double(double)> f4, double box_lo, double box_hi) {
  auto impl = base(PhiFamily::Custom, std::move(name), lo, hi, box_lo, box_hi);
  impl->f0 = std::move(f0);
  impl->f1 = std::move(f1);
  impl->f2 = std::move(f2);
  impl->f3 = std::move(f3);
  impl->f4 = std::move(f4);
  return PhiFunction(impl);
}

PhiFunction PhiFunction::from_name(const std::string& name) {
  if (name == "P1") return p1();
  if (name == "P2") return p2();
  if (name.rfind("P3", 0) == 0) {
    double a = 1.5;
    auto pos = name.find(':');
    if (pos != std::string::npos) a = std::stod(name.substr(pos + 1));
    return p3(a);
  }
  if (name == "NEG_LOG") return neg_log();
  if (name == "NEG_XLOGNEGX") return neg_xlog_negx();
  if (name == "POWER_MIXTURE") return power_mixture();
  if (name == "NEG_GAUSS_ISOP") return neg_gauss_isop();
  throw std::invalid_argument("unknown Phi name: " + name);
}

}  // namespace philab
