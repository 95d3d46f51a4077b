#pragma once

#include <functional>
#include <memory>
#include <string>

namespace philab {

/// Families of entropy-generating functions Phi. P1 = u log u on (0,inf),
/// P2 = u^2 on R, P3 = u^alpha on (0,inf) with alpha in (1,2). The remaining
/// families exercise the admissibility classifier: -log u (rejected),
/// -u log(-u) on (-inf,0), the power mixture u(u-1)/log u, and the negative
/// Gaussian isoperimetric profile -I on (0,1) with I*I'' = -1.
enum class PhiFamily {
  P1,
  P2,
  P3,
  NegLog,
  NegXLogNegX,
  PowerMixture,
  NegGaussIsop,
  Custom,
};

/// A smooth convex candidate Phi on an open interval with derivatives up to
/// order 4. Instances are immutable and cheap to copy (shared backend).
class PhiFunction {
 public:
  double interval_lo() const;
  double interval_hi() const;
  /// Strict interior membership.
  bool contains(double u) const;

  double eval(double u) const;
  double d1(double u) const;
  double d2(double u) const;
  double d3(double u) const;
  double d4(double u) const;

  PhiFamily family() const;
  /// Exponent for P3; meaningless otherwise.
  double alpha() const;
  const std::string& name() const;

  /// A sensible finite sampling box strictly inside the interval, used by the
  /// identity/comparison/probe samplers (the interval itself may be unbounded).
  double box_lo() const;
  double box_hi() const;

  static PhiFunction p1();
  static PhiFunction p2();
  static PhiFunction p3(double alpha);
  static PhiFunction neg_log();
  static PhiFunction neg_xlog_negx();
  static PhiFunction power_mixture();
  static PhiFunction neg_gauss_isop();
  static PhiFunction custom(std::string name, double lo, double hi,
                            std::function<double(double)> f0, std::function<double(double)> f1,
                            std::function<double(double)> f2, std::function<double(double)> f3,
                            std::function<double(double)> f4, double box_lo, double box_hi);

  /// Parses "P1", "P2", "P3:1.5", "NEG_LOG", "NEG_XLOGNEGX", "POWER_MIXTURE",
  /// "NEG_GAUSS_ISOP". Throws on anything else.
  static PhiFunction from_name(const std::string& name);

  struct Impl;

 private:
  explicit PhiFunction(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace philab
