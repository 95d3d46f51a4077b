#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "philab/numerics.hpp"
#include "philab/phi.hpp"
#include "philab/report.hpp"

namespace philab {

/// A pair (u, v) with both u and u+v inside the working interval. Stored as
/// the two endpoints (u, u+v) so that the reflection tau is an exact swap and
/// tau(tau(pt)) reproduces pt bit-for-bit.
class TransformPoint {
 public:
  TransformPoint(double u, double v) : a_(u), b_(u + v) {}

  static TransformPoint from_endpoints(double a, double b) {
    TransformPoint pt;
    pt.a_ = a;
    pt.b_ = b;
    return pt;
  }

  double u() const { return a_; }
  double v() const { return b_ - a_; }
  /// The second endpoint u+v, exact as stored.
  double w() const { return b_; }

 private:
  TransformPoint() : a_(0), b_(0) {}
  double a_;
  double b_;
};

/// tau(u, v) = (u+v, -v); an involution (exact on the endpoint storage).
TransformPoint apply_tau(const TransformPoint& pt);

/// sigma_p(u, v) = (u, p*v) for p in [0, 1]; stays in the domain because the
/// interval is convex.
TransformPoint apply_sigma(double p, const TransformPoint& pt);

/// Bregman remainder  A(u,v) = Phi(u+v) - Phi(u) - Phi'(u) v.
double transform_A(const PhiFunction& phi, const TransformPoint& pt);
/// Symmetrized increment  B(u,v) = (Phi'(u+v) - Phi'(u)) v.
double transform_B(const PhiFunction& phi, const TransformPoint& pt);
/// Hessian quadratic  C(u,v) = Phi''(u) v^2.  Only u must lie in the
/// interval; v is an arbitrary real (the second argument is a direction).
double transform_C(const PhiFunction& phi, double u, double v);

/// Exact identities between the A/B/C transforms and the tau/sigma maps.
enum class TransformIdentityId {
  kAbcSum,       // A + A(tau) = B
  kBTauInv,      // B(tau) = B
  kSigmaCSq,     // C(sigma_p) = p^2 C
  kIntRepA,      // A(u,v) = int_0^1 (1-p) C(u+pv, v) dp
  kIntRepB,      // B(u,v) = int_0^1 C(u+pv, v) dp
  kSmallVAsymp,  // A(u, eps v) / (C(u,v) eps^2) -> 1/2 and B-ratio -> 1
  kEntTwop,      // two-atom entropy = p A(u,v) - A(u, pv)
  kAdtau,        // (f, D*f)(1+n) = tau(f, Df)(n)
  kP2Collapse,   // 2A = B = C for the quadratic family
};

/// One-sided comparisons between transform expressions.
enum class TransformComparisonId {
  kALeB,        // A <= B for convex Phi
  kALeCP1,      // A <= C for the u log u family
  kCThirdLe2A,  // C(u+v/3, v) <= 2 A(u,v) for convex Phi''
  kCHalfLeB,    // C(u+v/2, v) <= B(u,v) for convex Phi''
  kSigmaALe,    // A(sigma_p) <= p A
  kSigmaBLe,    // B(sigma_p) <= p B
  kPaMinusAp,   // p A - A(sigma_p) <= pq (p A(tau) + q A)
  kApCA,        // A(sigma_p) <= 1/2 p^2 q C + p^3 A
  kAtpCA,       // A(tau(sigma_p)) <= 1/2 p^2 q C + p^3 A(tau)
  kBpCB,        // B(sigma_p) <= p^2 q C + p^3 B
};

std::string_view to_tag(TransformIdentityId id);
std::string_view to_tag(TransformComparisonId id);

/// Draws a point of the transform domain with both endpoints strictly inside
/// the sampling box of `phi` and |v| bounded away from zero.
TransformPoint sample_transform_point(const PhiFunction& phi, RngStream& rng);

/// Verifies the tagged identity on `config.count` sampled domain points.
/// Quadrature-backed tags (the integral representations) evaluate the
/// integral side adaptively and flag non-convergence in the report note.
VerificationReport check_transform_identity(TransformIdentityId id,
                                            const PhiFunction& phi,
                                            const SampleConfig& config);

inline constexpr double kSigmaPRandom =
    std::numeric_limits<double>::quiet_NaN();

/// Verifies the tagged comparison; `p` fixes the sigma parameter, NaN draws
/// it uniformly per case. Pass criterion: min normalized slack >= -1e-9.
VerificationReport check_transform_comparison(TransformComparisonId id,
                                              const PhiFunction& phi,
                                              const SampleConfig& config,
                                              double p = kSigmaPRandom);

enum class Convexity { kAdmissible, kAffine, kRejected };

/// Outcome of the convexity classification of Phi, with the two independent
/// numerical cross-checks (positive semidefiniteness of the Hessian of A on
/// domain samples, and of the two-point entropy map on interval pairs).
struct AdmissibilityReport {
  Convexity verdict = Convexity::kRejected;
  std::size_t probe_count = 0;
  /// Worst value of (Phi'''' Phi'' - 2 Phi'''^2) / Phi''^3, i.e. the second
  /// derivative of -1/Phi''; admissibility needs this >= -1e-9.
  double min_ratio = 0.0;
  bool hessian_consistent = false;
  bool two_point_consistent = false;
  double witness_u = 0.0;
  double witness_v = 0.0;
  std::string detail;
  std::uint64_t seed = 0;
};

/// Classifies Phi as admissible (Phi'' > 0 and -1/Phi'' convex), affine, or
/// rejected with a witness point, sampling `config.count` interior probes.
AdmissibilityReport admissibility(const PhiFunction& phi,
                                  const SampleConfig& config);

}  // namespace philab
