#pragma once

#include <string_view>
#include <vector>

#include "philab/grid.hpp"
#include "philab/measures.hpp"
#include "philab/phi.hpp"
#include "philab/report.hpp"
#include "philab/transforms.hpp"

namespace philab {

/// Birth rate lambda, per-customer service rate mu.  rho = lambda / mu is
/// the invariant Poisson intensity; when mu = 0 the process is a pure
/// Poisson arrival stream and rho-based formulas switch to intensity
/// lambda * t.
struct QueueParams {
  double lambda = 1.0;
  double mu = 1.0;

  QueueParams(double lambda_in, double mu_in);

  double p(double t) const;    ///< e^{-mu t}
  double q(double t) const;    ///< 1 - e^{-mu t}
  double rho() const;          ///< lambda / mu; throws when mu = 0
  /// Poisson intensity of the time-t transition law: rho * q(t), with the
  /// mu = 0 convention lambda * t.
  double mehler_intensity(double t) const;
};

/// Forward difference D f(n) = f(n+1) - f(n) on the window shrunk at the top.
GridFunction gradient_D(const GridFunction& f);
/// Backward difference D* f(n) = f(n-1) - f(n) on the window shrunk below.
GridFunction gradient_Dstar(const GridFunction& f);

/// Generator L f(n) = n mu D*f(n) + lambda D f(n).  At n = 0 the D* term
/// carries coefficient zero, so f(-1) is never read.
GridFunction generator_apply(const QueueParams& params, const GridFunction& f);

/// Same generator in the polarized form -lambda (D D* f)(n) + (n mu -
/// lambda) D* f(n).  At n = 0 both terms formally involve f(-1); the given
/// phantom value is substituted there and must cancel exactly.
GridFunction generator_apply_polarized(const QueueParams& params,
                                       const GridFunction& f, double phantom);

/// Single-server variant L1 f(n) = mu 1_{n>=1} D*f(n) + lambda D f(n).
GridFunction mm1_generator_apply(const QueueParams& params,
                                 const GridFunction& f);

/// Law of the state at time t started from n: Binomial(n, p(t)) plus an
/// independent Poisson(rho q(t)) (intensity lambda t when mu = 0).
DiscreteMeasure mehler_law(const QueueParams& params, double t, int n,
                           double tail_bound = 1e-13);

/// P_t f(n), the expectation of f under mehler_law(t, n).
double semigroup_apply(const QueueParams& params, double t,
                       const GridFunction& f, int n,
                       double tail_bound = 1e-13);

/// P_t f(k) for all k in [0, k_max], sharing one Poisson factor and
/// convolving in one Bernoulli per state step.
GridFunction semigroup_profile(const QueueParams& params, double t,
                               const GridFunction& f, int k_max,
                               double tail_bound = 1e-13);

/// Carre du champ: 2 Gamma(f)(n) = n mu |D*f(n)|^2 + lambda |Df(n)|^2.
GridFunction carre_du_champ(const QueueParams& params, const GridFunction& f);

/// Iterated form: 2 Gamma_2(f)(n) = (3/2) lambda mu |Df|^2 + (n/2) mu^2
/// |D*f|^2 + R with 2R = n(n-1) mu^2 |D*D*f|^2 + 2 n lambda mu |DD*f|^2 +
/// lambda^2 |DDf|^2; boundary factors n and n(n-1) mask the unreadable
/// second differences at n = 0, 1.
GridFunction gamma_two(const QueueParams& params, const GridFunction& f);

/// Solution of L f = alpha f with f(0) = 1 via the three-term recursion
/// lambda f(n+1) = (lambda + alpha + n mu) f(n) - n mu f(n-1).
GridFunction eigenfunction(const QueueParams& params, double alpha,
                           int n_max);

/// Second-smallest eigenvalue magnitude of the negated generator restricted
/// to {0..trunc} (reflecting top state), symmetrized by the square root of
/// the truncated Poisson weights.  Refuses truncations whose invariant tail
/// mass beyond trunc exceeds 1e-8.
double spectral_gap(const QueueParams& params, int trunc);

struct DecayPoint {
  double t = 0.0;
  double entropy = 0.0;  ///< Ent_{Poisson(rho)}[P_t f]
  double bound = 0.0;    ///< e^{-c mu t} Ent_{Poisson(rho)}[f]
};

/// Entropy of the evolved function along the given time grid, with the
/// exponential bound using rate c = 2 for the quadratic family, 1 otherwise.
std::vector<DecayPoint> entropy_decay_curve(const QueueParams& params,
                                            const PhiFunction& phi,
                                            const GridFunction& f,
                                            const std::vector<double>& times,
                                            double tail_bound = 1e-13);

enum class QueueIdentityId {
  kPolarized,     ///< generator equals its polarized rewriting
  kCommutInf,     ///< L(Df) - D(Lf) = mu Df
  kCommutSg,      ///< D P_t f = e^{-mu t} P_t(Df)
  kIppSg,         ///< mu P_t(h f)(n) = mu n p P_t f(1+.)(n-1) + lambda q P_t f(1+.)(n)
  kPropBPoi,      ///< <Q, Phi'(g) L g> = -lambda <Q, B(g, Dg)> under Poisson
  kMehlerMoments, ///< mean n p + rho q, variance (n p + rho) q
  kGammaLinear,   ///< identity profile: 2 Gamma = lambda + n mu, 4 Gamma_2 = 3 lambda mu + n mu^2
  kEntLoc,        ///< exact local entropy as a time integral of two A-terms
  kMm1Inv,        ///< geometric invariance of the single-server generator
  kMm1CommutInf,  ///< [L1, D] = 0 away from the boundary state
};

std::string_view to_tag(QueueIdentityId id);

/// Extra inputs for tags that need a time and a starting state.
struct QueueAux {
  double t = 1.0;
  int n = 3;
};

/// Checks one tagged identity for the given inputs.  `phi` is required for
/// the entropy-flavoured tags (kPropBPoi, kEntLoc) and ignored otherwise;
/// kMehlerMoments and kGammaLinear derive their own profiles and ignore f.
VerificationReport check_queue_identity(QueueIdentityId id,
                                        const QueueParams& params,
                                        const PhiFunction* phi,
                                        const GridFunction& f,
                                        const QueueAux& aux);

/// Randomized sweep over parameters, functions and (t, n) inputs.
VerificationReport check_queue_identity_sweep(QueueIdentityId id,
                                              const SampleConfig& config);

enum class LocalInequalityVariant {
  kMmiLoc,         ///< binomial-Poisson split of the local entropy bound
  kMmiLocNew,      ///< refined split with the p-integrated coefficients
  kLocalPoincare,  ///< quadratic collapse: local variance bound
};

std::string_view to_tag(LocalInequalityVariant id);

/// LHS = entropy of f under mehler_law(t, n); RHS per variant; reported as
/// a slack check (n = 0 drops the (n-1)-indexed terms).
VerificationReport local_inequality_eval(LocalInequalityVariant variant,
                                         const QueueParams& params,
                                         const PhiFunction& phi,
                                         const GridFunction& f, double t,
                                         int n);

}  // namespace philab
