#include "philab/queue.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace philab {

namespace {

std::string fmt_where(const char* fmt, ...) {
  char buf[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return std::string(buf);
}

double log_poisson_pmf(double rho, int k) {
  return -rho + static_cast<double>(k) * std::log(rho) -
         std::lgamma(static_cast<double>(k) + 1.0);
}

/// Output window of first-order generator-type operators: at lo = 0 the
/// boundary state is computable (masked D* term), otherwise one margin cell
/// is needed below as well as above.
void first_order_window(const GridFunction& f, int margin_below, int& out_lo,
                        int& out_hi) {
  out_lo = f.lo() == 0 ? 0 : f.lo() + margin_below;
  out_hi = f.hi() - 1;
  if (out_hi < out_lo) {
    throw std::invalid_argument("GridFunction window too small for operator");
  }
}

}  // namespace

QueueParams::QueueParams(double lambda_in, double mu_in)
    : lambda(lambda_in), mu(mu_in) {
  if (!(lambda >= 0.0) || !(mu >= 0.0)) {
    throw std::invalid_argument("rates must be nonnegative");
  }
  if (!(lambda + mu > 0.0)) {
    throw std::invalid_argument("lambda + mu must be positive");
  }
}

double QueueParams::p(double t) const { return std::exp(-mu * t); }

double QueueParams::q(double t) const { return -std::expm1(-mu * t); }

double QueueParams::rho() const {
  if (mu == 0.0) {
    throw std::domain_error(
        "rho is undefined for mu = 0; use mehler_intensity(t)");
  }
  return lambda / mu;
}

double QueueParams::mehler_intensity(double t) const {
  return mu == 0.0 ? lambda * t : rho() * q(t);
}

GridFunction gradient_D(const GridFunction& f) {
  if (f.size() < 2) {
    throw std::invalid_argument("gradient_D needs at least two values");
  }
  return GridFunction::from_callable(f.lo(), f.hi() - 1, [&](int n) {
    return f(n + 1) - f(n);
  });
}

GridFunction gradient_Dstar(const GridFunction& f) {
  if (f.size() < 2) {
    throw std::invalid_argument("gradient_Dstar needs at least two values");
  }
  return GridFunction::from_callable(f.lo() + 1, f.hi(), [&](int n) {
    return f(n - 1) - f(n);
  });
}

GridFunction generator_apply(const QueueParams& params,
                             const GridFunction& f) {
  int lo = 0;
  int hi = 0;
  first_order_window(f, 1, lo, hi);
  return GridFunction::from_callable(lo, hi, [&](int n) {
    const double death =
        n == 0 ? 0.0 : static_cast<double>(n) * params.mu * (f(n - 1) - f(n));
    return death + params.lambda * (f(n + 1) - f(n));
  });
}

GridFunction generator_apply_polarized(const QueueParams& params,
                                       const GridFunction& f,
                                       double phantom) {
  int lo = 0;
  int hi = 0;
  first_order_window(f, 1, lo, hi);
  return GridFunction::from_callable(lo, hi, [&](int n) {
    const double below = n == 0 ? phantom : f(n - 1);
    const double laplace = 2.0 * f(n) - below - f(n + 1);
    const double dstar = below - f(n);
    return -params.lambda * laplace +
           (static_cast<double>(n) * params.mu - params.lambda) * dstar;
  });
}

GridFunction mm1_generator_apply(const QueueParams& params,
                                 const GridFunction& f) {
  int lo = 0;
  int hi = 0;
  first_order_window(f, 1, lo, hi);
  return GridFunction::from_callable(lo, hi, [&](int n) {
    const double death = n == 0 ? 0.0 : params.mu * (f(n - 1) - f(n));
    return death + params.lambda * (f(n + 1) - f(n));
  });
}

DiscreteMeasure mehler_law(const QueueParams& params, double t, int n,
                           double tail_bound) {
  if (!(t >= 0.0)) throw std::invalid_argument("mehler_law needs t >= 0");
  if (n < 0) throw std::invalid_argument("mehler_law needs n >= 0");
  const double p = params.p(t);
  const double intensity = params.mehler_intensity(t);
  const DiscreteMeasure thinned = DiscreteMeasure::binomial(n, p);
  if (intensity == 0.0) return thinned;
  return thinned.convolve(DiscreteMeasure::poisson(intensity, tail_bound));
}

double semigroup_apply(const QueueParams& params, double t,
                       const GridFunction& f, int n, double tail_bound) {
  return mehler_law(params, t, n, tail_bound).expectation(f);
}

GridFunction semigroup_profile(const QueueParams& params, double t,
                               const GridFunction& f, int k_max,
                               double tail_bound) {
  if (k_max < 0) throw std::invalid_argument("semigroup_profile needs k_max >= 0");
  const double p = params.p(t);
  const double intensity = params.mehler_intensity(t);
  DiscreteMeasure current =
      intensity == 0.0 ? DiscreteMeasure::binomial(0, 1.0)
                       : DiscreteMeasure::poisson(intensity, tail_bound);
  const DiscreteMeasure step = DiscreteMeasure::bernoulli(p);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k_max) + 1);
  out.push_back(current.expectation(f));
  for (int k = 1; k <= k_max; ++k) {
    current = current.convolve(step);
    out.push_back(current.expectation(f));
  }
  return GridFunction(0, std::move(out));
}

GridFunction carre_du_champ(const QueueParams& params, const GridFunction& f) {
  int lo = 0;
  int hi = 0;
  first_order_window(f, 1, lo, hi);
  return GridFunction::from_callable(lo, hi, [&](int n) {
    const double forward = f(n + 1) - f(n);
    double value = params.lambda * forward * forward;
    if (n >= 1) {
      const double backward = f(n - 1) - f(n);
      value += static_cast<double>(n) * params.mu * backward * backward;
    }
    return 0.5 * value;
  });
}

GridFunction gamma_two(const QueueParams& params, const GridFunction& f) {
  const int lo = f.lo() == 0 ? 0 : f.lo() + 2;
  const int hi = f.hi() - 2;
  if (hi < lo) {
    throw std::invalid_argument("gamma_two needs a window margin of two");
  }
  const double lambda = params.lambda;
  const double mu = params.mu;
  return GridFunction::from_callable(lo, hi, [&](int n) {
    const double nd = static_cast<double>(n);
    const double df = f(n + 1) - f(n);
    const double ddf = f(n + 2) - 2.0 * f(n + 1) + f(n);
    double value = 0.75 * lambda * mu * df * df + 0.25 * lambda * lambda * ddf * ddf;
    if (n >= 1) {
      const double dstar = f(n - 1) - f(n);
      const double laplace = 2.0 * f(n) - f(n - 1) - f(n + 1);
      value += 0.25 * nd * mu * mu * dstar * dstar +
               0.5 * nd * lambda * mu * laplace * laplace;
    }
    if (n >= 2) {
      const double dstar2 = f(n - 2) - 2.0 * f(n - 1) + f(n);
      value += 0.25 * nd * (nd - 1.0) * mu * mu * dstar2 * dstar2;
    }
    return value;
  });
}

GridFunction eigenfunction(const QueueParams& params, double alpha,
                           int n_max) {
  if (!(params.lambda > 0.0)) {
    throw std::invalid_argument("eigenfunction needs lambda > 0");
  }
  if (n_max < 1) throw std::invalid_argument("eigenfunction needs n_max >= 1");
  std::vector<double> values(static_cast<std::size_t>(n_max));
  values[0] = 1.0;
  if (n_max >= 2) values[1] = (params.lambda + alpha) / params.lambda;
  for (int n = 1; n + 1 < n_max; ++n) {
    const double nd = static_cast<double>(n);
    values[static_cast<std::size_t>(n) + 1] =
        ((params.lambda + alpha + nd * params.mu) *
             values[static_cast<std::size_t>(n)] -
         nd * params.mu * values[static_cast<std::size_t>(n) - 1]) /
        params.lambda;
  }
  return GridFunction(0, std::move(values));
}

double spectral_gap(const QueueParams& params, int trunc) {
  if (!(params.mu > 0.0) || !(params.lambda > 0.0)) {
    throw std::invalid_argument("spectral_gap needs lambda > 0 and mu > 0");
  }
  if (trunc < 2) throw std::invalid_argument("spectral_gap needs trunc >= 2");
  const double rho = params.rho();
  NeumaierSum captured;
  for (int k = 0; k <= trunc; ++k) {
    captured.add(std::exp(log_poisson_pmf(rho, k)));
  }
  if (1.0 - captured.value() > 1e-8) {
    throw std::invalid_argument(
        "invariant tail mass beyond trunc exceeds 1e-8 for rho = " +
        std::to_string(rho) + "; increase trunc (rule of thumb: rho + 10 "
        "sqrt(rho) + 20)");
  }
  std::vector<double> diag(static_cast<std::size_t>(trunc) + 1);
  std::vector<double> off(static_cast<std::size_t>(trunc));
  for (int n = 0; n < trunc; ++n) {
    diag[static_cast<std::size_t>(n)] =
        params.lambda + static_cast<double>(n) * params.mu;
    off[static_cast<std::size_t>(n)] =
        std::sqrt(params.lambda * params.mu * (static_cast<double>(n) + 1.0));
  }
  diag[static_cast<std::size_t>(trunc)] =
      static_cast<double>(trunc) * params.mu;
  const std::vector<double> eigs = tridiagonal_eigenvalues(diag, off);
  return eigs[1];
}

std::vector<DecayPoint> entropy_decay_curve(const QueueParams& params,
                                            const PhiFunction& phi,
                                            const GridFunction& f,
                                            const std::vector<double>& times,
                                            double tail_bound) {
  f.validate_codomain(phi);
  const DiscreteMeasure invariant =
      DiscreteMeasure::poisson(params.rho(), tail_bound);
  const double ent0 = invariant.phi_entropy(phi, f);
  const double rate =
      (phi.family() == PhiFamily::P2 ? 2.0 : 1.0) * params.mu;
  std::vector<DecayPoint> curve;
  curve.reserve(times.size());
  for (const double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("decay curve needs t >= 0");
    const GridFunction evolved =
        semigroup_profile(params, t, f, invariant.hi(), tail_bound);
    DecayPoint point;
    point.t = t;
    point.entropy = invariant.phi_entropy(phi, evolved);
    point.bound = std::exp(-rate * t) * ent0;
    curve.push_back(point);
  }
  return curve;
}

std::string_view to_tag(QueueIdentityId id) {
  switch (id) {
    case QueueIdentityId::kPolarized: return "POLARIZED";
    case QueueIdentityId::kCommutInf: return "COMMUT_INF";
    case QueueIdentityId::kCommutSg: return "COMMUT_SG";
    case QueueIdentityId::kIppSg: return "IPP_SG";
    case QueueIdentityId::kPropBPoi: return "PROPB_POI";
    case QueueIdentityId::kMehlerMoments: return "MEHLER_MOMENTS";
    case QueueIdentityId::kGammaLinear: return "GAMMA_LINEAR";
    case QueueIdentityId::kEntLoc: return "ENT_LOC";
    case QueueIdentityId::kMm1Inv: return "MM1_INV";
    case QueueIdentityId::kMm1CommutInf: return "MM1_COMMUT_INF";
  }
  return "UNKNOWN";
}

std::string_view to_tag(LocalInequalityVariant id) {
  switch (id) {
    case LocalInequalityVariant::kMmiLoc: return "MMI_LOC";
    case LocalInequalityVariant::kMmiLocNew: return "MMI_LOC_NEW";
    case LocalInequalityVariant::kLocalPoincare: return "LOCAL_POINCARE";
  }
  return "UNKNOWN";
}

namespace {

constexpr double kSweepTail = 1e-16;

/// Largest magnitude over the window, as a normalization scale for
/// identities whose individual values may cross zero.
double window_scale(const GridFunction& g, int lo, int hi) {
  double scale = 0.0;
  for (int n = lo; n <= hi; ++n) scale = std::max(scale, std::fabs(g(n)));
  return std::max(scale, 1e-30);
}

void accumulate_queue_identity(VerificationReport& report, QueueIdentityId id,
                               const QueueParams& params,
                               const PhiFunction* phi, const GridFunction& f,
                               const QueueAux& aux, std::size_t case_index) {
  const std::string head = fmt_where(
      "case=%zu lambda=%.6g mu=%.6g", case_index, params.lambda, params.mu);
  switch (id) {
    case QueueIdentityId::kPolarized: {
      const GridFunction direct = generator_apply(params, f);
      const GridFunction plus = generator_apply_polarized(params, f, 100.0);
      const GridFunction minus = generator_apply_polarized(params, f, -100.0);
      const double scale = window_scale(direct, direct.lo(), direct.hi());
      for (int n = direct.lo(); n <= direct.hi(); ++n) {
        const std::string where = head + fmt_where(" n=%d", n);
        report.record_deviation_with_scale(plus(n), direct(n), scale, where);
        report.record_deviation_with_scale(minus(n), direct(n), scale, where);
      }
      break;
    }
    case QueueIdentityId::kCommutInf: {
      const GridFunction df = gradient_D(f);
      const GridFunction l_df = generator_apply(params, df);
      const GridFunction d_lf = gradient_D(generator_apply(params, f));
      const int lo = std::max(l_df.lo(), d_lf.lo());
      const int hi = std::min(l_df.hi(), d_lf.hi());
      const double scale =
          std::max(window_scale(l_df, lo, hi), window_scale(d_lf, lo, hi));
      for (int n = lo; n <= hi; ++n) {
        report.record_deviation_with_scale(l_df(n) - d_lf(n),
                                           params.mu * df(n), scale,
                                           head + fmt_where(" n=%d", n));
      }
      break;
    }
    case QueueIdentityId::kCommutSg: {
      const GridFunction df = gradient_D(f);
      const DiscreteMeasure law_n = mehler_law(params, aux.t, aux.n, kSweepTail);
      const DiscreteMeasure law_up =
          mehler_law(params, aux.t, aux.n + 1, kSweepTail);
      const double lhs = law_up.expectation(f) - law_n.expectation(f);
      const double rhs = params.p(aux.t) * law_n.expectation(df);
      const double scale = std::max(
          params.p(aux.t) *
              law_n.expectation_fn([&](int k) { return std::fabs(df(k)); }),
          1e-30);
      report.record_deviation_with_scale(
          lhs, rhs, scale, head + fmt_where(" t=%.6g n=%d", aux.t, aux.n));
      break;
    }
    case QueueIdentityId::kIppSg: {
      if (!(params.mu > 0.0)) {
        throw std::invalid_argument("IPP_SG needs mu > 0");
      }
      const DiscreteMeasure law_n = mehler_law(params, aux.t, aux.n, kSweepTail);
      const double p = params.p(aux.t);
      const double q = params.q(aux.t);
      const double lhs = params.mu * law_n.expectation_fn([&](int k) {
        return static_cast<double>(k) * f(k);
      });
      double rhs = params.lambda * q *
                   law_n.expectation_fn([&](int k) { return f(k + 1); });
      if (aux.n >= 1) {
        const DiscreteMeasure law_down =
            mehler_law(params, aux.t, aux.n - 1, kSweepTail);
        rhs += params.mu * static_cast<double>(aux.n) * p *
               law_down.expectation_fn([&](int k) { return f(k + 1); });
      }
      const double scale =
          std::max(params.mu * law_n.expectation_fn([&](int k) {
            return static_cast<double>(k) * std::fabs(f(k));
          }) + params.lambda * q,
                   1e-30);
      report.record_deviation_with_scale(
          lhs, rhs, scale, head + fmt_where(" t=%.6g n=%d", aux.t, aux.n));
      break;
    }
    case QueueIdentityId::kPropBPoi: {
      if (phi == nullptr) {
        throw std::invalid_argument("PROPB_POI needs a Phi function");
      }
      const DiscreteMeasure invariant =
          DiscreteMeasure::poisson(params.rho(), kSweepTail);
      const GridFunction lg = generator_apply(params, f);
      const double lhs = invariant.expectation_fn(
          [&](int k) { return phi->d1(f(k)) * lg(k); });
      const double rhs = -params.lambda * invariant.expectation_fn([&](int k) {
        return transform_B(*phi, TransformPoint(f(k), f(k + 1) - f(k)));
      });
      // Scale by the magnitude of the generator's summed parts, not the net
      // value: L f is itself a difference, so its roundoff floor is set by
      // the arrival and service terms separately.
      const double scale =
          std::max(invariant.expectation_fn([&](int k) {
            return std::fabs(phi->d1(f(k))) *
                   (params.mu * static_cast<double>(k) *
                        (std::fabs(f(k)) + (k >= 1 ? std::fabs(f(k - 1)) : 0.0)) +
                    params.lambda * (std::fabs(f(k)) + std::fabs(f(k + 1))));
          }),
                   1e-30);
      report.record_deviation_with_scale(lhs, rhs, scale, head);
      break;
    }
    case QueueIdentityId::kMehlerMoments: {
      const DiscreteMeasure law = mehler_law(params, aux.t, aux.n, kSweepTail);
      const double p = params.p(aux.t);
      const double q = params.q(aux.t);
      const double intensity = params.mehler_intensity(aux.t);
      const double nd = static_cast<double>(aux.n);
      const std::string where = head + fmt_where(" t=%.6g n=%d", aux.t, aux.n);
      report.record_deviation(law.mean(), nd * p + intensity, where);
      report.record_deviation(law.variance(), nd * p * q + intensity, where);
      break;
    }
    case QueueIdentityId::kGammaLinear: {
      const GridFunction identity =
          GridFunction::from_callable(0, 24, [](int n) {
            return static_cast<double>(n);
          });
      const GridFunction gamma = carre_du_champ(params, identity);
      const GridFunction gamma2 = gamma_two(params, identity);
      for (int n = gamma2.lo(); n <= gamma2.hi(); ++n) {
        const double nd = static_cast<double>(n);
        const std::string where = head + fmt_where(" n=%d", n);
        report.record_deviation(2.0 * gamma(n), params.lambda + nd * params.mu,
                                where);
        report.record_deviation(
            4.0 * gamma2(n),
            3.0 * params.lambda * params.mu + nd * params.mu * params.mu,
            where);
      }
      break;
    }
    case QueueIdentityId::kEntLoc: {
      if (phi == nullptr) {
        throw std::invalid_argument("ENT_LOC needs a Phi function");
      }
      const DiscreteMeasure law_t = mehler_law(params, aux.t, aux.n, 1e-14);
      const double lhs = law_t.phi_entropy(*phi, f);
      const auto integrand = [&](double s) {
        const DiscreteMeasure law_s = mehler_law(params, s, aux.n, 1e-13);
        const GridFunction evolved =
            semigroup_profile(params, aux.t - s, f, law_s.hi() + 1, 1e-13);
        return law_s.expectation_fn([&](int k) {
          const double forward = transform_A(
              *phi, TransformPoint(evolved(k), evolved(k + 1) - evolved(k)));
          double value = params.lambda * forward;
          if (k >= 1) {
            const double backward = transform_A(
                *phi, TransformPoint(evolved(k), evolved(k - 1) - evolved(k)));
            value += params.mu * static_cast<double>(k) * backward;
          }
          return value;
        });
      };
      const QuadratureResult quad =
          integrate_adaptive(integrand, 0.0, aux.t, 1e-13, 1e-9, 12);
      // The entropy is a difference of like-sized Phi expectations, so a
      // near-constant f drives it to zero while the roundoff floor stays at
      // the Phi magnitudes; measure the deviation against those.
      const double phi_scale = law_t.expectation_fn(
          [&](int k) { return std::fabs(phi->eval(f(k))); });
      const double noise_scale = std::max(
          {phi_scale, std::fabs(lhs), std::fabs(quad.value), 1e-30});
      report.record_deviation_with_scale(
          lhs, quad.value, noise_scale,
          head + fmt_where(" t=%.6g n=%d", aux.t, aux.n));
      if (!quad.converged) {
        report.note = "time quadrature did not converge";
        report.pass = false;
      }
      break;
    }
    case QueueIdentityId::kMm1Inv: {
      const double rho = params.rho();
      if (!(rho < 1.0)) {
        throw std::invalid_argument("MM1_INV needs rho < 1");
      }
      const DiscreteMeasure geo = DiscreteMeasure::geometric(rho, kSweepTail);
      const GridFunction lg = mm1_generator_apply(params, f);
      const double lhs = geo.expectation(lg);
      const double scale = std::max(
          geo.expectation_fn([&](int k) { return std::fabs(lg(k)); }), 1e-30);
      report.record_deviation_with_scale(lhs, 0.0, scale, head);
      break;
    }
    case QueueIdentityId::kMm1CommutInf: {
      const GridFunction df = gradient_D(f);
      const GridFunction l_df = mm1_generator_apply(params, df);
      const GridFunction d_lf = gradient_D(mm1_generator_apply(params, f));
      const int lo = std::max({l_df.lo(), d_lf.lo(), 1});
      const int hi = std::min(l_df.hi(), d_lf.hi());
      const double scale =
          std::max(window_scale(l_df, lo, hi), window_scale(d_lf, lo, hi));
      for (int n = lo; n <= hi; ++n) {
        report.record_deviation_with_scale(l_df(n) - d_lf(n), 0.0, scale,
                                           head + fmt_where(" n=%d", n));
      }
      break;
    }
  }
}

}  // namespace

VerificationReport check_queue_identity(QueueIdentityId id,
                                        const QueueParams& params,
                                        const PhiFunction* phi,
                                        const GridFunction& f,
                                        const QueueAux& aux) {
  VerificationReport report;
  report.tag = std::string(to_tag(id));
  report.tolerance = id == QueueIdentityId::kEntLoc ? 1e-7 : 1e-10;
  accumulate_queue_identity(report, id, params, phi, f, aux, 0);
  report.finish_identity();
  report.description = "queue identity at the given inputs";
  return report;
}

VerificationReport check_queue_identity_sweep(QueueIdentityId id,
                                              const SampleConfig& config) {
  VerificationReport report;
  report.tag = std::string(to_tag(id));
  report.seed = config.seed;
  report.tolerance = id == QueueIdentityId::kEntLoc ? 1e-7 : 1e-10;
  RngStream rng(config.seed, 4);

  const PhiFunction phis[4] = {PhiFunction::p1(), PhiFunction::p2(),
                               PhiFunction::p3(1.5),
                               PhiFunction::power_mixture()};

  for (std::size_t c = 0; c < config.count; ++c) {
    // Parameter draws; a slice of cases exercises the pure-arrival mu = 0
    // convention where the tag supports it.
    double lambda = rng.uniform(0.5, 4.0);
    double mu = rng.uniform(0.3, 2.0);
    const bool mu_zero_tag = id == QueueIdentityId::kPolarized ||
                             id == QueueIdentityId::kCommutInf ||
                             id == QueueIdentityId::kCommutSg;
    if (mu_zero_tag && c % 16 == 15) mu = 0.0;
    if (id == QueueIdentityId::kMm1Inv ||
        id == QueueIdentityId::kMm1CommutInf) {
      mu = rng.uniform(0.5, 2.0);
      lambda = rng.uniform(0.05, 0.9) * mu;
    }
    const QueueParams params(lambda, mu);

    QueueAux aux;
    aux.t = rng.uniform(0.1, 3.0);
    aux.n = static_cast<int>(rng.below(11));

    switch (id) {
      case QueueIdentityId::kPolarized:
      case QueueIdentityId::kCommutInf:
      case QueueIdentityId::kMm1CommutInf: {
        std::vector<double> values(16);
        for (double& v : values) v = rng.uniform(-1.0, 1.0);
        const GridFunction f(0, std::move(values));
        accumulate_queue_identity(report, id, params, nullptr, f, aux, c);
        break;
      }
      case QueueIdentityId::kCommutSg: {
        const int hi =
            mehler_law(params, aux.t, aux.n + 1, kSweepTail).hi() + 1;
        std::vector<double> values(static_cast<std::size_t>(hi) + 1);
        for (double& v : values) v = rng.uniform(-1.0, 1.0);
        const GridFunction f(0, std::move(values));
        accumulate_queue_identity(report, id, params, nullptr, f, aux, c);
        break;
      }
      case QueueIdentityId::kIppSg: {
        const int hi = mehler_law(params, aux.t, aux.n, kSweepTail).hi() + 1;
        std::vector<double> values(static_cast<std::size_t>(hi) + 1);
        for (double& v : values) v = rng.uniform(-1.0, 1.0);
        const GridFunction f(0, std::move(values));
        accumulate_queue_identity(report, id, params, nullptr, f, aux, c);
        break;
      }
      case QueueIdentityId::kPropBPoi: {
        const PhiFunction& phi = phis[c % 4];
        const DiscreteMeasure invariant =
            DiscreteMeasure::poisson(params.rho(), kSweepTail);
        const auto battery = FunctionSampler::default_battery(phi);
        const FunctionSampler sampler(battery[c % battery.size()],
                                      phi.box_lo(), phi.box_hi());
        const GridFunction f = sampler.draw(0, invariant.hi() + 1, rng);
        accumulate_queue_identity(report, id, params, &phi, f, aux, c);
        break;
      }
      case QueueIdentityId::kMehlerMoments:
      case QueueIdentityId::kGammaLinear: {
        const GridFunction unused = GridFunction::constant(0, 1, 0.0);
        accumulate_queue_identity(report, id, params, nullptr, unused, aux, c);
        break;
      }
      case QueueIdentityId::kEntLoc: {
        const QueueParams small(rng.uniform(0.5, 2.5), rng.uniform(0.4, 1.5));
        aux.t = rng.uniform(0.2, 1.2);
        aux.n = static_cast<int>(rng.below(5));
        const PhiFunction& phi = phis[c % 4];
        const int width =
            2 * mehler_law(small, aux.t, aux.n, 1e-13).hi() + 2;
        const auto battery = FunctionSampler::default_battery(phi);
        const FunctionSampler sampler(battery[c % battery.size()],
                                      phi.box_lo(), phi.box_hi());
        const GridFunction f = sampler.draw(0, width, rng);
        accumulate_queue_identity(report, id, small, &phi, f, aux, c);
        break;
      }
      case QueueIdentityId::kMm1Inv: {
        const DiscreteMeasure geo =
            DiscreteMeasure::geometric(params.rho(), kSweepTail);
        std::vector<double> values(static_cast<std::size_t>(geo.hi()) + 2);
        for (double& v : values) v = rng.uniform(-1.0, 1.0);
        const GridFunction f(0, std::move(values));
        accumulate_queue_identity(report, id, params, nullptr, f, aux, c);
        break;
      }
    }
  }
  report.finish_identity();
  report.description = "queue identity over random parameters and functions";
  return report;
}

VerificationReport local_inequality_eval(LocalInequalityVariant variant,
                                         const QueueParams& params,
                                         const PhiFunction& phi,
                                         const GridFunction& f, double t,
                                         int n) {
  if (!(t >= 0.0)) throw std::invalid_argument("local bound needs t >= 0");
  if (n < 0) throw std::invalid_argument("local bound needs n >= 0");
  if (variant == LocalInequalityVariant::kMmiLocNew && !(params.mu > 0.0)) {
    throw std::domain_error(
        "the refined local bound needs mu > 0 (its coefficients are "
        "p-integrals over a positive service rate)");
  }
  f.validate_codomain(phi);

  VerificationReport report;
  report.tag = std::string(to_tag(variant));
  report.tolerance = 1e-9;

  const DiscreteMeasure law = mehler_law(params, t, n, 1e-14);
  const double lhs = law.phi_entropy(phi, f);
  const double p = params.p(t);
  const double q = params.q(t);
  const double intensity = params.mehler_intensity(t);
  const double nd = static_cast<double>(n);

  const auto a_forward = [&](int k) {
    return transform_A(phi, TransformPoint(f(k), f(k + 1) - f(k)));
  };
  const auto a_reflect = [&](int k) {
    return transform_A(phi, TransformPoint(f(k + 1), f(k) - f(k + 1)));
  };
  const auto c_forward = [&](int k) {
    const double v = f(k + 1) - f(k);
    return phi.d2(f(k)) * v * v;
  };

  double rhs = 0.0;
  switch (variant) {
    case LocalInequalityVariant::kMmiLoc: {
      rhs = intensity * law.expectation_fn(a_forward);
      if (n >= 1) {
        const DiscreteMeasure law_down = mehler_law(params, t, n - 1, 1e-14);
        rhs += nd * p * q * law_down.expectation_fn([&](int k) {
          return q * a_forward(k) + p * a_reflect(k);
        });
      }
      break;
    }
    case LocalInequalityVariant::kMmiLocNew: {
      const double c1 = (1.0 - p * p * p) / 3.0;
      const double c2 = q * q * (2.0 + p) / 6.0;
      rhs = params.rho() * law.expectation_fn([&](int k) {
        return c1 * a_forward(k) +
               c2 * (a_reflect(k) + 0.5 * c_forward(k));
      });
      if (n >= 1) {
        const DiscreteMeasure law_down = mehler_law(params, t, n - 1, 1e-14);
        rhs += 0.5 * nd * p * law_down.expectation_fn([&](int k) {
          return (1.0 - p * p) * a_reflect(k) + 0.5 * q * q * c_forward(k);
        });
      }
      break;
    }
    case LocalInequalityVariant::kLocalPoincare: {
      const auto df_sq = [&](int k) {
        const double v = f(k + 1) - f(k);
        return v * v;
      };
      rhs = intensity * law.expectation_fn(df_sq);
      if (n >= 1) {
        const DiscreteMeasure law_down = mehler_law(params, t, n - 1, 1e-14);
        rhs += nd * p * q * law_down.expectation_fn(df_sq);
      }
      break;
    }
  }
  // The local entropy vanishes for near-constant f while its roundoff floor
  // stays at the Phi magnitudes; normalize the slack accordingly.
  report.record_slack_with_scale(lhs, rhs, phi_sup_magnitude(phi, f),
                                 fmt_where("t=%.6g n=%d lambda=%.6g mu=%.6g",
                                           t, n, params.lambda, params.mu));
  report.finish_inequality();
  report.description = "local entropy bound at (t, n)";
  return report;
}

}  // namespace philab
