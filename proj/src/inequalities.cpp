#include "philab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "philab/numerics.hpp"

namespace philab {
namespace {

constexpr double kTail = 1e-13;

std::string fmt(const char* pattern, ...) {
  va_list args;
  va_start(args, pattern);
  char buffer[256];
  std::vsnprintf(buffer, sizeof(buffer), pattern, args);
  va_end(args);
  return std::string(buffer);
}

std::string_view describe(InequalityId id) {
  switch (id) {
    case InequalityId::kTwoPointA:
      return "two-point entropy bounded by pq times the mixed A-transform";
    case InequalityId::kTwoPointB:
      return "two-point entropy bounded by pq times the B-transform";
    case InequalityId::kBernProduct:
      return "Bernoulli-sum entropy bounded by max(p_i q_i) times the mixed "
             "A-bracket";
    case InequalityId::kBinomial:
      return "binomial entropy bounded by pq times the mixed A-bracket";
    case InequalityId::kBinomialAlt:
      return "binomial entropy bounded by npq times a bracket on the "
             "(n-1)-law";
    case InequalityId::kPoissonA:
      return "Poisson entropy bounded by rho times the forward A-transform";
    case InequalityId::kPoissonBLimit:
      return "Poisson entropy bounded by rho times the forward B-transform";
    case InequalityId::kBinPoi:
      return "binomial-plus-Poisson entropy bounded by a two-term bracket";
    case InequalityId::kEntropyDecay:
      return "evolved entropy bounded by the exponentially discounted "
             "initial entropy";
    case InequalityId::kTvEnt:
      return "squared total variation to equilibrium bounded by discounted "
             "relative entropy";
    case InequalityId::kMixedBcLimit:
      return "Poisson entropy bounded by (rho/2) times the (2B + C)/3 "
             "bracket";
    case InequalityId::kGamma2Ge:
      return "iterated carre du champ dominates (mu/2) times the carre du "
             "champ";
    case InequalityId::kTensorisation:
      return "entropy of a product law bounded by summed conditional "
             "entropies";
    case InequalityId::kVariational:
      return "entropy dominates every tangent comparison, with equality at "
             "the function itself";
  }
  return "unknown";
}

double entropy_of(const DiscreteMeasure& m, const PhiFunction& phi,
                  const GridFunction& f) {
  return m.phi_entropy(phi, f);
}

struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Static single-function bounds: pure evaluation, no recording.  Dynamic
/// and two-function tags are handled directly in `accumulate`.
Sides sides_of(InequalityId id, const PhiFunction& phi, const IneqInputs& in,
               const GridFunction& f) {
  auto a_fwd = [&](int k) {
    return transform_A(phi, TransformPoint(f(k), f(k + 1) - f(k)));
  };
  auto a_bwd = [&](int k) {
    return transform_A(phi, TransformPoint(f(k), f(k - 1) - f(k)));
  };
  auto a_tau = [&](int k) {
    return transform_A(phi, TransformPoint(f(k + 1), f(k) - f(k + 1)));
  };
  auto b_fwd = [&](int k) {
    return transform_B(phi, TransformPoint(f(k), f(k + 1) - f(k)));
  };
  auto c_fwd = [&](int k) { return transform_C(phi, f(k), f(k + 1) - f(k)); };

  switch (id) {
    case InequalityId::kTwoPointA:
    case InequalityId::kTwoPointB: {
      const double p = in.p;
      const double q = 1.0 - p;
      const DiscreteMeasure law = DiscreteMeasure::bernoulli(p);
      const double lhs = entropy_of(law, phi, f);
      const TransformPoint fwd(f(0), f(1) - f(0));
      const TransformPoint bwd(f(1), f(0) - f(1));
      double bracket = 0.0;
      if (id == InequalityId::kTwoPointA) {
        bracket = q * transform_A(phi, fwd) + p * transform_A(phi, bwd);
      } else {
        bracket = q * transform_B(phi, fwd) + p * transform_B(phi, bwd);
      }
      return {lhs, p * q * bracket};
    }
    case InequalityId::kBernProduct: {
      if (in.ps.empty()) {
        throw std::invalid_argument(
            "Bernoulli-product bound needs a nonempty success-probability "
            "list");
      }
      const DiscreteMeasure law = DiscreteMeasure::bernoulli_product(in.ps);
      const int d = static_cast<int>(in.ps.size());
      double coeff = 0.0;
      for (double pi : in.ps) coeff = std::max(coeff, pi * (1.0 - pi));
      const double lhs = entropy_of(law, phi, f);
      const double rhs =
          coeff * law.expectation_fn([&](int h) {
            double value = 0.0;
            if (h < d) value += (d - h) * a_fwd(h);
            if (h > 0) value += h * a_bwd(h);
            return value;
          });
      return {lhs, rhs};
    }
    case InequalityId::kBinomial: {
      if (in.n < 1) {
        throw std::invalid_argument("binomial bound needs n >= 1");
      }
      const double p = in.p;
      const double q = 1.0 - p;
      const int n = in.n;
      const DiscreteMeasure law = DiscreteMeasure::binomial(n, p);
      const double lhs = entropy_of(law, phi, f);
      const double rhs = p * q * law.expectation_fn([&](int h) {
        double value = 0.0;
        if (h < n) value += (n - h) * a_fwd(h);
        if (h > 0) value += h * a_bwd(h);
        return value;
      });
      return {lhs, rhs};
    }
    case InequalityId::kBinomialAlt: {
      if (in.n < 1) {
        throw std::invalid_argument("binomial bound needs n >= 1");
      }
      const double p = in.p;
      const double q = 1.0 - p;
      const int n = in.n;
      const DiscreteMeasure law = DiscreteMeasure::binomial(n, p);
      const DiscreteMeasure down = DiscreteMeasure::binomial(n - 1, p);
      const double lhs = entropy_of(law, phi, f);
      const double rhs =
          n * p * q *
          down.expectation_fn(
              [&](int k) { return q * a_fwd(k) + p * a_tau(k); });
      return {lhs, rhs};
    }
    case InequalityId::kPoissonA:
    case InequalityId::kPoissonBLimit: {
      const DiscreteMeasure law = DiscreteMeasure::poisson(in.rho, kTail);
      const double lhs = entropy_of(law, phi, f);
      const double rhs =
          in.rho * law.expectation_fn([&](int k) {
            return id == InequalityId::kPoissonA ? a_fwd(k) : b_fwd(k);
          });
      return {lhs, rhs};
    }
    case InequalityId::kBinPoi: {
      if (in.n < 1) {
        throw std::invalid_argument(
            "binomial-plus-Poisson bound needs n >= 1");
      }
      const double p = in.p;
      const double q = 1.0 - p;
      const int n = in.n;
      const DiscreteMeasure law =
          DiscreteMeasure::binomial_poisson(n, p, in.rho, kTail);
      const DiscreteMeasure down =
          DiscreteMeasure::binomial_poisson(n - 1, p, in.rho, kTail);
      const double lhs = entropy_of(law, phi, f);
      const double rhs =
          in.rho * law.expectation_fn(a_fwd) +
          n * p * q *
              down.expectation_fn(
                  [&](int k) { return q * a_fwd(k) + p * a_tau(k); });
      return {lhs, rhs};
    }
    case InequalityId::kMixedBcLimit: {
      const DiscreteMeasure law = DiscreteMeasure::poisson(in.rho, kTail);
      const double lhs = entropy_of(law, phi, f);
      const double rhs =
          0.5 * in.rho * law.expectation_fn([&](int k) {
            return (2.0 / 3.0) * b_fwd(k) + (1.0 / 3.0) * c_fwd(k);
          });
      return {lhs, rhs};
    }
    default:
      throw std::invalid_argument(
          fmt("tag %s is not a static single-function bound",
              std::string(to_tag(id)).c_str()));
  }
}

/// Evaluates one case of `id`, records slack(s) into `rep`, and returns the
/// headline pair of sides.
Sides accumulate(InequalityId id, const PhiFunction& phi,
                 const IneqInputs& in, const GridFunction& f,
                 const GridFunction* f_second, VerificationReport& rep,
                 const std::string& where) {
  switch (id) {
    case InequalityId::kEntropyDecay: {
      if (in.queue.mu <= 0.0) {
        throw std::domain_error(
            "entropy decay needs mu > 0 so the equilibrium law exists");
      }
      const auto curve =
          entropy_decay_curve(in.queue, phi, f, {in.t});
      const Sides sides{curve.front().entropy, curve.front().bound};
      rep.record_slack_with_scale(sides.lhs, sides.rhs,
                                  phi_sup_magnitude(phi, f), where);
      return sides;
    }
    case InequalityId::kTvEnt: {
      if (in.queue.mu <= 0.0 || in.queue.lambda <= 0.0) {
        throw std::domain_error(
            "total-variation bound needs lambda > 0 and mu > 0");
      }
      if (in.n < 0) {
        throw std::invalid_argument(
            "total-variation bound needs a nonnegative start state");
      }
      const double rho = in.queue.rho();
      const DiscreteMeasure now = mehler_law(in.queue, in.t, in.n, kTail);
      const DiscreteMeasure eq = DiscreteMeasure::poisson(rho, kTail);
      const double tv = tv_distance(now, eq);
      const double lhs = 2.0 * tv * tv;
      const double rel_ent =
          rho - in.n * std::log(rho) + std::lgamma(in.n + 1.0);
      const double rhs = std::exp(-in.queue.mu * in.t) * rel_ent;
      rep.record_slack(lhs, rhs, where);
      return {lhs, rhs};
    }
    case InequalityId::kGamma2Ge: {
      if (in.queue.mu <= 0.0) {
        throw std::domain_error(
            "carre du champ comparison needs mu > 0 so the equilibrium law "
            "exists");
      }
      const DiscreteMeasure law =
          DiscreteMeasure::poisson(in.queue.rho(), kTail);
      const GridFunction gamma = carre_du_champ(in.queue, f);
      const GridFunction gamma2 = gamma_two(in.queue, f);
      for (int k = law.lo(); k <= law.hi(); ++k) {
        rep.record_slack(0.5 * in.queue.mu * gamma(k), gamma2(k),
                         fmt("%s pointwise n=%d", where.c_str(), k));
      }
      const double lhs = in.queue.mu * law.expectation(gamma);
      const double rhs = law.expectation(gamma2);
      rep.record_slack(lhs, rhs, where + " integrated");
      return {lhs, rhs};
    }
    case InequalityId::kTensorisation: {
      if (f_second == nullptr) {
        throw std::invalid_argument(
            "product-law subadditivity needs both sections (pass f_second)");
      }
      const GridFunction& f0 = f;
      const GridFunction& f1 = *f_second;
      const double p = in.p;
      const double q = 1.0 - p;
      const DiscreteMeasure side = DiscreteMeasure::poisson(in.rho, kTail);
      const double m0 = side.expectation(f0);
      const double m1 = side.expectation(f1);
      const double lhs = q * side.expectation_fn(
                                 [&](int y) { return phi.eval(f0(y)); }) +
                         p * side.expectation_fn(
                                 [&](int y) { return phi.eval(f1(y)); }) -
                         phi.eval(q * m0 + p * m1);
      const double conditional = side.expectation_fn([&](int y) {
        return q * phi.eval(f0(y)) + p * phi.eval(f1(y)) -
               phi.eval(q * f0(y) + p * f1(y));
      });
      const double rhs = conditional + q * entropy_of(side, phi, f0) +
                         p * entropy_of(side, phi, f1);
      rep.record_slack_with_scale(lhs, rhs,
                                  std::max(phi_sup_magnitude(phi, f0),
                                           phi_sup_magnitude(phi, f1)),
                                  where);
      return {lhs, rhs};
    }
    case InequalityId::kVariational: {
      const GridFunction& g = f_second != nullptr ? *f_second : f;
      const DiscreteMeasure law = DiscreteMeasure::poisson(in.rho, kTail);
      const double mean_g = law.expectation(g);
      const double slope = phi.d1(mean_g);
      double tangent_sup = 0.0;
      const double tangent = law.expectation_fn([&](int k) {
        const double term = (phi.d1(g(k)) - slope) * (f(k) - g(k));
        tangent_sup = std::max(tangent_sup, std::fabs(term));
        return term;
      });
      const double lhs = tangent + entropy_of(law, phi, g);
      const double rhs = entropy_of(law, phi, f);
      rep.record_slack_with_scale(lhs, rhs,
                                  std::max({phi_sup_magnitude(phi, f),
                                            phi_sup_magnitude(phi, g),
                                            tangent_sup}),
                                  where);
      return {lhs, rhs};
    }
    default: {
      const Sides sides = sides_of(id, phi, in, f);
      rep.record_slack_with_scale(sides.lhs, sides.rhs,
                                  phi_sup_magnitude(phi, f), where);
      return sides;
    }
  }
}

GridFunction draw_on_window(FunctionSampler& sampler, int lo, int hi,
                            RngStream& rng) {
  return sampler.draw(lo, hi, rng);
}

}  // namespace

std::string_view to_tag(InequalityId id) {
  switch (id) {
    case InequalityId::kTwoPointA:
      return "TWO_POINT_A";
    case InequalityId::kTwoPointB:
      return "TWO_POINT_B";
    case InequalityId::kBernProduct:
      return "BERN_PRODUCT";
    case InequalityId::kBinomial:
      return "BINOMIAL";
    case InequalityId::kBinomialAlt:
      return "BINOMIAL_ALT";
    case InequalityId::kPoissonA:
      return "POISSON_A";
    case InequalityId::kPoissonBLimit:
      return "POISSON_B_LIMIT";
    case InequalityId::kBinPoi:
      return "BINPOI";
    case InequalityId::kEntropyDecay:
      return "ENTROPY_DECAY";
    case InequalityId::kTvEnt:
      return "TV_ENT";
    case InequalityId::kMixedBcLimit:
      return "MIXED_BC_LIMIT";
    case InequalityId::kGamma2Ge:
      return "GAMMA2_GE";
    case InequalityId::kTensorisation:
      return "TENSORISATION";
    case InequalityId::kVariational:
      return "VARIATIONAL";
  }
  return "UNKNOWN";
}

InequalityId inequality_from_tag(std::string_view tag) {
  static constexpr InequalityId all[] = {
      InequalityId::kTwoPointA,    InequalityId::kTwoPointB,
      InequalityId::kBernProduct,  InequalityId::kBinomial,
      InequalityId::kBinomialAlt,  InequalityId::kPoissonA,
      InequalityId::kPoissonBLimit, InequalityId::kBinPoi,
      InequalityId::kEntropyDecay, InequalityId::kTvEnt,
      InequalityId::kMixedBcLimit, InequalityId::kGamma2Ge,
      InequalityId::kTensorisation, InequalityId::kVariational,
  };
  for (InequalityId id : all) {
    if (to_tag(id) == tag) return id;
  }
  throw std::invalid_argument(fmt("unknown inequality tag '%s'",
                                  std::string(tag).c_str()));
}

std::pair<int, int> inequality_window(InequalityId id,
                                      const IneqInputs& inputs) {
  switch (id) {
    case InequalityId::kTwoPointA:
    case InequalityId::kTwoPointB:
      return {0, 1};
    case InequalityId::kBernProduct:
      if (inputs.ps.empty()) {
        throw std::invalid_argument(
            "Bernoulli-product bound needs a nonempty success-probability "
            "list");
      }
      return {0, static_cast<int>(inputs.ps.size())};
    case InequalityId::kBinomial:
    case InequalityId::kBinomialAlt:
      return {0, inputs.n};
    case InequalityId::kPoissonA:
    case InequalityId::kPoissonBLimit:
    case InequalityId::kMixedBcLimit:
    case InequalityId::kVariational:
      return {0, DiscreteMeasure::poisson(inputs.rho, kTail).hi() + 1};
    case InequalityId::kBinPoi:
      return {0, DiscreteMeasure::binomial_poisson(inputs.n, inputs.p,
                                                   inputs.rho, kTail)
                         .hi() +
                     1};
    case InequalityId::kEntropyDecay: {
      if (inputs.queue.mu <= 0.0) {
        throw std::domain_error(
            "entropy decay needs mu > 0 so the equilibrium law exists");
      }
      const int base =
          DiscreteMeasure::poisson(inputs.queue.rho(), kTail).hi();
      const double intensity = inputs.queue.mehler_intensity(inputs.t);
      const int extra =
          intensity > 0.0
              ? DiscreteMeasure::poisson(intensity, kTail).hi() + 2
              : 1;
      return {0, base + extra};
    }
    case InequalityId::kTvEnt:
      return {0, 0};
    case InequalityId::kGamma2Ge: {
      if (inputs.queue.mu <= 0.0) {
        throw std::domain_error(
            "carre du champ comparison needs mu > 0 so the equilibrium law "
            "exists");
      }
      return {0,
              DiscreteMeasure::poisson(inputs.queue.rho(), kTail).hi() + 2};
    }
    case InequalityId::kTensorisation:
      return {0, DiscreteMeasure::poisson(inputs.rho, kTail).hi()};
  }
  throw std::invalid_argument("unknown inequality tag");
}

VerificationReport evaluate_inequality(InequalityId id,
                                       const PhiFunction& phi,
                                       const IneqInputs& inputs,
                                       const GridFunction& f,
                                       const GridFunction* f_second) {
  VerificationReport rep;
  rep.tag = std::string(to_tag(id));
  rep.description = std::string(describe(id));
  rep.tolerance = 1e-9;
  if (id != InequalityId::kTvEnt) {
    f.validate_codomain(phi);
    if (f_second != nullptr) f_second->validate_codomain(phi);
  }
  const Sides sides =
      accumulate(id, phi, inputs, f, f_second, rep, "single case");
  rep.note = fmt("lhs=%.17g rhs=%.17g", sides.lhs, sides.rhs);
  rep.finish_inequality();
  return rep;
}

VerificationReport sweep_inequality(InequalityId id, const PhiFunction& phi,
                                    const IneqInputs& inputs,
                                    const SamplerSpec& sampler,
                                    const SampleConfig& config) {
  VerificationReport rep;
  rep.tag = std::string(to_tag(id));
  rep.description = std::string(describe(id));
  rep.tolerance = 1e-9;
  rep.seed = config.seed;
  RngStream rng(config.seed, 5);
  FunctionSampler draw(sampler, phi.box_lo(), phi.box_hi());
  IneqInputs local = inputs;
  const bool needs_second = id == InequalityId::kTensorisation ||
                            id == InequalityId::kVariational;
  for (std::size_t i = 0; i < config.count; ++i) {
    const std::string where = fmt("case %zu %s", i, sampler.label().c_str());
    if (id == InequalityId::kTvEnt) {
      local.t = rng.uniform(0.3, 2.5);
      local.n = static_cast<int>(rng.below(9));
      const GridFunction unused = GridFunction::constant(0, 0, 0.0);
      accumulate(id, phi, local, unused, nullptr, rep, where);
      continue;
    }
    const auto [lo, hi] = inequality_window(id, local);
    const GridFunction f = draw_on_window(draw, lo, hi, rng);
    if (needs_second) {
      const GridFunction g = draw_on_window(draw, lo, hi, rng);
      accumulate(id, phi, local, f, &g, rep, where);
    } else {
      accumulate(id, phi, local, f, nullptr, rep, where);
    }
  }
  rep.finish_inequality();
  return rep;
}

TwoPointUReport two_point_u(const PhiFunction& phi, double f0, double f1,
                            double g0, double g1, std::size_t p_grid) {
  if (p_grid < 3) {
    throw std::invalid_argument("dense check needs at least 3 grid points");
  }
  TwoPointUReport out;
  out.u_prime_0 = transform_A(phi, TransformPoint(f0, f1 - f0)) - g0;
  out.u_prime_1 = g1 - transform_A(phi, TransformPoint(f1, f0 - f1));
  const double scale =
      std::max({1.0, std::fabs(phi.eval(f0)), std::fabs(phi.eval(f1)),
                std::fabs(g0), std::fabs(g1)});
  const double tol = 1e-12 * scale;
  out.endpoints_pass = out.u_prime_0 <= tol && out.u_prime_1 >= -tol;
  out.max_u = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p_grid; ++i) {
    const double p = static_cast<double>(i) / (p_grid - 1);
    const double q = 1.0 - p;
    const double entropy =
        q * phi.eval(f0) + p * phi.eval(f1) - phi.eval(q * f0 + p * f1);
    const double u = entropy - p * q * (q * g0 + p * g1);
    if (u > out.max_u) {
      out.max_u = u;
      out.argmax_p = p;
    }
  }
  out.dense_pass = out.max_u <= tol;
  out.equivalent = out.endpoints_pass == out.dense_pass;
  return out;
}

ExtremalResult find_extremal(InequalityId id, const PhiFunction& phi,
                             const IneqInputs& inputs,
                             const GridFunction& init, std::size_t budget) {
  switch (id) {
    case InequalityId::kTwoPointA:
    case InequalityId::kTwoPointB:
    case InequalityId::kBernProduct:
    case InequalityId::kBinomial:
    case InequalityId::kBinomialAlt:
    case InequalityId::kPoissonA:
    case InequalityId::kPoissonBLimit:
    case InequalityId::kBinPoi:
    case InequalityId::kMixedBcLimit:
      break;
    default:
      throw std::invalid_argument(
          "extremal search supports the static single-function bounds only");
  }
  const auto [lo, hi] = inequality_window(id, inputs);
  if (init.lo() > lo || init.hi() < hi) {
    throw std::out_of_range("starting function does not cover the window");
  }
  const double box_lo = phi.box_lo();
  const double box_hi = phi.box_hi();
  const double span = box_hi - box_lo;
  auto clamp = [&](double v) { return std::clamp(v, box_lo, box_hi); };

  GridFunction f = GridFunction::from_callable(
      lo, hi, [&](int k) { return clamp(init(k)); });
  ExtremalResult out{f, 0.0, false, 0};
  auto ratio_of = [&](const GridFunction& g) {
    const Sides sides = sides_of(id, phi, inputs, g);
    ++out.evaluations;
    if (!(sides.rhs > 1e-30)) return 0.0;
    return sides.lhs / sides.rhs;
  };
  out.ratio = ratio_of(f);

  double step = 0.25 * span;
  const double step_floor = 1e-6 * span;
  while (step > step_floor && out.evaluations < budget) {
    bool improved = false;
    for (int k = lo; k <= hi && out.evaluations < budget; ++k) {
      for (double dir : {1.0, -1.0}) {
        if (out.evaluations >= budget) break;
        GridFunction trial = f;
        trial.set(k, clamp(f(k) + dir * step));
        const double r = ratio_of(trial);
        if (r > out.ratio) {
          f = trial;
          out.ratio = r;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  out.converged = step <= step_floor;
  out.f_star = f;
  return out;
}

double best_constant(const PhiFunction& phi, const QueueParams& params,
                     const SamplerSpec& sampler, std::size_t budget,
                     std::uint64_t seed) {
  if (params.mu <= 0.0) {
    throw std::domain_error(
        "best-constant search needs mu > 0 so the equilibrium law exists");
  }
  IneqInputs inputs;
  inputs.rho = params.rho();
  const auto [lo, hi] = inequality_window(InequalityId::kPoissonBLimit,
                                          inputs);
  const double box_lo = phi.box_lo();
  const double box_hi = phi.box_hi();
  const double span = box_hi - box_lo;

  std::size_t used = 0;
  // c(f) = lambda <Q, B(f, Df)> / (mu Ent_Q[f]); the static pair already
  // carries rhs = rho <Q, B> so the ratio is rhs / lhs.
  auto constant_of = [&](const GridFunction& f) {
    const Sides sides =
        sides_of(InequalityId::kPoissonBLimit, phi, inputs, f);
    ++used;
    const double scale = std::max(std::fabs(sides.rhs), 1.0);
    if (!(sides.lhs > 1e-13 * scale)) {
      return std::numeric_limits<double>::infinity();
    }
    return sides.rhs / sides.lhs;
  };

  std::vector<std::pair<double, GridFunction>> ranked;
  const GridFunction linear = GridFunction::from_callable(lo, hi, [&](int k) {
    const double frac = static_cast<double>(k - lo) / std::max(1, hi - lo);
    return box_lo + span * (0.1 + 0.8 * frac);
  });
  ranked.emplace_back(constant_of(linear), linear);

  RngStream rng(seed, 6);
  FunctionSampler draw(sampler, box_lo, box_hi);
  const std::size_t n_draws =
      std::max<std::size_t>(8, std::min<std::size_t>(64, budget / 8));
  for (std::size_t i = 0; i < n_draws && used < budget; ++i) {
    GridFunction f = draw.draw(lo, hi, rng);
    ranked.emplace_back(constant_of(f), f);
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double best = ranked.front().first;
  const std::size_t restarts = std::min<std::size_t>(5, ranked.size());
  const std::size_t per_restart =
      budget > used ? (budget - used) / std::max<std::size_t>(1, restarts)
                    : 0;
  for (std::size_t r = 0; r < restarts; ++r) {
    GridFunction f = ranked[r].second;
    double current = ranked[r].first;
    double step = 0.2 * span;
    const double step_floor = 1e-5 * span;
    const std::size_t stop = used + per_restart;
    while (step > step_floor && used < stop && used < budget) {
      bool improved = false;
      for (int k = lo; k <= hi && used < stop; ++k) {
        for (double dir : {1.0, -1.0}) {
          if (used >= stop) break;
          GridFunction trial = f;
          trial.set(k, std::clamp(f(k) + dir * step, box_lo, box_hi));
          const double c = constant_of(trial);
          if (c < current) {
            f = trial;
            current = c;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::min(best, current);
  }
  return best;
}

}  // namespace philab
