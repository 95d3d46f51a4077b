#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "philab/grid.hpp"
#include "philab/inequalities.hpp"
#include "philab/measures.hpp"
#include "philab/phi.hpp"
#include "philab/transforms.hpp"

using namespace philab;

namespace {

const std::vector<InequalityId> kAllIds = {
    InequalityId::kTwoPointA,     InequalityId::kTwoPointB,
    InequalityId::kBernProduct,   InequalityId::kBinomial,
    InequalityId::kBinomialAlt,   InequalityId::kPoissonA,
    InequalityId::kPoissonBLimit, InequalityId::kBinPoi,
    InequalityId::kEntropyDecay,  InequalityId::kTvEnt,
    InequalityId::kMixedBcLimit,  InequalityId::kGamma2Ge,
    InequalityId::kTensorisation, InequalityId::kVariational,
};

IneqInputs default_inputs() {
  IneqInputs in;
  in.p = 0.3;
  in.n = 6;
  in.rho = 1.7;
  in.t = 0.7;
  in.ps = {0.15, 0.3, 0.45, 0.6, 0.75};
  in.queue = QueueParams(2.0, 1.0);
  return in;
}

GridFunction linear_on(int lo, int hi, double a, double b) {
  return GridFunction::from_callable(
      lo, hi, [a, b](int k) { return a + b * static_cast<double>(k); });
}

}  // namespace

TEST_CASE("tag round trip") {
  for (InequalityId id : kAllIds) {
    CHECK(inequality_from_tag(std::string(to_tag(id))) == id);
  }
  CHECK_THROWS_AS(inequality_from_tag("NOT_A_TAG"), std::invalid_argument);
}

TEST_CASE("two-point bound is tight for the quadratic family") {
  IneqInputs in = default_inputs();
  in.p = 0.5;
  GridFunction f = GridFunction::constant(0, 1, 0.0);
  f.set(1, 2.0);
  const VerificationReport rep =
      evaluate_inequality(InequalityId::kTwoPointA, PhiFunction::p2(), in, f);
  CHECK(rep.pass);
  CHECK(std::abs(rep.min_slack) < 1e-10);
  CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  // Direct value: variance of a Bernoulli(1/2) image {0, 2} is 1.
  const DiscreteMeasure law = DiscreteMeasure::bernoulli(0.5);
  CHECK(law.phi_entropy(PhiFunction::p2(), f) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("poisson and binomial bounds are tight at affine functions") {
  IneqInputs in = default_inputs();
  in.rho = 2.0;
  {
    const auto [lo, hi] = inequality_window(InequalityId::kPoissonA, in);
    const GridFunction f = linear_on(lo, hi, 0.5, 0.25);
    const VerificationReport rep = evaluate_inequality(
        InequalityId::kPoissonA, PhiFunction::p2(), in, f);
    CHECK(rep.pass);
    CHECK(std::abs(rep.min_slack) < 1e-10);
  }
  {
    IneqInputs bin = default_inputs();
    bin.n = 6;
    bin.p = 0.3;
    const auto [lo, hi] = inequality_window(InequalityId::kBinomial, bin);
    const GridFunction f = linear_on(lo, hi, 0.0, 1.0);
    const VerificationReport rep = evaluate_inequality(
        InequalityId::kBinomial, PhiFunction::p2(), bin, f);
    CHECK(rep.pass);
    CHECK(std::abs(rep.min_slack) < 1e-10);
    // Entropy side equals the binomial variance n p q = 1.26.
    const DiscreteMeasure law = DiscreteMeasure::binomial(6, 0.3);
    CHECK(law.phi_entropy(PhiFunction::p2(), f) ==
          doctest::Approx(1.26).epsilon(1e-13));
  }
}

TEST_CASE("every bound passes randomized sweeps for P1 and P2") {
  SampleConfig cfg;
  cfg.count = 60;
  cfg.seed = 41;
  const IneqInputs in = default_inputs();
  for (const PhiFunction& phi : {PhiFunction::p1(), PhiFunction::p2()}) {
    for (InequalityId id : kAllIds) {
      const VerificationReport rep = sweep_inequality(
          id, phi, in, SamplerSpec::random_bounded(), cfg);
      INFO(rep.tag, " on ", phi.name(), " witness ", rep.witness, " slack ",
           rep.min_slack);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("sweeps with the structured sampler battery") {
  SampleConfig cfg;
  cfg.count = 40;
  cfg.seed = 43;
  const IneqInputs in = default_inputs();
  const PhiFunction phi = PhiFunction::p1();
  for (const SamplerSpec& spec : FunctionSampler::default_battery(phi)) {
    const VerificationReport rep = sweep_inequality(
        InequalityId::kPoissonA, phi, in, spec, cfg);
    INFO(spec.label(), " witness ", rep.witness);
    CHECK(rep.pass);
  }
}

TEST_CASE("the A-form bound is sharper than the B-form bound") {
  IneqInputs in = default_inputs();
  in.p = 0.35;
  RngStream rng(7, 0);
  const PhiFunction phi = PhiFunction::p1();
  for (int i = 0; i < 50; ++i) {
    GridFunction f = GridFunction::constant(0, 1, 0.0);
    f.set(0, rng.uniform(phi.box_lo(), phi.box_hi()));
    f.set(1, rng.uniform(phi.box_lo(), phi.box_hi()));
    const VerificationReport a =
        evaluate_inequality(InequalityId::kTwoPointA, phi, in, f);
    const VerificationReport b =
        evaluate_inequality(InequalityId::kTwoPointB, phi, in, f);
    // Larger right side means smaller attained ratio.
    CHECK(b.max_ratio <= a.max_ratio + 1e-12);
  }
}

TEST_CASE("single-factor specializations agree") {
  const PhiFunction phi = PhiFunction::p1();
  const double p = 0.3;
  RngStream rng(19, 0);
  for (int i = 0; i < 20; ++i) {
    GridFunction f = GridFunction::constant(0, 1, 0.0);
    f.set(0, rng.uniform(phi.box_lo(), phi.box_hi()));
    f.set(1, rng.uniform(phi.box_lo(), phi.box_hi()));

    IneqInputs two;
    two.p = p;
    const VerificationReport tp =
        evaluate_inequality(InequalityId::kTwoPointA, phi, two, f);

    IneqInputs bern;
    bern.ps = {p};
    const VerificationReport bp =
        evaluate_inequality(InequalityId::kBernProduct, phi, bern, f);

    IneqInputs bin;
    bin.n = 1;
    bin.p = p;
    const VerificationReport bi =
        evaluate_inequality(InequalityId::kBinomial, phi, bin, f);

    CHECK(tp.max_ratio == doctest::Approx(bp.max_ratio).epsilon(1e-12));
    CHECK(tp.max_ratio == doctest::Approx(bi.max_ratio).epsilon(1e-12));
  }
}

TEST_CASE("mixed law bound degenerates to the binomial bound as rho -> 0") {
  const PhiFunction phi = PhiFunction::p1();
  IneqInputs in = default_inputs();
  in.n = 4;
  in.p = 0.4;
  in.rho = 1e-12;
  const auto [lo, hi] = inequality_window(InequalityId::kBinPoi, in);
  const GridFunction f = GridFunction::from_callable(lo, hi, [&](int k) {
    return 1.0 + 0.8 * k + 0.3 * std::sin(1.3 * k);
  });
  const VerificationReport mixed =
      evaluate_inequality(InequalityId::kBinPoi, phi, in, f);
  const VerificationReport pure =
      evaluate_inequality(InequalityId::kBinomial, phi, in, f);
  CHECK(mixed.max_ratio == doctest::Approx(pure.max_ratio).epsilon(1e-9));
}

TEST_CASE("total variation bound holds with strict margin") {
  const PhiFunction phi = PhiFunction::p1();  // unused by the distance bound
  IneqInputs in = default_inputs();
  const GridFunction unused = GridFunction::constant(0, 0, 0.0);
  for (int n : {0, 5}) {
    for (double t : {0.5, 1.0, 2.0}) {
      in.n = n;
      in.t = t;
      const VerificationReport rep =
          evaluate_inequality(InequalityId::kTvEnt, phi, in, unused);
      INFO("n=", n, " t=", t, " slack ", rep.min_slack);
      CHECK(rep.pass);
      CHECK(rep.min_slack > 0.0);
    }
  }
}

TEST_CASE("product form of the entropy splits across a tensor pair") {
  const PhiFunction phi = PhiFunction::p1();
  IneqInputs in = default_inputs();
  in.p = 0.4;
  in.rho = 1.3;
  const auto [lo, hi] = inequality_window(InequalityId::kTensorisation, in);
  const GridFunction f = GridFunction::from_callable(
      lo, hi, [](int k) { return 1.5 + 0.4 * k; });
  const VerificationReport rep =
      evaluate_inequality(InequalityId::kTensorisation, phi, in, f, &f);
  CHECK(rep.pass);
  CHECK(std::abs(rep.min_slack) <= 1e-12);
}

TEST_CASE("variational characterization: equality at the function itself") {
  const PhiFunction phi = PhiFunction::p1();
  IneqInputs in = default_inputs();
  in.rho = 2.0;
  const auto [lo, hi] = inequality_window(InequalityId::kVariational, in);
  const GridFunction f = GridFunction::from_callable(
      lo, hi, [](int k) { return 1.0 + 0.3 * k + 0.1 * std::cos(0.7 * k); });
  const VerificationReport self =
      evaluate_inequality(InequalityId::kVariational, phi, in, f, &f);
  CHECK(self.pass);
  CHECK(std::abs(self.min_slack) <= 1e-10);

  const GridFunction g = GridFunction::from_callable(
      lo, hi, [](int k) { return 2.0 + 0.1 * k; });
  const VerificationReport other =
      evaluate_inequality(InequalityId::kVariational, phi, in, f, &g);
  CHECK(other.pass);
  CHECK(other.min_slack >= 0.0);
}

TEST_CASE("endpoint derivatives of the interpolation gap") {
  const PhiFunction phi = PhiFunction::p1();
  RngStream rng(23, 0);
  for (int i = 0; i < 25; ++i) {
    const double f0 = rng.uniform(0.5, 10.0);
    const double f1 = rng.uniform(0.5, 10.0);
    const double g0 = rng.uniform(0.0, 2.0);
    const double g1 = rng.uniform(0.0, 2.0);
    const TwoPointUReport rep = two_point_u(phi, f0, f1, g0, g1, 4001);
    // Central differences of U(p) = Ent - p q <g> near the endpoints.
    auto u_of = [&](double p) {
      const double q = 1.0 - p;
      const double ent = q * phi.eval(f0) + p * phi.eval(f1) -
                         phi.eval(q * f0 + p * f1);
      return ent - p * q * (q * g0 + p * g1);
    };
    const double h = 1e-6;
    const double d0 = (u_of(h) - u_of(0.0)) / h;
    const double d1 = (u_of(1.0) - u_of(1.0 - h)) / h;
    CHECK(rep.u_prime_0 == doctest::Approx(d0).epsilon(2e-5));
    CHECK(rep.u_prime_1 == doctest::Approx(d1).epsilon(2e-5));
  }
}

TEST_CASE("interpolation gap: endpoint test agrees with the dense test") {
  // Quadratic family with f = (0, 1) and the candidate pair g = (1, 0):
  // U(p) = p^2 (1-p) is positive inside the interval, and the corrected
  // right-endpoint derivative detects it while the left one does not.
  const PhiFunction p2 = PhiFunction::p2();
  const TwoPointUReport rep = two_point_u(p2, 0.0, 1.0, 1.0, 0.0, 2001);
  CHECK(rep.u_prime_0 == 0.0);
  CHECK(rep.u_prime_1 == -1.0);
  CHECK(!rep.endpoints_pass);
  CHECK(!rep.dense_pass);
  CHECK(rep.equivalent);
  CHECK(rep.max_u == doctest::Approx(4.0 / 27.0).epsilon(1e-6));
  CHECK(rep.argmax_p == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("interpolation gap equivalence across scaled candidate pairs") {
  const PhiFunction phi = PhiFunction::p1();
  RngStream rng(29, 0);
  for (int i = 0; i < 60; ++i) {
    const double f0 = rng.uniform(0.5, 10.0);
    const double f1 = rng.uniform(0.5, 10.0);
    if (std::fabs(f1 - f0) < 0.05) continue;
    const double a0 = transform_A(phi, TransformPoint(f0, f1 - f0));
    const double a1 = transform_A(phi, TransformPoint(f1, f0 - f1));
    for (double c : {0.7, 1.0, 1.3}) {
      const TwoPointUReport rep =
          two_point_u(phi, f0, f1, c * a0, c * a1, 2001);
      INFO("f0=", f0, " f1=", f1, " c=", c, " max_u=", rep.max_u);
      CHECK(rep.equivalent);
      if (c >= 1.0) {
        CHECK(rep.endpoints_pass);
        CHECK(rep.dense_pass);
      } else {
        CHECK(!rep.endpoints_pass);
        CHECK(!rep.dense_pass);
      }
    }
  }
}

TEST_CASE("extremal search drives the poisson bound toward saturation") {
  const PhiFunction p2 = PhiFunction::p2();
  IneqInputs in;
  in.rho = 2.0;
  const auto [lo, hi] = inequality_window(InequalityId::kPoissonA, in);
  const GridFunction init = GridFunction::from_callable(lo, hi, [&](int k) {
    return 1.0 + 0.5 * std::sin(2.1 * k);
  });
  const ExtremalResult res =
      find_extremal(InequalityId::kPoissonA, p2, in, init, 6000);
  INFO("ratio ", res.ratio, " evals ", res.evaluations);
  CHECK(res.ratio > 0.99);
  CHECK(res.ratio <= 1.0 + 1e-9);
  CHECK(res.evaluations <= 6000);

  CHECK_THROWS_AS(
      find_extremal(InequalityId::kEntropyDecay, p2, in, init, 100),
      std::invalid_argument);
}

TEST_CASE("two-point quadratic ratio is identically one") {
  const PhiFunction p2 = PhiFunction::p2();
  IneqInputs in;
  RngStream rng(31, 0);
  for (int i = 0; i < 20; ++i) {
    in.p = rng.uniform(0.05, 0.95);
    GridFunction f = GridFunction::constant(0, 1, 0.0);
    const double f0 = rng.uniform(-8.0, 8.0);
    // Keep a real gap: both sides vanish quadratically as f1 -> f0, and the
    // ratio of two cancellation-dominated values says nothing.
    const double gap = rng.uniform(0.5, 8.0) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
    f.set(0, f0);
    f.set(1, f0 + gap);
    const VerificationReport rep =
        evaluate_inequality(InequalityId::kTwoPointA, p2, in, f);
    CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sharp decay constant for the quadratic family") {
  const double c21 = best_constant(PhiFunction::p2(), QueueParams(2.0, 1.0),
                                   SamplerSpec::random_bounded(), 4000);
  CHECK(std::abs(c21 - 2.0) <= 1e-3);
  // The constant is scale-free in (lambda, mu) at fixed rho.
  const double c42 = best_constant(PhiFunction::p2(), QueueParams(4.0, 2.0),
                                   SamplerSpec::random_bounded(), 4000);
  CHECK(c21 == doctest::Approx(c42).epsilon(1e-15));
}

TEST_CASE("decay constant for u log u sits between the crude and sharp rates") {
  const double c = best_constant(PhiFunction::p1(), QueueParams(2.0, 1.0),
                                 SamplerSpec::random_bounded(), 4000);
  CHECK(c >= 0.99);
  CHECK(c <= 2.01);
}
