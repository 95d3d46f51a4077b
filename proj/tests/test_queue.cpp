#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "philab/grid.hpp"
#include "philab/inequalities.hpp"
#include "philab/measures.hpp"
#include "philab/phi.hpp"
#include "philab/queue.hpp"

using namespace philab;

namespace {

GridFunction bounded_profile(int lo, int hi, double shift) {
  return GridFunction::from_callable(lo, hi, [shift](int k) {
    return 2.0 + std::tanh(0.25 * (static_cast<double>(k) - shift));
  });
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(QueueParams(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(QueueParams(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(QueueParams(0.0, 0.0), std::invalid_argument);
  const QueueParams pure_birth(2.0, 0.0);
  CHECK_THROWS_AS(pure_birth.rho(), std::domain_error);
  CHECK(pure_birth.mehler_intensity(1.5) == doctest::Approx(3.0));
  const QueueParams params(2.0, 1.0);
  CHECK(params.rho() == doctest::Approx(2.0));
  CHECK(params.p(0.7) == doctest::Approx(std::exp(-0.7)).epsilon(1e-15));
  CHECK(params.p(0.7) + params.q(0.7) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("generator hand check and identity profile") {
  const QueueParams params(2.0, 0.5);
  const GridFunction f = GridFunction::from_callable(
      0, 6, [](int k) { return std::sin(0.3 * k) + 0.1 * k * k; });
  const GridFunction lf = generator_apply(params, f);
  const double expected =
      2 * 0.5 * (f(1) - f(2)) + 2.0 * (f(3) - f(2));
  CHECK(lf(2) == doctest::Approx(expected).epsilon(1e-15));

  const GridFunction id = GridFunction::from_callable(
      0, 10, [](int k) { return static_cast<double>(k); });
  const GridFunction lid = generator_apply(params, id);
  for (int n = lid.lo(); n <= lid.hi(); ++n) {
    CHECK(lid(n) ==
          doctest::Approx(params.lambda - params.mu * n).epsilon(1e-14));
  }
}

TEST_CASE("polarized rewriting cancels the phantom value exactly") {
  const QueueParams params(1.3, 0.7);
  const GridFunction f = GridFunction::from_callable(
      0, 8, [](int k) { return std::cos(0.4 * k) + 0.02 * k; });
  const GridFunction direct = generator_apply(params, f);
  for (double phantom : {-100.0, 0.0, 100.0}) {
    const GridFunction pol = generator_apply_polarized(params, f, phantom);
    CHECK(pol.lo() == direct.lo());
    CHECK(pol.hi() == direct.hi());
    for (int n = pol.lo(); n <= pol.hi(); ++n) {
      CHECK(pol(n) == doctest::Approx(direct(n)).epsilon(1e-12));
    }
  }
  // The phantom must drop out exactly, not merely to rounding.
  const GridFunction plus = generator_apply_polarized(params, f, 100.0);
  const GridFunction minus = generator_apply_polarized(params, f, -100.0);
  CHECK(plus(0) == minus(0));
}

TEST_CASE("mu = 0 reduces the generator to a forward difference") {
  const QueueParams params(1.7, 0.0);
  const GridFunction f = GridFunction::from_callable(
      0, 6, [](int k) { return std::exp(-0.2 * k); });
  const GridFunction lf = generator_apply(params, f);
  const GridFunction df = gradient_D(f);
  for (int n = lf.lo(); n <= lf.hi(); ++n) {
    CHECK(lf(n) == doctest::Approx(1.7 * df(n)).epsilon(1e-15));
  }
}

TEST_CASE("second differences commute") {
  const GridFunction f = GridFunction::from_callable(
      0, 9, [](int k) { return std::sin(1.1 * k) * std::exp(0.1 * k); });
  const GridFunction a = gradient_D(gradient_Dstar(f));
  const GridFunction b = gradient_Dstar(gradient_D(f));
  const GridFunction df = gradient_D(f);
  const GridFunction dstarf = gradient_Dstar(f);
  for (int n = 1; n <= 8; ++n) {
    CHECK(a(n) == doctest::Approx(b(n)).epsilon(1e-13));
    CHECK(a(n) == doctest::Approx(-(df(n) + dstarf(n))).epsilon(1e-13));
  }
}

TEST_CASE("transition law at time zero is a point mass") {
  const QueueParams params(2.0, 1.0);
  const DiscreteMeasure law = mehler_law(params, 0.0, 4);
  CHECK(law.mass(4) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(law.mean() == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("transition moments match the closed forms") {
  const QueueParams params(2.0, 1.0);
  for (int n : {0, 3, 7}) {
    for (double t : {0.2, 1.0, 2.5}) {
      const DiscreteMeasure law = mehler_law(params, t, n);
      const double p = params.p(t);
      const double q = params.q(t);
      const double mean = n * p + params.rho() * q;
      const double var = (n * p + params.rho()) * q;
      CHECK(law.mean() == doctest::Approx(mean).epsilon(1e-11));
      CHECK(law.variance() == doctest::Approx(var).epsilon(1e-10));
    }
  }
}

TEST_CASE("long-time law converges to the invariant measure") {
  const QueueParams params(2.0, 1.0);
  const DiscreteMeasure law = mehler_law(params, 40.0, 7);
  const DiscreteMeasure inv = DiscreteMeasure::poisson(2.0);
  CHECK(tv_distance(law, inv) < 1e-12);
}

TEST_CASE("semigroup property via profiles") {
  const QueueParams params(1.5, 0.8);
  // f needs to cover the Mehler support of every start point the profiles
  // touch, so its window is much wider than the profiles themselves.
  const GridFunction f = bounded_profile(0, 160, 3.0);
  const double s = 0.4;
  const double t = 0.9;
  const GridFunction ptf = semigroup_profile(params, t, f, 70);
  const GridFunction composed = semigroup_profile(params, s, ptf, 12);
  for (int n = 0; n <= 12; ++n) {
    const double direct = semigroup_apply(params, s + t, f, n);
    CHECK(composed(n) == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("reversibility under the invariant measure") {
  const QueueParams params(2.0, 1.0);
  const DiscreteMeasure inv = DiscreteMeasure::poisson(2.0);
  const int window = 80;
  const GridFunction f = bounded_profile(0, window, 2.0);
  const GridFunction g = GridFunction::from_callable(
      0, window, [](int k) { return 1.0 / (1.0 + k); });
  const double t = 0.7;
  const GridFunction ptf = semigroup_profile(params, t, f, inv.hi());
  const GridFunction ptg = semigroup_profile(params, t, g, inv.hi());
  const GridFunction gptf = GridFunction::from_callable(
      inv.lo(), inv.hi(), [&](int k) { return g(k) * ptf(k); });
  const GridFunction fptg = GridFunction::from_callable(
      inv.lo(), inv.hi(), [&](int k) { return f(k) * ptg(k); });
  const double lhs = inv.expectation(gptf);
  const double rhs = inv.expectation(fptg);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("first two nontrivial eigenfunctions") {
  const QueueParams params(2.0, 1.0);
  for (double alpha : {-params.mu, -2.0 * params.mu}) {
    const GridFunction f = eigenfunction(params, alpha, 40);
    const GridFunction lf = generator_apply(params, f);
    double scale = 1.0;
    for (int n = lf.lo(); n <= lf.hi(); ++n) {
      scale = std::max(scale, std::abs(alpha * f(n)));
    }
    for (int n = lf.lo(); n <= lf.hi(); ++n) {
      CHECK(std::abs(lf(n) - alpha * f(n)) <= 1e-9 * scale);
    }
  }
  // Eigenvalue -mu: the affine profile 1 - n / rho.
  const GridFunction lin = eigenfunction(params, -1.0, 10);
  for (int n = 0; n <= 9; ++n) {
    CHECK(lin(n) == doctest::Approx(1.0 - n / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("spectral gap equals the service rate") {
  CHECK(spectral_gap(QueueParams(2.0, 1.0), 300) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(spectral_gap(QueueParams(5.0, 2.0), 300) ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_WITH_AS(spectral_gap(QueueParams(50.0, 0.1), 30),
                       doctest::Contains("increase trunc"),
                       std::invalid_argument);
}

TEST_CASE("entropy decay: quadratic family saturates the doubled rate") {
  const QueueParams params(2.0, 1.0);
  const DiscreteMeasure inv = DiscreteMeasure::poisson(2.0);
  const GridFunction f = GridFunction::from_callable(
      0, inv.hi() + 60, [](int k) { return static_cast<double>(k); });
  const std::vector<double> times = {0.0, 0.1, 0.5, 1.0, 2.0, 3.0};
  const auto curve = entropy_decay_curve(params, PhiFunction::p2(), f, times);
  REQUIRE(curve.size() == times.size());
  const double ent0 = curve.front().entropy;
  CHECK(ent0 == doctest::Approx(2.0).epsilon(1e-10));
  for (const DecayPoint& pt : curve) {
    const double exact = std::exp(-2.0 * pt.t) * ent0;
    CHECK(pt.entropy == doctest::Approx(exact).epsilon(1e-8));
    CHECK(pt.bound == doctest::Approx(exact).epsilon(1e-10));
  }
}

TEST_CASE("entropy decay: u log u stays below the single-rate bound") {
  const QueueParams params(2.0, 1.0);
  const DiscreteMeasure inv = DiscreteMeasure::poisson(2.0);
  const GridFunction f = GridFunction::from_callable(
      0, inv.hi() + 60,
      [](int k) { return 0.5 + k + 0.3 * std::sin(1.7 * k); });
  const std::vector<double> times = {0.0, 0.3, 0.8, 1.5, 2.5};
  const auto curve = entropy_decay_curve(params, PhiFunction::p1(), f, times);
  double prev = curve.front().entropy;
  CHECK(curve.front().bound == doctest::Approx(prev).epsilon(1e-12));
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].entropy <= curve[i].bound + 1e-12);
    CHECK(curve[i].entropy <= prev + 1e-12);
    prev = curve[i].entropy;
  }
}

TEST_CASE("identity sweeps over random parameters and functions") {
  SampleConfig cfg;
  cfg.count = 300;
  cfg.seed = 31;
  for (QueueIdentityId id :
       {QueueIdentityId::kPolarized, QueueIdentityId::kCommutInf,
        QueueIdentityId::kCommutSg, QueueIdentityId::kIppSg,
        QueueIdentityId::kPropBPoi, QueueIdentityId::kMehlerMoments,
        QueueIdentityId::kGammaLinear, QueueIdentityId::kMm1Inv,
        QueueIdentityId::kMm1CommutInf}) {
    const VerificationReport rep = check_queue_identity_sweep(id, cfg);
    INFO(rep.tag, " witness ", rep.witness, " dev ", rep.max_rel_deviation);
    CHECK(rep.pass);
    CHECK(rep.case_count >= cfg.count);
  }
  SampleConfig quad_cfg;
  quad_cfg.count = 40;  // the quadrature-backed tag is slower per case
  quad_cfg.seed = 31;
  const VerificationReport ent_loc =
      check_queue_identity_sweep(QueueIdentityId::kEntLoc, quad_cfg);
  INFO(ent_loc.witness, " dev ", ent_loc.max_rel_deviation);
  CHECK(ent_loc.pass);
}

TEST_CASE("single local evaluations pass for all variants") {
  const QueueParams params(2.0, 1.0);
  const PhiFunction p1 = PhiFunction::p1();
  const GridFunction f = GridFunction::from_callable(
      0, 120, [](int k) { return 1.0 + 0.5 * k + 0.2 * std::cos(0.9 * k); });
  for (LocalInequalityVariant variant :
       {LocalInequalityVariant::kMmiLoc, LocalInequalityVariant::kMmiLocNew,
        LocalInequalityVariant::kLocalPoincare}) {
    for (int n : {0, 4}) {
      const VerificationReport rep =
          local_inequality_eval(variant, params, p1, f, 0.8, n);
      INFO(rep.tag, " n=", n, " slack ", rep.min_slack);
      CHECK(rep.pass);
      CHECK(rep.min_slack >= -1e-9);
    }
  }
  CHECK_THROWS_AS(
      local_inequality_eval(LocalInequalityVariant::kMmiLocNew,
                            QueueParams(2.0, 0.0), p1, f, 0.8, 2),
      std::domain_error);
}

TEST_CASE("quadratic family collapses the local bound to the variance form") {
  const QueueParams params(1.4, 0.9);
  const PhiFunction p2 = PhiFunction::p2();
  const GridFunction f = GridFunction::from_callable(
      0, 120, [](int k) { return 0.3 * k + std::sin(0.6 * k); });
  const VerificationReport a = local_inequality_eval(
      LocalInequalityVariant::kMmiLoc, params, p2, f, 0.6, 3);
  const VerificationReport b = local_inequality_eval(
      LocalInequalityVariant::kLocalPoincare, params, p2, f, 0.6, 3);
  CHECK(a.min_slack == doctest::Approx(b.min_slack).epsilon(1e-12));
}

TEST_CASE("long-time local bound approaches the invariant-measure bound") {
  const QueueParams params(2.0, 1.0);
  const PhiFunction p1 = PhiFunction::p1();
  const GridFunction f = GridFunction::from_callable(
      0, 160, [](int k) { return 1.0 + 0.4 * k + 0.2 * std::sin(0.8 * k); });
  const VerificationReport local = local_inequality_eval(
      LocalInequalityVariant::kMmiLoc, params, p1, f, 40.0, 5);
  IneqInputs inputs;
  inputs.rho = 2.0;
  const VerificationReport global =
      evaluate_inequality(InequalityId::kPoissonA, p1, inputs, f);
  CHECK(local.min_slack == doctest::Approx(global.min_slack).epsilon(1e-7));
}
