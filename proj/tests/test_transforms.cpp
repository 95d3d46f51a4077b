#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "philab/phi.hpp"
#include "philab/transforms.hpp"

using namespace philab;

TEST_CASE("tau is an exact involution thanks to endpoint storage") {
  const TransformPoint pt(0.1, 0.7000000000000003);
  const TransformPoint back = apply_tau(apply_tau(pt));
  CHECK(back.u() == pt.u());
  CHECK(back.v() == pt.v());
  const TransformPoint flipped = apply_tau(pt);
  CHECK(flipped.u() == pt.w());
  CHECK(flipped.v() == -pt.v());
}

TEST_CASE("closed forms for the quadratic family") {
  const PhiFunction p2 = PhiFunction::p2();
  const TransformPoint pt(1.3, -0.8);
  CHECK(transform_A(p2, pt) == doctest::Approx(0.64).epsilon(1e-14));
  CHECK(transform_B(p2, pt) == doctest::Approx(1.28).epsilon(1e-14));
  CHECK(transform_C(p2, 1.3, -0.8) == doctest::Approx(1.28).epsilon(1e-14));
}

TEST_CASE("closed forms for u log u at (1, 1)") {
  const PhiFunction p1 = PhiFunction::p1();
  const TransformPoint pt(1.0, 1.0);
  CHECK(transform_A(p1, pt) ==
        doctest::Approx(0.38629436111989057).epsilon(1e-14));
  CHECK(transform_B(p1, pt) ==
        doctest::Approx(0.69314718055994529).epsilon(1e-14));
  CHECK(transform_C(p1, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sigma scales the increment only") {
  const TransformPoint pt(2.0, 1.5);
  const TransformPoint scaled = apply_sigma(0.25, pt);
  CHECK(scaled.u() == 2.0);
  CHECK(scaled.v() == doctest::Approx(0.375).epsilon(1e-15));
}

TEST_CASE("identity sweeps pass for the standard corpus") {
  SampleConfig cfg;
  cfg.count = 300;
  cfg.seed = 11;
  for (const char* name : {"P1", "P2", "P3:1.5", "POWER_MIXTURE",
                           "NEG_XLOGNEGX"}) {
    const PhiFunction phi = PhiFunction::from_name(name);
    for (TransformIdentityId id :
         {TransformIdentityId::kAbcSum, TransformIdentityId::kBTauInv,
          TransformIdentityId::kSigmaCSq, TransformIdentityId::kIntRepA,
          TransformIdentityId::kIntRepB, TransformIdentityId::kSmallVAsymp,
          TransformIdentityId::kEntTwop, TransformIdentityId::kAdtau}) {
      const VerificationReport rep = check_transform_identity(id, phi, cfg);
      INFO(rep.tag, " on ", std::string(name), " witness ", rep.witness, " dev ",
           rep.max_rel_deviation);
      CHECK(rep.pass);
      CHECK(rep.case_count >= cfg.count);
    }
  }
}

TEST_CASE("quadratic collapse holds only for the quadratic family") {
  SampleConfig cfg;
  cfg.count = 200;
  cfg.seed = 3;
  const VerificationReport rep = check_transform_identity(
      TransformIdentityId::kP2Collapse, PhiFunction::p2(), cfg);
  CHECK(rep.pass);
  CHECK_THROWS_AS(check_transform_identity(TransformIdentityId::kP2Collapse,
                                           PhiFunction::p1(), cfg),
                  std::invalid_argument);
}

TEST_CASE("comparison sweeps pass and respect family restrictions") {
  SampleConfig cfg;
  cfg.count = 300;
  cfg.seed = 17;
  for (const char* name : {"P1", "P2", "P3:1.5", "POWER_MIXTURE"}) {
    const PhiFunction phi = PhiFunction::from_name(name);
    for (TransformComparisonId id :
         {TransformComparisonId::kALeB, TransformComparisonId::kCThirdLe2A,
          TransformComparisonId::kCHalfLeB, TransformComparisonId::kSigmaALe,
          TransformComparisonId::kSigmaBLe,
          TransformComparisonId::kPaMinusAp, TransformComparisonId::kApCA,
          TransformComparisonId::kAtpCA, TransformComparisonId::kBpCB}) {
      const VerificationReport rep = check_transform_comparison(id, phi, cfg);
      INFO(rep.tag, " on ", std::string(name), " witness ", rep.witness, " slack ",
           rep.min_slack);
      CHECK(rep.pass);
    }
  }
  CHECK(check_transform_comparison(TransformComparisonId::kALeCP1,
                                   PhiFunction::p1(), cfg)
            .pass);
  CHECK_THROWS_AS(check_transform_comparison(TransformComparisonId::kALeCP1,
                                             PhiFunction::p2(), cfg),
                  std::invalid_argument);
}

TEST_CASE("comparison with a pinned sigma parameter") {
  SampleConfig cfg;
  cfg.count = 150;
  cfg.seed = 23;
  for (double p : {0.0, 0.25, 1.0}) {
    const VerificationReport rep = check_transform_comparison(
        TransformComparisonId::kSigmaALe, PhiFunction::p1(), cfg, p);
    CHECK(rep.pass);
  }
}

TEST_CASE("quadratic-family sharpness of the sigma bounds") {
  // For P2 the A(sigma_p) <= p^2 q C / 2 + p^3 A comparison is an equality:
  // A(sigma_p) = p^2 v^2 and the right side is p^2 (1-p) v^2 + p^3 v^2.
  const PhiFunction p2 = PhiFunction::p2();
  const TransformPoint pt(0.4, 2.0);
  for (double p : {0.2, 0.5, 0.9}) {
    const double lhs = transform_A(p2, apply_sigma(p, pt));
    const double rhs = 0.5 * p * p * (1.0 - p) * transform_C(p2, 0.4, 2.0) +
                       p * p * p * transform_A(p2, pt);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
  }
}

TEST_CASE("admissibility classification across the corpus") {
  SampleConfig cfg;
  cfg.count = 400;
  cfg.seed = 5;
  for (const char* name : {"P1", "P2", "P3:1.5", "POWER_MIXTURE",
                           "NEG_XLOGNEGX", "NEG_GAUSS_ISOP"}) {
    const AdmissibilityReport rep =
        admissibility(PhiFunction::from_name(name), cfg);
    INFO(std::string(name), ": ", rep.detail);
    CHECK(rep.verdict == Convexity::kAdmissible);
    CHECK(rep.hessian_consistent);
    CHECK(rep.two_point_consistent);
  }
}

TEST_CASE("negative log is rejected with a usable witness") {
  SampleConfig cfg;
  cfg.count = 400;
  cfg.seed = 5;
  const PhiFunction phi = PhiFunction::neg_log();
  const AdmissibilityReport rep = admissibility(phi, cfg);
  CHECK(rep.verdict == Convexity::kRejected);
  CHECK(rep.hessian_consistent);
  CHECK(rep.two_point_consistent);
  CHECK(!rep.detail.empty());
  CHECK(phi.contains(rep.witness_u));
  CHECK(rep.min_ratio == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("affine candidates are classified as affine") {
  const PhiFunction affine = PhiFunction::custom(
      "AFFINE_TEST", -1e9, 1e9, [](double u) { return 2.0 * u + 1.0; },
      [](double) { return 2.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; }, [](double) { return 0.0; }, -5.0, 5.0);
  SampleConfig cfg;
  cfg.count = 100;
  cfg.seed = 9;
  const AdmissibilityReport rep = admissibility(affine, cfg);
  CHECK(rep.verdict == Convexity::kAffine);
}
