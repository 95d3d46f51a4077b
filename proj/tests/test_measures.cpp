#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "philab/grid.hpp"
#include "philab/measures.hpp"
#include "philab/phi.hpp"

using namespace philab;

TEST_CASE("binomial pmf matches the closed form") {
  const DiscreteMeasure m = DiscreteMeasure::binomial(3, 0.4);
  CHECK(m.lo() == 0);
  CHECK(m.hi() == 3);
  CHECK(m.mass(0) == doctest::Approx(0.216).epsilon(1e-15));
  CHECK(m.mass(1) == doctest::Approx(0.432).epsilon(1e-15));
  CHECK(m.mass(2) == doctest::Approx(0.288).epsilon(1e-15));
  CHECK(m.mass(3) == doctest::Approx(0.064).epsilon(1e-15));
  CHECK(m.mean() == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(m.variance() == doctest::Approx(0.72).epsilon(1e-13));
}

TEST_CASE("poisson truncation keeps the stated tail mass") {
  const DiscreteMeasure m = DiscreteMeasure::poisson(2.0);
  CHECK(m.lo() == 0);
  CHECK(m.tail_bound() < 1e-13);
  for (int k = m.lo(); k <= 8; ++k) {
    const double direct = std::exp(-2.0 + k * std::log(2.0) - std::lgamma(k + 1.0));
    CHECK(m.mass(k) == doctest::Approx(direct).epsilon(1e-14));
  }
  CHECK(m.mean() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.variance() == doctest::Approx(2.0).epsilon(1e-11));

  const DiscreteMeasure big = DiscreteMeasure::poisson(50.0);
  CHECK(big.lo() > 0);  // lower tail cut engages for large intensity
  CHECK(big.mean() == doctest::Approx(50.0).epsilon(1e-11));
}

TEST_CASE("geometric pmf and moments") {
  const double r = 0.3;
  const DiscreteMeasure m = DiscreteMeasure::geometric(r);
  for (int k = 0; k <= 10; ++k) {
    CHECK(m.mass(k) ==
          doctest::Approx((1.0 - r) * std::pow(r, k)).epsilon(1e-13));
  }
  CHECK(m.mean() == doctest::Approx(r / (1.0 - r)).epsilon(1e-12));
}

TEST_CASE("bernoulli product law matches brute-force enumeration") {
  const std::vector<double> ps = {0.2, 0.5, 0.7};
  const DiscreteMeasure m = DiscreteMeasure::bernoulli_product(ps);
  std::vector<double> counts(4, 0.0);
  for (int mask = 0; mask < 8; ++mask) {
    double w = 1.0;
    int ones = 0;
    for (int i = 0; i < 3; ++i) {
      const bool on = (mask >> i) & 1;
      w *= on ? ps[i] : 1.0 - ps[i];
      ones += on ? 1 : 0;
    }
    counts[ones] += w;
  }
  for (int k = 0; k <= 3; ++k) {
    CHECK(m.mass(k) == doctest::Approx(counts[k]).epsilon(1e-15));
  }
}

TEST_CASE("binomial-poisson mixture atoms") {
  const DiscreteMeasure m = DiscreteMeasure::binomial_poisson(1, 0.3, 1.2);
  const double e = std::exp(-1.2);
  CHECK(m.mass(0) == doctest::Approx(0.7 * e).epsilon(1e-14));
  CHECK(m.mass(1) == doctest::Approx(e * (0.3 + 0.7 * 1.2)).epsilon(1e-14));
  CHECK(m.mean() == doctest::Approx(0.3 + 1.2).epsilon(1e-12));
  CHECK(m.variance() == doctest::Approx(0.3 * 0.7 + 1.2).epsilon(1e-11));
}

TEST_CASE("poisson convolution semigroup") {
  const DiscreteMeasure a = DiscreteMeasure::poisson(0.7);
  const DiscreteMeasure b = DiscreteMeasure::poisson(1.3);
  const DiscreteMeasure c = a.convolve(b);
  const DiscreteMeasure direct = DiscreteMeasure::poisson(2.0);
  CHECK(tv_distance(c, direct) < 1e-12);
}

TEST_CASE("from_weights normalizes and keeps support") {
  const DiscreteMeasure m = DiscreteMeasure::from_weights(2, {1.0, 3.0, 4.0});
  CHECK(m.lo() == 2);
  CHECK(m.hi() == 4);
  CHECK(m.mass(3) == doctest::Approx(0.375).epsilon(1e-15));
  CHECK(m.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("expectation requires a covering window") {
  const DiscreteMeasure m = DiscreteMeasure::binomial(4, 0.5);
  const GridFunction narrow = GridFunction::constant(0, 2, 1.0);
  CHECK_THROWS_AS(m.expectation(narrow), std::out_of_range);
  const GridFunction full = GridFunction::from_callable(
      0, 4, [](int k) { return static_cast<double>(k * k); });
  // E X^2 = Var + mean^2 = 1 + 4.
  CHECK(m.expectation(full) == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("phi entropy specializes to variance and vanishes on constants") {
  const DiscreteMeasure m = DiscreteMeasure::poisson(1.7);
  const GridFunction id = GridFunction::from_callable(
      m.lo(), m.hi(), [](int k) { return static_cast<double>(k); });
  CHECK(m.phi_entropy(PhiFunction::p2(), id) ==
        doctest::Approx(1.7).epsilon(1e-10));
  const GridFunction cst = GridFunction::constant(m.lo(), m.hi(), 2.5);
  CHECK(std::abs(m.phi_entropy(PhiFunction::p1(), cst)) < 1e-13);
}

TEST_CASE("total variation distance basics") {
  const DiscreteMeasure a = DiscreteMeasure::poisson(2.0);
  const DiscreteMeasure b = DiscreteMeasure::poisson(3.0);
  // Identical arguments: only the truncation-tail allowance remains.
  CHECK(tv_distance(a, a) < 2e-13);
  CHECK(tv_distance(a, b) <= 1.0 - std::exp(-1.0) + 2e-13);
  CHECK(tv_distance(a, b) > 0.2);
}

TEST_CASE("measure identity sweeps pass") {
  SampleConfig cfg;
  cfg.count = 400;
  cfg.seed = 21;
  for (MeasureIdentityId id :
       {MeasureIdentityId::kIppBin, MeasureIdentityId::kIppBinBw,
        MeasureIdentityId::kIppPoi, MeasureIdentityId::kIppBinpoi}) {
    const VerificationReport rep = check_measure_identity(id, cfg);
    INFO(rep.tag, " witness ", rep.witness, " dev ", rep.max_rel_deviation);
    CHECK(rep.pass);
    CHECK(rep.case_count >= cfg.count);
  }
}
