#include <cmath>
#include <vector>

#include "doctest.h"
#include "philab/numerics.hpp"

using namespace philab;

TEST_CASE("log-space addition matches naive evaluation in range") {
  CHECK(log_add(std::log(2.0), std::log(3.0)) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-14));
  // Far apart: naive exp would underflow, result keeps the larger term.
  CHECK(log_add(0.0, -800.0) == doctest::Approx(0.0).epsilon(1e-15));
  const std::vector<double> xs{-1.0, -2.0, -3.0, -4.0};
  double naive = 0.0;
  for (double x : xs) naive += std::exp(x);
  CHECK(log_sum_exp(xs) == doctest::Approx(std::log(naive)).epsilon(1e-14));
}

TEST_CASE("compensated summation survives catastrophic cancellation") {
  NeumaierSum sum;
  sum.add(1e16);
  sum.add(1.0);
  sum.add(-1e16);
  CHECK(sum.value() == 1.0);

  NeumaierSum harmonic;
  long double reference = 0.0L;
  for (int k = 1; k <= 100000; ++k) {
    harmonic.add(1.0 / k);
    reference += 1.0L / k;
  }
  CHECK(harmonic.value() ==
        doctest::Approx(static_cast<double>(reference)).epsilon(1e-15));
}

TEST_CASE("rng streams are deterministic and independent") {
  RngStream a(42, 0);
  RngStream b(42, 0);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream c(42, 1);
  RngStream d(42, 0);
  bool any_different = false;
  for (int i = 0; i < 10; ++i) any_different |= (c.next_u64() != d.next_u64());
  CHECK(any_different);

  RngStream e(7, 3);
  for (int i = 0; i < 1000; ++i) {
    const double u = e.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = e.uniform(2.0, 5.0);
    CHECK(v >= 2.0);
    CHECK(v < 5.0);
    CHECK(e.below(13) < 13);
    CHECK(e.exponential(2.0) >= 0.0);
  }
}

TEST_CASE("rng empirical moments at a fixed seed") {
  RngStream rng(2024, 0);
  const int n = 200000;
  double mean_exp = 0.0;
  int heads = 0;
  for (int i = 0; i < n; ++i) {
    mean_exp += rng.exponential(0.5);
    heads += rng.bernoulli(0.3) ? 1 : 0;
  }
  mean_exp /= n;
  // Exp(rate 0.5) has mean 2 and sd 2: 4 standard errors ~ 0.018.
  CHECK(std::fabs(mean_exp - 2.0) < 0.02);
  CHECK(std::fabs(heads / static_cast<double>(n) - 0.3) < 0.005);
}

TEST_CASE("quadrature integrates smooth functions to tight tolerance") {
  CHECK(gauss_legendre_panel([](double x) { return x * x; }, 0.0, 1.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const QuadratureResult sine =
      integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(sine.converged);
  CHECK(sine.value == doctest::Approx(2.0).epsilon(1e-13));

  const QuadratureResult expo = integrate_adaptive(
      [](double x) { return std::exp(x); }, 0.0, 1.0, 1e-13, 1e-13);
  CHECK(expo.converged);
  CHECK(expo.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
  CHECK(expo.evaluations > 0);
}

TEST_CASE("tridiagonal eigenvalues against closed forms") {
  const std::vector<double> eig2 =
      tridiagonal_eigenvalues({2.0, 2.0}, {1.0});
  REQUIRE(eig2.size() == 2);
  CHECK(eig2[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig2[1] == doctest::Approx(3.0).epsilon(1e-12));

  const std::vector<double> eig3 =
      tridiagonal_eigenvalues({2.0, 2.0, 2.0}, {1.0, 1.0});
  REQUIRE(eig3.size() == 3);
  CHECK(eig3[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(eig3[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(eig3[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("hermite rule hits gaussian moments") {
  const HermiteRule rule = gauss_hermite(64);
  REQUIRE(rule.nodes.size() == 64);
  double mass = 0.0, second = 0.0, fourth = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i];
    mass += rule.weights[i];
    second += rule.weights[i] * x * x;
    fourth += rule.weights[i] * x * x * x * x;
  }
  const double root_pi = 1.7724538509055159;
  CHECK(mass == doctest::Approx(root_pi).epsilon(1e-14));
  CHECK(second == doctest::Approx(root_pi / 2.0).epsilon(1e-13));
  CHECK(fourth == doctest::Approx(0.75 * root_pi).epsilon(1e-13));
}

TEST_CASE("normal quantile and cdf are mutually inverse") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  for (double p : {1e-6, 0.01, 0.25, 0.5, 0.8, 0.999, 1.0 - 1e-9}) {
    CHECK(normal_cdf(normal_quantile(p)) ==
          doctest::Approx(p).epsilon(1e-11));
  }
  CHECK(normal_cdf(1.959963984540054) ==
        doctest::Approx(0.975).epsilon(1e-12));
}

TEST_CASE("kolmogorov tail against the alternating series") {
  // Reference values from the textbook series 2 sum (-1)^{k-1} e^{-2k^2x^2}.
  CHECK(kolmogorov_tail(0.5) ==
        doctest::Approx(0.963945243664875).epsilon(1e-10));
  CHECK(kolmogorov_tail(1.0) ==
        doctest::Approx(0.269999671677355).epsilon(1e-10));
  CHECK(kolmogorov_tail(1.36) ==
        doctest::Approx(0.049485876755378).epsilon(1e-10));
  CHECK(kolmogorov_tail(8.0) == doctest::Approx(0.0).epsilon(1e-15));
}
