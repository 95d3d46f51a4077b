#include "philab/numerics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace philab {

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_sum_exp(std::span<const double> xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  NeumaierSum acc;
  for (double x : xs) acc.add(std::exp(x - m));
  return m + std::log(acc.value());
}

// ---------------------------------------------------------------------------
// RNG
// ---------------------------------------------------------------------------
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  counter_ = mix64(seed + kGolden) ^ mix64(stream * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
  // Distinct odd increment per stream keeps sequences decorrelated even for
  // adjacent stream indices.
  gamma_ = (mix64(counter_ ^ (stream + kGolden)) | 1ULL);
}

std::uint64_t RngStream::next_u64() {
  counter_ += gamma_;
  return mix64(counter_);
}

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  double u;
  do {
    u = uniform01();
  } while (u <= 0.0);
  return -std::log(u) / rate;
}

bool RngStream::bernoulli(double p) { return uniform01() < p; }

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("below: n must be positive");
  // Rejection-free modulo is fine here: n is tiny relative to 2^64 in all uses.
  return next_u64() % n;
}

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------
namespace {

// 16-point Gauss-Legendre abscissae/weights on [-1, 1] (positive half; the
// rule is symmetric).
constexpr int kGlOrder = 16;
constexpr double kGlX[8] = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
constexpr double kGlW[8] = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

double gl_panel(const std::function<double(double)>& f, double a, double b, int* evals) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  NeumaierSum acc;
  for (int i = 0; i < kGlOrder / 2; ++i) {
    acc.add(kGlW[i] * f(c - h * kGlX[i]));
    acc.add(kGlW[i] * f(c + h * kGlX[i]));
  }
  if (evals) *evals += kGlOrder;
  return h * acc.value();
}

void adapt(const std::function<double(double)>& f, double a, double b, double whole,
           double abs_tol, double rel_tol, int depth, int max_depth, QuadratureResult* out) {
  double m = 0.5 * (a + b);
  double left = gl_panel(f, a, m, &out->evaluations);
  double right = gl_panel(f, m, b, &out->evaluations);
  double diff = std::abs(left + right - whole);
  double gate = std::max(abs_tol, rel_tol * std::abs(left + right));
  if (diff <= gate || depth >= max_depth) {
    out->value += left + right;
    out->error_estimate += diff;
    if (diff > gate) out->converged = false;
    return;
  }
  adapt(f, a, m, left, 0.5 * abs_tol, rel_tol, depth + 1, max_depth, out);
  adapt(f, m, b, right, 0.5 * abs_tol, rel_tol, depth + 1, max_depth, out);
}

}  // namespace

double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b) {
  return gl_panel(f, a, b, nullptr);
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, double rel_tol, int max_depth) {
  QuadratureResult out;
  if (a == b) return out;
  double whole = gl_panel(f, a, b, &out.evaluations);
  adapt(f, a, b, whole, abs_tol, rel_tol, 0, max_depth, &out);
  return out;
}

// ---------------------------------------------------------------------------
// Symmetric tridiagonal eigenvalues / Gauss-Hermite
// ---------------------------------------------------------------------------
std::vector<double> tridiagonal_eigenvalues(const std::vector<double>& diag,
                                            const std::vector<double>& off) {
  const auto m = static_cast<Eigen::Index>(diag.size());
  if (off.size() + 1 != diag.size()) {
    throw std::invalid_argument("tridiagonal_eigenvalues: off must have size diag.size()-1");
  }
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), m);
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(off.data(), m - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("tridiagonal_eigenvalues: eigensolver failed");
  }
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + m);
  std::sort(ev.begin(), ev.end());
  return ev;
}

HermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  // Jacobi matrix of the (physicists') Hermite polynomials: zero diagonal,
  // off-diagonal sqrt(k/2); eigenvalues are the nodes and the squared first
  // eigenvector components give the weights (Golub-Welsch).
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd e(n - 1 > 0 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gauss_hermite: eigensolver failed");
  }
  const double mu0 = std::sqrt(std::acos(-1.0));  // integral of e^{-x^2}
  HermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()[i];
    double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Normal quantile / CDF, Kolmogorov tail
// ---------------------------------------------------------------------------
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0,1)");
  // Acklam's rational approximation (~1.15e-9 relative), then one Halley step.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley refinement on F(x) - p.
  double e = normal_cdf(x) - p;
  double u = e * std::sqrt(2.0 * std::acos(-1.0)) * std::exp(0.5 * x * x);
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // Jacobi-transformed form: a couple of terms suffice for small x, where
    // the alternating series would need thousands to clear its cap.
    const double pi = std::acos(-1.0);
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * pi * pi / (8.0 * x * x));
      if (term < 1e-18 * sum) break;
      sum += term;
    }
    const double cdf = std::sqrt(2.0 * pi) / x * sum;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace philab
