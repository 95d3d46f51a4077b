#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "philab/grid.hpp"
#include "philab/measures.hpp"
#include "philab/phi.hpp"
#include "philab/queue.hpp"
#include "philab/report.hpp"
#include "philab/transforms.hpp"

namespace philab {

enum class InequalityId {
  kTwoPointA,      ///< two-point entropy vs pq-weighted A (gradient mod 2)
  kTwoPointB,      ///< two-point entropy vs pq-weighted B
  kBernProduct,    ///< Bernoulli-sum entropy vs max(p_i q_i) mixed A-bracket
  kBinomial,       ///< binomial entropy vs pq mixed A-bracket
  kBinomialAlt,    ///< binomial entropy vs npq bracket on the (n-1)-law
  kPoissonA,       ///< Poisson entropy vs rho <A(f, Df)>
  kPoissonBLimit,  ///< Poisson entropy vs rho <B(f, Df)>
  kBinPoi,         ///< binomial-plus-Poisson entropy vs two-term bracket
  kEntropyDecay,   ///< evolved entropy vs e^{-c mu t} initial entropy
  kTvEnt,          ///< 2 TV^2 vs e^{-mu t} relative-entropy bound
  kMixedBcLimit,   ///< Poisson entropy vs (rho/2) <(2/3) B + (1/3) C>
  kGamma2Ge,       ///< Gamma_2 >= (mu/2) Gamma pointwise and integrated
  kTensorisation,  ///< entropy subadditivity on a Bernoulli x Poisson product
  kVariational,    ///< entropy as a supremum over tangent comparisons
};

std::string_view to_tag(InequalityId id);
InequalityId inequality_from_tag(std::string_view tag);

/// Parameters consumed tag-by-tag: p/n for Bernoulli-binomial laws, rho for
/// Poisson factors, ps for Bernoulli products, queue rates plus t for the
/// dynamic bounds.
struct IneqInputs {
  double p = 0.5;
  int n = 1;
  double rho = 1.0;
  double t = 1.0;
  std::vector<double> ps;
  QueueParams queue{1.0, 1.0};
};

/// Window [lo, hi] a test function must cover for the tagged bound with the
/// given parameters (state window of the underlying law, plus the gradient
/// margin where the bracket reads f one step above).
std::pair<int, int> inequality_window(InequalityId id,
                                      const IneqInputs& inputs);

/// Fully evaluates one case: the report's witness carries both sides.
/// `f_second` supplies the second section for kTensorisation and an explicit
/// comparison function g for kVariational (defaults to g = f, the equality
/// case); other tags ignore it.
VerificationReport evaluate_inequality(InequalityId id, const PhiFunction& phi,
                                       const IneqInputs& inputs,
                                       const GridFunction& f,
                                       const GridFunction* f_second = nullptr);

/// Randomized sweep with f drawn from the sampler on the tag's natural
/// window (parameters stay fixed).
VerificationReport sweep_inequality(InequalityId id, const PhiFunction& phi,
                                    const IneqInputs& inputs,
                                    const SamplerSpec& sampler,
                                    const SampleConfig& config);

/// Derivative endpoints and dense-grid maximum of
/// U(p) = Ent_{Bernoulli(p)}[f] - p q <Bernoulli(p), g>
/// for two-point functions f = (f0, f1), g = (g0, g1).
struct TwoPointUReport {
  double u_prime_0 = 0.0;  ///< A(f0, f1 - f0) - g0
  double u_prime_1 = 0.0;  ///< g1 - A(f1, f0 - f1)
  bool endpoints_pass = false;  ///< U'(0) <= 0 <= U'(1)
  bool dense_pass = false;      ///< U <= 0 across the p-grid
  bool equivalent = false;      ///< the two criteria agree
  double max_u = 0.0;
  double argmax_p = 0.0;
};

TwoPointUReport two_point_u(const PhiFunction& phi, double f0, double f1,
                            double g0, double g1, std::size_t p_grid);

/// Derivative-free coordinate search maximizing LHS/RHS from the given
/// start, values projected into phi's sampling box.  Supports the
/// single-function static tags (two-point, product, binomial, Poisson and
/// binomial-Poisson families).
struct ExtremalResult {
  GridFunction f_star;
  double ratio = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
};

ExtremalResult find_extremal(InequalityId id, const PhiFunction& phi,
                             const IneqInputs& inputs,
                             const GridFunction& init, std::size_t budget);

/// Empirical best constant c in  c mu Ent_Q[f] <= lambda <Q, B(f, Df)>,
/// Q = Poisson(lambda/mu): the infimum of the ratio over sampler draws, a
/// pinned linear profile, and coordinate-descent refinements (5 restarts).
double best_constant(const PhiFunction& phi, const QueueParams& params,
                     const SamplerSpec& sampler, std::size_t budget,
                     std::uint64_t seed = 1);

}  // namespace philab
