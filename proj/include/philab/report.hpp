#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace philab {

/// Sampling volume and seed shared by the randomized check suites.
struct SampleConfig {
  std::size_t count = 1000;
  std::uint64_t seed = 1;
};

/// Normalization scale used for relative deviations and slacks.
inline double slack_scale(double lhs, double rhs) {
  return std::max({std::fabs(lhs), std::fabs(rhs), 1e-30});
}

/// Outcome of a batch check. Identity-style checks fill the deviation fields
/// (|LHS-RHS| absolute, and relative to max(|LHS|,|RHS|,1e-30)); inequality
/// checks fill min_slack (normalized RHS-LHS, negative means a violation) and
/// max_ratio (LHS/RHS over cases with RHS > 0, i.e. observed sharpness).
/// `witness` renders the worst case seen; runs are reproducible from `seed`.
struct VerificationReport {
  std::string tag;
  std::string description;
  std::size_t case_count = 0;

  double max_abs_deviation = 0.0;
  double max_rel_deviation = 0.0;

  double min_slack = std::numeric_limits<double>::infinity();
  double max_ratio = -std::numeric_limits<double>::infinity();

  double tolerance = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
  std::string witness;
  std::string note;

  void record_deviation(double lhs, double rhs, const std::string& where) {
    ++case_count;
    const double abs_dev = std::fabs(lhs - rhs);
    const double rel_dev = abs_dev / slack_scale(lhs, rhs);
    if (abs_dev > max_abs_deviation) max_abs_deviation = abs_dev;
    if (rel_dev > max_rel_deviation) {
      max_rel_deviation = rel_dev;
      witness = where;
    }
  }

  /// Deviation normalized by an explicit scale, for identities whose two
  /// sides are both near zero (e.g. pairings against an invariant measure).
  void record_deviation_with_scale(double lhs, double rhs, double scale,
                                   const std::string& where) {
    ++case_count;
    const double abs_dev = std::fabs(lhs - rhs);
    const double rel_dev = abs_dev / std::max(std::fabs(scale), 1e-30);
    if (abs_dev > max_abs_deviation) max_abs_deviation = abs_dev;
    if (rel_dev > max_rel_deviation) {
      max_rel_deviation = rel_dev;
      witness = where;
    }
  }

  void record_slack(double lhs, double rhs, const std::string& where) {
    ++case_count;
    const double slack = (rhs - lhs) / slack_scale(lhs, rhs);
    if (slack < min_slack) {
      min_slack = slack;
      witness = where;
    }
    if (rhs > 0.0) max_ratio = std::max(max_ratio, lhs / rhs);
  }

  /// Slack normalized by an explicit noise scale, for bounds whose sides are
  /// assembled from much larger quantities (e.g. entropies, which vanish for
  /// near-constant functions while their roundoff floor stays at the Phi
  /// magnitudes).  The scale only widens the denominator; genuine violations
  /// still surface at the size of the working terms.
  void record_slack_with_scale(double lhs, double rhs, double scale,
                               const std::string& where) {
    ++case_count;
    const double denom = std::max(std::fabs(scale), slack_scale(lhs, rhs));
    const double slack = (rhs - lhs) / denom;
    if (slack < min_slack) {
      min_slack = slack;
      witness = where;
    }
    if (rhs > 0.0) max_ratio = std::max(max_ratio, lhs / rhs);
  }

  /// Verdict for identity-style reports: worst relative deviation within
  /// tolerance.
  void finish_identity() { pass = max_rel_deviation <= tolerance; }

  /// Verdict for inequality-style reports: worst normalized slack no more
  /// negative than -tolerance.
  void finish_inequality() { pass = min_slack >= -tolerance; }
};

}  // namespace philab
