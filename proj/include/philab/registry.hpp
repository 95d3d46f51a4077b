#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "philab/inequalities.hpp"
#include "philab/report.hpp"

namespace philab {

enum class CheckKind {
  kTransformIdentity,
  kTransformComparison,
  kMeasureIdentity,
  kQueueIdentity,
  kLocalInequality,
  kInequality,
  kAdmissibility,
};

std::string_view to_label(CheckKind kind);

struct CheckEntry {
  CheckKind kind;
  std::string tag;
  std::string description;
};

/// Every runnable tag, in a stable order, with a one-line account of what
/// it verifies.
const std::vector<CheckEntry>& check_registry();

bool is_known_tag(std::string_view tag);

/// Names of the stock entropy-generating functions `run` understands.
std::vector<std::string> known_phi_names();

/// Shared runner options; the phi corpus applies to the phi-dependent
/// families and `inputs` seeds the inequality evaluators (including the
/// queue rates for the dynamic tags).
struct RunOptions {
  std::vector<std::string> phi_names{"P1", "P2", "P3:1.5", "POWER_MIXTURE"};
  std::size_t cases = 200;
  std::uint64_t seed = 1;
  IneqInputs inputs = default_run_inputs();

  static IneqInputs default_run_inputs();
};

/// Runs every check registered under `tag`: one report per applicable phi
/// for the phi-dependent families, a single report otherwise.  Unknown tags
/// raise std::invalid_argument listing the valid ones.
std::vector<VerificationReport> run_check(const std::string& tag,
                                          const RunOptions& options);

}  // namespace philab
