#pragma once

#include <string>
#include <vector>

#include "philab/queue.hpp"
#include "philab/report.hpp"
#include "philab/scaling.hpp"

namespace philab {

/// Volatile run facts.  Everything in here stays inside the report's "meta"
/// block so the rest of the document is a pure function of config + seeds.
struct RunMeta {
  std::string timestamp_utc;
  std::string command;
  std::string config_path;
};

std::string current_utc_timestamp();

/// {"meta": {...}, "results": [...], "summary": {...}} with stable key
/// order and round-trip float formatting; non-finite slack/ratio fields are
/// omitted rather than serialized.
std::string suite_report_json(const RunMeta& meta,
                              const std::vector<VerificationReport>& reports);

bool all_pass(const std::vector<VerificationReport>& reports);

std::string decay_curve_csv(const std::vector<DecayPoint>& curve);

std::string theta_curve_csv(const std::vector<ThetaPoint>& curve);

struct TvPoint {
  double t = 0.0;
  double value = 0.0;  ///< 2 TV^2 between the evolved law and equilibrium
  double bound = 0.0;  ///< discounted relative-entropy bound
};

std::string tv_curve_csv(const std::vector<TvPoint>& curve);

std::string scaling_csv(const ScalingReport& report);

std::string ou_local_csv(const OuLocalReport& report);

}  // namespace philab
