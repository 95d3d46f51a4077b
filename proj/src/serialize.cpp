#include "philab/serialize.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "json.hpp"

namespace philab {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string num(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

ordered_json report_to_json(const VerificationReport& rep) {
  ordered_json row;
  row["tag"] = rep.tag;
  row["description"] = rep.description;
  row["pass"] = rep.pass;
  row["cases"] = rep.case_count;
  row["seed"] = rep.seed;
  row["tolerance"] = rep.tolerance;
  row["max_abs_deviation"] = rep.max_abs_deviation;
  row["max_rel_deviation"] = rep.max_rel_deviation;
  if (std::isfinite(rep.min_slack)) row["min_slack"] = rep.min_slack;
  if (std::isfinite(rep.max_ratio)) row["max_ratio"] = rep.max_ratio;
  if (!rep.witness.empty()) row["witness"] = rep.witness;
  if (!rep.note.empty()) row["note"] = rep.note;
  return row;
}

}  // namespace

std::string current_utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

std::string suite_report_json(
    const RunMeta& meta, const std::vector<VerificationReport>& reports) {
  ordered_json doc;
  ordered_json meta_block;
  meta_block["timestamp_utc"] = meta.timestamp_utc;
  meta_block["command"] = meta.command;
  meta_block["config"] = meta.config_path;
  doc["meta"] = meta_block;

  ordered_json results = ordered_json::array();
  std::size_t passed = 0;
  for (const VerificationReport& rep : reports) {
    results.push_back(report_to_json(rep));
    if (rep.pass) ++passed;
  }
  doc["results"] = results;

  ordered_json summary;
  summary["total"] = reports.size();
  summary["passed"] = passed;
  summary["failed"] = reports.size() - passed;
  summary["all_pass"] = passed == reports.size();
  doc["summary"] = summary;
  return doc.dump(2) + "\n";
}

bool all_pass(const std::vector<VerificationReport>& reports) {
  for (const VerificationReport& rep : reports) {
    if (!rep.pass) return false;
  }
  return true;
}

std::string decay_curve_csv(const std::vector<DecayPoint>& curve) {
  std::ostringstream out;
  out << "t,value,bound\n";
  for (const DecayPoint& point : curve) {
    out << num(point.t) << ',' << num(point.entropy) << ','
        << num(point.bound) << '\n';
  }
  return out.str();
}

std::string theta_curve_csv(const std::vector<ThetaPoint>& curve) {
  std::ostringstream out;
  out << "t,k_band,k_refined,theta\n";
  for (const ThetaPoint& point : curve) {
    out << num(point.t) << ',' << num(point.k_band) << ','
        << num(point.k_refined) << ',' << num(point.theta) << '\n';
  }
  return out.str();
}

std::string tv_curve_csv(const std::vector<TvPoint>& curve) {
  std::ostringstream out;
  out << "t,value,bound\n";
  for (const TvPoint& point : curve) {
    out << num(point.t) << ',' << num(point.value) << ','
        << num(point.bound) << '\n';
  }
  return out.str();
}

std::string scaling_csv(const ScalingReport& report) {
  std::ostringstream out;
  out << "N,lhs,rhs,lhs_target,rhs_target,lhs_gap,rhs_gap\n";
  for (std::size_t i = 0; i < report.n_grid.size(); ++i) {
    out << report.n_grid[i] << ',' << num(report.lhs_sequence[i]) << ','
        << num(report.rhs_sequence[i]) << ',' << num(report.lhs_target)
        << ',' << num(report.rhs_target) << ',' << num(report.lhs_gap[i])
        << ',' << num(report.rhs_gap[i]) << '\n';
  }
  return out.str();
}

std::string ou_local_csv(const OuLocalReport& report) {
  std::ostringstream out;
  out << "N,entropy,k_band_literal,k_band,k_refined,theta_ratio,"
         "k_band_target,k_refined_target,theta_target\n";
  for (std::size_t i = 0; i < report.n_grid.size(); ++i) {
    out << report.n_grid[i] << ',' << num(report.entropy[i]) << ','
        << num(report.k_band_literal[i]) << ',' << num(report.k_band[i])
        << ',' << num(report.k_refined[i]) << ','
        << num(report.theta_ratio[i]) << ',' << num(report.k_band_target)
        << ',' << num(report.k_refined_target) << ','
        << num(report.theta_target) << '\n';
  }
  return out.str();
}

}  // namespace philab
