// Command-line front end: runs registered check suites from a JSON config,
// lists the registries, and exposes the decay / simulation / scaling /
// spectrum curves as flat CSV files.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "philab/grid.hpp"
#include "philab/inequalities.hpp"
#include "philab/measures.hpp"
#include "philab/phi.hpp"
#include "philab/queue.hpp"
#include "philab/registry.hpp"
#include "philab/scaling.hpp"
#include "philab/serialize.hpp"
#include "philab/simulate.hpp"

namespace {

using nlohmann::json;
using namespace philab;

constexpr const char* kSeedEnvVar = "PHILAB_SEED";

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv(kSeedEnvVar);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  return std::strtoull(raw, nullptr, 10);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << text;
}

/// Linear profile through phi's sampling box; linear inputs keep the
/// quadratic-family decay exactly on its sharp exponential rate.
GridFunction box_linear(const PhiFunction& phi, int lo, int hi) {
  const double span = phi.box_hi() - phi.box_lo();
  return GridFunction::from_callable(lo, hi, [&](int k) {
    const double frac = static_cast<double>(k - lo) / std::max(1, hi - lo);
    return phi.box_lo() + span * (0.1 + 0.8 * frac);
  });
}

struct SuiteConfig {
  std::vector<std::string> phi_corpus;
  std::vector<QueueParams> queues;
  std::vector<std::string> identity_tags;
  std::vector<std::string> inequality_tags;
  std::size_t identity_cases = 200;
  std::size_t inequality_cases = 200;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::optional<double> identity_tolerance;
  std::optional<double> inequality_tolerance;
  std::string report_path = "report.json";
  std::string curves_dir = "curves";
};

bool identity_kind(CheckKind kind) {
  return kind == CheckKind::kTransformIdentity ||
         kind == CheckKind::kTransformComparison ||
         kind == CheckKind::kMeasureIdentity ||
         kind == CheckKind::kQueueIdentity;
}

std::vector<std::string> expand_tags(const std::vector<std::string>& raw,
                                     bool identities) {
  std::vector<std::string> out;
  for (const std::string& tag : raw) {
    if (tag == "all") {
      for (const CheckEntry& row : check_registry()) {
        if (identity_kind(row.kind) == identities) out.push_back(row.tag);
      }
      continue;
    }
    if (!is_known_tag(tag)) {
      std::ostringstream msg;
      msg << "unknown tag '" << tag << "'; valid tags:";
      for (const CheckEntry& row : check_registry()) msg << ' ' << row.tag;
      throw std::invalid_argument(msg.str());
    }
    out.push_back(tag);
  }
  return out;
}

SuiteConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  json doc = json::parse(in);

  SuiteConfig cfg;
  cfg.phi_corpus =
      doc.value("phi_corpus", std::vector<std::string>{"P1", "P2", "P3:1.5",
                                                       "POWER_MIXTURE"});
  if (doc.contains("queue")) {
    for (const auto& pair : doc.at("queue")) {
      cfg.queues.push_back(
          QueueParams{pair.at(0).get<double>(), pair.at(1).get<double>()});
    }
  }
  if (cfg.queues.empty()) cfg.queues.push_back(QueueParams{2.0, 1.0});
  cfg.identity_tags =
      doc.value("identity_tags", std::vector<std::string>{});
  cfg.inequality_tags =
      doc.value("inequality_tags", std::vector<std::string>{});
  if (doc.contains("cases")) {
    cfg.identity_cases = doc["cases"].value("identities", cfg.identity_cases);
    cfg.inequality_cases =
        doc["cases"].value("inequalities", cfg.inequality_cases);
  }
  if (doc.contains("seed")) {
    cfg.seed = doc["seed"].get<std::uint64_t>();
    cfg.has_seed = true;
  }
  if (doc.contains("tolerances")) {
    if (doc["tolerances"].contains("identity")) {
      cfg.identity_tolerance = doc["tolerances"]["identity"].get<double>();
    }
    if (doc["tolerances"].contains("inequality")) {
      cfg.inequality_tolerance =
          doc["tolerances"]["inequality"].get<double>();
    }
  }
  if (doc.contains("outputs")) {
    cfg.report_path = doc["outputs"].value("report", cfg.report_path);
    cfg.curves_dir = doc["outputs"].value("curves_dir", cfg.curves_dir);
  }
  return cfg;
}

void apply_tolerance_overrides(const SuiteConfig& cfg,
                               std::vector<VerificationReport>& reports) {
  if (!cfg.identity_tolerance && !cfg.inequality_tolerance) return;
  for (VerificationReport& rep : reports) {
    CheckKind kind = CheckKind::kAdmissibility;
    for (const CheckEntry& row : check_registry()) {
      if (row.tag == rep.tag) {
        kind = row.kind;
        break;
      }
    }
    if (identity_kind(kind) && cfg.identity_tolerance) {
      rep.tolerance = *cfg.identity_tolerance;
      rep.finish_identity();
    } else if ((kind == CheckKind::kInequality ||
                kind == CheckKind::kLocalInequality) &&
               cfg.inequality_tolerance) {
      rep.tolerance = *cfg.inequality_tolerance;
      rep.finish_inequality();
    }
  }
}

void write_curves(const SuiteConfig& cfg, std::uint64_t seed) {
  const std::filesystem::path dir(cfg.curves_dir);
  const QueueParams queue = cfg.queues.front();
  if (queue.mu <= 0.0 || queue.lambda <= 0.0) return;

  std::vector<double> times;
  for (int i = 0; i <= 30; ++i) times.push_back(0.1 * i);

  {
    const PhiFunction phi = PhiFunction::p2();
    const auto [lo, hi] = std::pair<int, int>{
        0, DiscreteMeasure::poisson(queue.rho(), 1e-13).hi() + 40};
    const GridFunction f = box_linear(phi, lo, hi);
    write_file(dir / "decay.csv",
               decay_curve_csv(entropy_decay_curve(queue, phi, f, times)));
  }
  write_file(dir / "theta.csv", theta_curve_csv(theta_curve(queue, times)));
  {
    std::vector<TvPoint> tv;
    const DiscreteMeasure equilibrium =
        DiscreteMeasure::poisson(queue.rho(), 1e-13);
    const int n0 = 5;
    const double rel_ent = queue.rho() - n0 * std::log(queue.rho()) +
                           std::lgamma(n0 + 1.0);
    for (double t : times) {
      if (t <= 0.0) continue;
      const double d = tv_distance(mehler_law(queue, t, n0, 1e-13),
                                   equilibrium);
      tv.push_back({t, 2.0 * d * d,
                    std::exp(-queue.mu * t) * rel_ent});
    }
    write_file(dir / "tv.csv", tv_curve_csv(tv));
  }
  {
    const PhiFunction phi = PhiFunction::p1();
    auto g = [](double y) { return 2.0 + std::tanh(0.5 * y); };
    auto gp = [](double y) {
      const double c = std::cosh(0.5 * y);
      return 0.5 / (c * c);
    };
    write_file(dir / "scaling.csv",
               scaling_csv(poisson_to_gauss(phi, queue.rho(), g, gp,
                                            {10, 40, 160, 640})));
  }
  (void)seed;
}

int cmd_run(const std::string& config_path,
            std::optional<std::uint64_t> seed_flag,
            const std::string& argv_line) {
  SuiteConfig cfg = parse_config(config_path);
  std::uint64_t seed = 0;
  if (seed_flag) {
    seed = *seed_flag;
  } else if (auto env = env_seed()) {
    seed = *env;
  } else if (cfg.has_seed) {
    seed = cfg.seed;
  } else {
    throw std::invalid_argument(
        "config must pin a seed (\"seed\": N); wall-clock entropy is not "
        "used");
  }

  std::vector<std::string> tags = expand_tags(cfg.identity_tags, true);
  const std::vector<std::string> ineq =
      expand_tags(cfg.inequality_tags, false);
  tags.insert(tags.end(), ineq.begin(), ineq.end());
  if (tags.empty()) {
    throw std::invalid_argument(
        "config selects no tags; set identity_tags and/or inequality_tags "
        "(\"all\" expands each group)");
  }

  std::vector<VerificationReport> reports;
  for (const std::string& tag : tags) {
    RunOptions options;
    options.phi_names = cfg.phi_corpus;
    options.seed = seed;
    options.inputs = RunOptions::default_run_inputs();
    options.inputs.queue = cfg.queues.front();
    CheckKind kind = CheckKind::kAdmissibility;
    for (const CheckEntry& row : check_registry()) {
      if (row.tag == tag) kind = row.kind;
    }
    options.cases =
        identity_kind(kind) ? cfg.identity_cases : cfg.inequality_cases;
    std::vector<VerificationReport> batch = run_check(tag, options);
    reports.insert(reports.end(), batch.begin(), batch.end());
  }
  apply_tolerance_overrides(cfg, reports);

  RunMeta meta;
  meta.timestamp_utc = current_utc_timestamp();
  meta.command = argv_line;
  meta.config_path = config_path;
  write_file(cfg.report_path, suite_report_json(meta, reports));
  write_curves(cfg, seed);

  std::size_t failed = 0;
  for (const VerificationReport& rep : reports) {
    if (!rep.pass) {
      ++failed;
      std::cerr << "FAIL " << rep.tag << " [" << rep.description
                << "] witness: " << rep.witness << " note: " << rep.note
                << "\n";
    }
  }
  std::cout << "checked " << reports.size() << " suites, " << failed
            << " failed; report: " << cfg.report_path << "\n";
  return all_pass(reports) ? 0 : 1;
}

int cmd_list(const std::string& which) {
  if (which == "phis") {
    for (const std::string& name : known_phi_names()) {
      const PhiFunction phi = PhiFunction::from_name(name);
      std::cout << name << "\tinterval (" << phi.interval_lo() << ", "
                << phi.interval_hi() << ")\tbox [" << phi.box_lo() << ", "
                << phi.box_hi() << "]\n";
    }
    return 0;
  }
  const bool identities = which == "identities";
  if (!identities && which != "inequalities") {
    std::cerr << "list expects one of: identities, inequalities, phis\n";
    return 2;
  }
  for (const CheckEntry& row : check_registry()) {
    if (identity_kind(row.kind) != identities) continue;
    std::cout << row.tag << '\t' << to_label(row.kind) << '\t'
              << row.description << '\n';
  }
  return 0;
}

int cmd_decay(double lambda, double mu, const std::string& phi_name,
              double t_max, int steps, const std::string& out) {
  const QueueParams queue{lambda, mu};
  const PhiFunction phi = PhiFunction::from_name(phi_name);
  std::vector<double> times;
  for (int i = 0; i <= steps; ++i) times.push_back(t_max * i / steps);
  const int hi = DiscreteMeasure::poisson(queue.rho(), 1e-13).hi() + 40;
  const GridFunction f = box_linear(phi, 0, hi);
  const std::string csv =
      decay_curve_csv(entropy_decay_curve(queue, phi, f, times));
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, csv);
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int cmd_simulate(double lambda, double mu, int n0, double t,
                 std::size_t paths, std::uint64_t seed,
                 const std::string& out) {
  const QueueParams queue{lambda, mu};
  const DiscreteMeasure empirical = empirical_law(queue, n0, t, paths, seed);
  const DiscreteMeasure exact = mehler_law(queue, t, n0, 1e-13);
  const double tv = tv_distance(empirical, exact);
  std::cout << "paths=" << paths << " t=" << t << " n0=" << n0
            << " empirical_mean=" << empirical.mean()
            << " exact_mean=" << exact.mean() << " tv=" << tv << "\n";
  if (!out.empty()) {
    std::ostringstream csv;
    csv << "k,empirical,exact\n";
    const int lo = std::min(empirical.lo(), exact.lo());
    const int hi = std::max(empirical.hi(), exact.hi());
    for (int k = lo; k <= hi; ++k) {
      csv << k << ',' << empirical.mass(k) << ',' << exact.mass(k) << '\n';
    }
    write_file(out, csv.str());
    std::cout << "wrote " << out << "\n";
  }
  return 0;
}

int cmd_scaling(const std::string& phi_name, double rho,
                std::vector<int> n_grid, double t, double y,
                const std::string& out, const std::string& ou_out) {
  const PhiFunction phi = PhiFunction::from_name(phi_name);
  auto g = [](double u) { return 2.0 + std::tanh(0.5 * u); };
  auto gp = [](double u) {
    const double c = std::cosh(0.5 * u);
    return 0.5 / (c * c);
  };
  if (n_grid.empty()) n_grid = {10, 100, 1000};
  const ScalingReport report = poisson_to_gauss(phi, rho, g, gp, n_grid);
  if (out.empty()) {
    std::cout << scaling_csv(report);
  } else {
    write_file(out, scaling_csv(report));
    std::cout << "wrote " << out << "\n";
  }
  if (!ou_out.empty()) {
    const QueueParams queue{rho, 1.0};
    const OuLocalReport ou =
        ou_local_check(phi, queue, y, t, g, gp, n_grid);
    write_file(ou_out, ou_local_csv(ou));
    std::cout << "wrote " << ou_out << "\n";
  }
  return 0;
}

int cmd_spectrum(double lambda, double mu, int trunc) {
  const QueueParams queue{lambda, mu};
  const double gap = spectral_gap(queue, trunc);
  const double rel = std::fabs(gap - mu) / mu;
  std::cout << "lambda=" << lambda << " mu=" << mu << " trunc=" << trunc
            << " gap=" << gap << " rel_dev_from_mu=" << rel << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Numerical laboratory for discrete phi-entropy bounds and the "
      "infinite-server birth-death semigroup"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_flag;
  auto* run = app.add_subcommand("run", "run suites from a JSON config");
  run->add_option("--config", config_path, "suite config path")->required();
  std::uint64_t seed_value = 0;
  auto* seed_opt =
      run->add_option("--seed", seed_value,
                      "override the config / " + std::string(kSeedEnvVar) +
                          " seed");

  std::string list_which;
  auto* list = app.add_subcommand("list", "list a registry");
  list->add_option("registry", list_which,
                   "identities | inequalities | phis")
      ->required();

  double lambda = 2.0, mu = 1.0, t_max = 3.0, t = 1.0, rho = 2.0, y = 0.0;
  int steps = 30, n0 = 5, trunc = 300;
  std::size_t paths = 10000;
  std::uint64_t seed = 1;
  std::string out, ou_out, phi_name = "P2";
  std::vector<int> n_grid;

  auto* decay = app.add_subcommand("decay", "entropy decay curve as CSV");
  decay->add_option("--lambda", lambda);
  decay->add_option("--mu", mu);
  decay->add_option("--phi", phi_name);
  decay->add_option("--t-max", t_max);
  decay->add_option("--steps", steps);
  decay->add_option("--out", out);

  auto* simulate =
      app.add_subcommand("simulate", "Monte Carlo law vs the exact law");
  simulate->add_option("--lambda", lambda);
  simulate->add_option("--mu", mu);
  simulate->add_option("--n0", n0);
  simulate->add_option("--t", t);
  simulate->add_option("--paths", paths);
  simulate->add_option("--seed", seed);
  simulate->add_option("--out", out);

  auto* scaling =
      app.add_subcommand("scaling", "central-limit rescaling sequences");
  scaling->add_option("--phi", phi_name);
  scaling->add_option("--rho", rho);
  scaling->add_option("--n-grid", n_grid);
  scaling->add_option("--t", t);
  scaling->add_option("--y", y);
  scaling->add_option("--out", out);
  scaling->add_option("--ou-out", ou_out);

  auto* spectrum =
      app.add_subcommand("spectrum", "truncated spectral gap vs mu");
  spectrum->add_option("--lambda", lambda);
  spectrum->add_option("--mu", mu);
  spectrum->add_option("--trunc", trunc);

  CLI11_PARSE(app, argc, argv);

  std::ostringstream argv_line;
  for (int i = 0; i < argc; ++i) {
    if (i) argv_line << ' ';
    argv_line << argv[i];
  }

  try {
    if (run->parsed()) {
      if (seed_opt->count() > 0) seed_flag = seed_value;
      return cmd_run(config_path, seed_flag, argv_line.str());
    }
    if (list->parsed()) return cmd_list(list_which);
    if (decay->parsed())
      return cmd_decay(lambda, mu, phi_name, t_max, steps, out);
    if (simulate->parsed()) {
      if (auto env = env_seed(); env && simulate->get_option("--seed")
                                            ->count() == 0) {
        seed = *env;
      }
      return cmd_simulate(lambda, mu, n0, t, paths, seed, out);
    }
    if (scaling->parsed())
      return cmd_scaling(phi_name, rho, n_grid, t, y, out, ou_out);
    if (spectrum->parsed()) return cmd_spectrum(lambda, mu, trunc);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
