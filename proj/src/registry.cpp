#include "philab/registry.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "philab/grid.hpp"
#include "philab/measures.hpp"
#include "philab/queue.hpp"
#include "philab/transforms.hpp"

namespace philab {
namespace {

std::vector<CheckEntry> build_registry() {
  std::vector<CheckEntry> rows;
  auto add = [&](CheckKind kind, std::string_view tag,
                 std::string_view text) {
    rows.push_back({kind, std::string(tag), std::string(text)});
  };

  add(CheckKind::kTransformIdentity, "ABC_SUM",
      "A plus its tau-reflection equals B");
  add(CheckKind::kTransformIdentity, "B_TAU_INV",
      "B is invariant under the endpoint swap tau");
  add(CheckKind::kTransformIdentity, "SIGMA_C_SQ",
      "C scales quadratically under the v-scaling sigma_p");
  add(CheckKind::kTransformIdentity, "INT_REP_A",
      "A is the (1-p)-weighted integral of C along the chord");
  add(CheckKind::kTransformIdentity, "INT_REP_B",
      "B is the integral of C along the chord");
  add(CheckKind::kTransformIdentity, "SMALL_V_ASYMP",
      "small-v limits: A over (C eps^2) tends to 1/2 and the B ratio to 1");
  add(CheckKind::kTransformIdentity, "ENT_TWOP",
      "two-atom entropy equals p A(u,v) minus A(u,pv)");
  add(CheckKind::kTransformIdentity, "ADTAU",
      "the backward-difference pair at n+1 is tau of the forward pair at n");
  add(CheckKind::kTransformIdentity, "P2_COLLAPSE",
      "quadratic-family collapse 2A = B = C");

  add(CheckKind::kTransformComparison, "A_LE_B", "A never exceeds B");
  add(CheckKind::kTransformComparison, "A_LE_C_P1",
      "A never exceeds C for the u log u family");
  add(CheckKind::kTransformComparison, "C_THIRD_LE_2A",
      "C at the one-third point never exceeds 2A");
  add(CheckKind::kTransformComparison, "C_HALF_LE_B",
      "C at the midpoint never exceeds B");
  add(CheckKind::kTransformComparison, "SIGMA_A_LE",
      "A contracts at least linearly under sigma_p");
  add(CheckKind::kTransformComparison, "SIGMA_B_LE",
      "B contracts at least linearly under sigma_p");
  add(CheckKind::kTransformComparison, "PA_MINUS_AP",
      "the sigma_p defect of A is controlled by a pq mixture of A values");
  add(CheckKind::kTransformComparison, "AP_C_A",
      "A after sigma_p is at most p^2 q C / 2 plus p^3 A");
  add(CheckKind::kTransformComparison, "ATP_C_A",
      "A after tau sigma_p is at most p^2 q C / 2 plus p^3 A tau");
  add(CheckKind::kTransformComparison, "BP_C_B",
      "B after sigma_p is at most p^2 q C plus p^3 B");

  add(CheckKind::kMeasureIdentity, "IPP_BIN",
      "binomial summation by parts against the counting factor");
  add(CheckKind::kMeasureIdentity, "IPP_BIN_BW",
      "binomial summation by parts against the co-counting factor");
  add(CheckKind::kMeasureIdentity, "IPP_POI", "Poisson summation by parts");
  add(CheckKind::kMeasureIdentity, "IPP_BINPOI",
      "mixed summation by parts for the binomial-plus-Poisson law");

  add(CheckKind::kQueueIdentity, "POLARIZED",
      "generator equals its polarized second-difference rewriting");
  add(CheckKind::kQueueIdentity, "COMMUT_INF",
      "commutator of the generator with the forward difference is mu D");
  add(CheckKind::kQueueIdentity, "COMMUT_SG",
      "the forward difference intertwines with the semigroup at rate mu");
  add(CheckKind::kQueueIdentity, "IPP_SG",
      "semigroup summation by parts with the two-law split");
  add(CheckKind::kQueueIdentity, "PROPB_POI",
      "equilibrium entropy production equals -lambda times the expected B");
  add(CheckKind::kQueueIdentity, "MEHLER_MOMENTS",
      "evolved law has mean np + rho q and variance (np + rho) q");
  add(CheckKind::kQueueIdentity, "GAMMA_LINEAR",
      "carre du champ profiles of the identity function are affine in n");
  add(CheckKind::kQueueIdentity, "ENT_LOC",
      "local entropy equals the time integral of the two A-terms");
  add(CheckKind::kQueueIdentity, "MM1_INV",
      "the geometric law annihilates the single-server generator");
  add(CheckKind::kQueueIdentity, "MM1_COMMUT_INF",
      "single-server commutator vanishes away from the boundary state");

  add(CheckKind::kLocalInequality, "MMI_LOC",
      "local entropy bounded by the binomial-Poisson A-bracket");
  add(CheckKind::kLocalInequality, "MMI_LOC_NEW",
      "local entropy bounded by the refined p-integrated bracket");
  add(CheckKind::kLocalInequality, "LOCAL_POINCARE",
      "local variance bounded by expected squared forward differences");

  add(CheckKind::kInequality, "TWO_POINT_A",
      "two-point entropy bounded by pq times the mixed A-transform");
  add(CheckKind::kInequality, "TWO_POINT_B",
      "two-point entropy bounded by pq times the B-transform");
  add(CheckKind::kInequality, "BERN_PRODUCT",
      "Bernoulli-sum entropy bounded by max(p_i q_i) times the mixed "
      "A-bracket");
  add(CheckKind::kInequality, "BINOMIAL",
      "binomial entropy bounded by pq times the mixed A-bracket");
  add(CheckKind::kInequality, "BINOMIAL_ALT",
      "binomial entropy bounded by npq times a bracket on the (n-1)-law");
  add(CheckKind::kInequality, "POISSON_A",
      "Poisson entropy bounded by rho times the forward A-transform");
  add(CheckKind::kInequality, "POISSON_B_LIMIT",
      "Poisson entropy bounded by rho times the forward B-transform");
  add(CheckKind::kInequality, "BINPOI",
      "binomial-plus-Poisson entropy bounded by a two-term bracket");
  add(CheckKind::kInequality, "ENTROPY_DECAY",
      "evolved entropy bounded by the exponentially discounted start");
  add(CheckKind::kInequality, "TV_ENT",
      "squared distance to equilibrium bounded by discounted relative "
      "entropy");
  add(CheckKind::kInequality, "MIXED_BC_LIMIT",
      "Poisson entropy bounded by (rho/2) times the (2B + C)/3 bracket");
  add(CheckKind::kInequality, "GAMMA2_GE",
      "iterated carre du champ dominates (mu/2) times the carre du champ");
  add(CheckKind::kInequality, "TENSORISATION",
      "product-law entropy bounded by summed conditional entropies");
  add(CheckKind::kInequality, "VARIATIONAL",
      "entropy dominates every tangent comparison, equality at g = f");

  add(CheckKind::kAdmissibility, "ADMISSIBILITY",
      "classifies Phi by convexity of Phi and concavity of -1/Phi''");
  return rows;
}

const CheckEntry& entry_for(std::string_view tag) {
  for (const CheckEntry& row : check_registry()) {
    if (row.tag == tag) return row;
  }
  std::ostringstream msg;
  msg << "unknown tag '" << tag << "'; valid tags:";
  for (const CheckEntry& row : check_registry()) msg << ' ' << row.tag;
  throw std::invalid_argument(msg.str());
}

std::vector<PhiFunction> resolve_corpus(const RunOptions& options) {
  std::vector<PhiFunction> out;
  out.reserve(options.phi_names.size());
  for (const std::string& name : options.phi_names) {
    out.push_back(PhiFunction::from_name(name));
  }
  if (out.empty()) {
    throw std::invalid_argument("the phi corpus must not be empty");
  }
  return out;
}

bool applies_to(CheckKind kind, std::string_view tag,
                const PhiFunction& phi) {
  if (kind == CheckKind::kTransformIdentity && tag == "P2_COLLAPSE") {
    return phi.family() == PhiFamily::P2;
  }
  if (kind == CheckKind::kTransformComparison && tag == "A_LE_C_P1") {
    return phi.family() == PhiFamily::P1;
  }
  return true;
}

void merge_into(VerificationReport& base, const VerificationReport& extra) {
  base.case_count += extra.case_count;
  base.max_abs_deviation =
      std::max(base.max_abs_deviation, extra.max_abs_deviation);
  base.max_rel_deviation =
      std::max(base.max_rel_deviation, extra.max_rel_deviation);
  if (extra.min_slack < base.min_slack) {
    base.min_slack = extra.min_slack;
    base.witness = extra.witness;
  }
  base.max_ratio = std::max(base.max_ratio, extra.max_ratio);
  base.pass = base.pass && extra.pass;
  if (!extra.note.empty()) base.note = extra.note;
}

VerificationReport run_inequality_battery(InequalityId id,
                                          const PhiFunction& phi,
                                          const RunOptions& options) {
  const std::vector<SamplerSpec> battery = FunctionSampler::default_battery(phi);
  const std::size_t per =
      std::max<std::size_t>(1, options.cases / battery.size());
  VerificationReport merged;
  bool first = true;
  for (std::size_t b = 0; b < battery.size(); ++b) {
    SampleConfig cfg;
    cfg.count = per;
    cfg.seed = options.seed + b;
    VerificationReport rep =
        sweep_inequality(id, phi, options.inputs, battery[b], cfg);
    if (first) {
      merged = rep;
      first = false;
    } else {
      merge_into(merged, rep);
    }
  }
  merged.seed = options.seed;
  merged.description += " [" + phi.name() + "]";
  return merged;
}

VerificationReport run_local_sweep(LocalInequalityVariant variant,
                                   const PhiFunction& phi,
                                   const RunOptions& options) {
  const std::vector<SamplerSpec> battery = FunctionSampler::default_battery(phi);
  RngStream rng(options.seed, 7);
  VerificationReport merged;
  merged.tag = std::string(to_tag(variant));
  merged.description = "local bound sweep [" + phi.name() + "]";
  merged.tolerance = 1e-9;
  merged.seed = options.seed;
  bool first = true;
  for (std::size_t i = 0; i < options.cases; ++i) {
    const QueueParams params{rng.uniform(0.5, 2.5), rng.uniform(0.4, 1.5)};
    const double t = rng.uniform(0.2, 1.2);
    const int n = static_cast<int>(rng.below(5));
    const DiscreteMeasure law = mehler_law(params, t, n, 1e-14);
    FunctionSampler sampler(battery[i % battery.size()], phi.box_lo(),
                            phi.box_hi());
    const GridFunction f = sampler.draw(0, law.hi() + 2, rng);
    VerificationReport rep =
        local_inequality_eval(variant, params, phi, f, t, n);
    if (first) {
      merged.tag = rep.tag;
      merged.tolerance = rep.tolerance;
      first = false;
    }
    merge_into(merged, rep);
  }
  merged.description = "local bound sweep [" + phi.name() + "]";
  merged.finish_inequality();
  return merged;
}

VerificationReport run_admissibility(const PhiFunction& phi,
                                     const RunOptions& options) {
  SampleConfig cfg;
  cfg.count = options.cases;
  cfg.seed = options.seed;
  const AdmissibilityReport adm = admissibility(phi, cfg);
  const Convexity expected = phi.family() == PhiFamily::NegLog
                                 ? Convexity::kRejected
                                 : Convexity::kAdmissible;
  auto verdict_name = [](Convexity c) {
    switch (c) {
      case Convexity::kAdmissible:
        return "ADMISSIBLE";
      case Convexity::kAffine:
        return "AFFINE";
      case Convexity::kRejected:
        return "REJECTED";
    }
    return "UNKNOWN";
  };
  VerificationReport rep;
  rep.tag = "ADMISSIBILITY";
  rep.description = "convexity classification [" + phi.name() + "]";
  rep.case_count = adm.probe_count;
  rep.seed = cfg.seed;
  rep.pass = adm.verdict == expected && adm.hessian_consistent &&
             adm.two_point_consistent;
  std::ostringstream note;
  note << "verdict=" << verdict_name(adm.verdict)
       << " expected=" << verdict_name(expected)
       << " min_ratio=" << adm.min_ratio;
  if (adm.verdict == Convexity::kRejected) {
    note << " witness_u=" << adm.witness_u << " witness_v=" << adm.witness_v;
  }
  if (!adm.detail.empty()) note << " " << adm.detail;
  rep.note = note.str();
  rep.witness = adm.detail;
  return rep;
}

}  // namespace

std::string_view to_label(CheckKind kind) {
  switch (kind) {
    case CheckKind::kTransformIdentity:
      return "transform identity";
    case CheckKind::kTransformComparison:
      return "transform comparison";
    case CheckKind::kMeasureIdentity:
      return "measure identity";
    case CheckKind::kQueueIdentity:
      return "queue identity";
    case CheckKind::kLocalInequality:
      return "local inequality";
    case CheckKind::kInequality:
      return "inequality";
    case CheckKind::kAdmissibility:
      return "admissibility";
  }
  return "unknown";
}

const std::vector<CheckEntry>& check_registry() {
  static const std::vector<CheckEntry> rows = build_registry();
  return rows;
}

bool is_known_tag(std::string_view tag) {
  const auto& rows = check_registry();
  return std::any_of(rows.begin(), rows.end(),
                     [&](const CheckEntry& row) { return row.tag == tag; });
}

std::vector<std::string> known_phi_names() {
  return {"P1",           "P2",
          "P3:1.5",       "NEG_LOG",
          "NEG_XLOGNEGX", "POWER_MIXTURE",
          "NEG_GAUSS_ISOP"};
}

IneqInputs RunOptions::default_run_inputs() {
  IneqInputs inputs;
  inputs.p = 0.3;
  inputs.n = 6;
  inputs.rho = 1.7;
  inputs.t = 0.7;
  inputs.ps = {0.15, 0.3, 0.45, 0.6, 0.75};
  inputs.queue = QueueParams{2.0, 1.0};
  return inputs;
}

std::vector<VerificationReport> run_check(const std::string& tag,
                                          const RunOptions& options) {
  const CheckEntry& entry = entry_for(tag);
  std::vector<VerificationReport> out;
  SampleConfig cfg;
  cfg.count = options.cases;
  cfg.seed = options.seed;

  switch (entry.kind) {
    case CheckKind::kTransformIdentity: {
      for (const PhiFunction& phi : resolve_corpus(options)) {
        if (!applies_to(entry.kind, tag, phi)) continue;
        TransformIdentityId id{};
        bool found = false;
        for (TransformIdentityId candidate :
             {TransformIdentityId::kAbcSum, TransformIdentityId::kBTauInv,
              TransformIdentityId::kSigmaCSq, TransformIdentityId::kIntRepA,
              TransformIdentityId::kIntRepB,
              TransformIdentityId::kSmallVAsymp,
              TransformIdentityId::kEntTwop, TransformIdentityId::kAdtau,
              TransformIdentityId::kP2Collapse}) {
          if (to_tag(candidate) == tag) {
            id = candidate;
            found = true;
          }
        }
        if (!found) break;
        VerificationReport rep = check_transform_identity(id, phi, cfg);
        rep.description += " [" + phi.name() + "]";
        out.push_back(std::move(rep));
      }
      break;
    }
    case CheckKind::kTransformComparison: {
      for (const PhiFunction& phi : resolve_corpus(options)) {
        if (!applies_to(entry.kind, tag, phi)) continue;
        TransformComparisonId id{};
        bool found = false;
        for (TransformComparisonId candidate :
             {TransformComparisonId::kALeB, TransformComparisonId::kALeCP1,
              TransformComparisonId::kCThirdLe2A,
              TransformComparisonId::kCHalfLeB,
              TransformComparisonId::kSigmaALe,
              TransformComparisonId::kSigmaBLe,
              TransformComparisonId::kPaMinusAp,
              TransformComparisonId::kApCA, TransformComparisonId::kAtpCA,
              TransformComparisonId::kBpCB}) {
          if (to_tag(candidate) == tag) {
            id = candidate;
            found = true;
          }
        }
        if (!found) break;
        VerificationReport rep = check_transform_comparison(id, phi, cfg);
        rep.description += " [" + phi.name() + "]";
        out.push_back(std::move(rep));
      }
      break;
    }
    case CheckKind::kMeasureIdentity: {
      for (MeasureIdentityId candidate :
           {MeasureIdentityId::kIppBin, MeasureIdentityId::kIppBinBw,
            MeasureIdentityId::kIppPoi, MeasureIdentityId::kIppBinpoi}) {
        if (to_tag(candidate) == tag) {
          out.push_back(check_measure_identity(candidate, cfg));
        }
      }
      break;
    }
    case CheckKind::kQueueIdentity: {
      for (QueueIdentityId candidate :
           {QueueIdentityId::kPolarized, QueueIdentityId::kCommutInf,
            QueueIdentityId::kCommutSg, QueueIdentityId::kIppSg,
            QueueIdentityId::kPropBPoi, QueueIdentityId::kMehlerMoments,
            QueueIdentityId::kGammaLinear, QueueIdentityId::kEntLoc,
            QueueIdentityId::kMm1Inv, QueueIdentityId::kMm1CommutInf}) {
        if (to_tag(candidate) == tag) {
          out.push_back(check_queue_identity_sweep(candidate, cfg));
        }
      }
      break;
    }
    case CheckKind::kLocalInequality: {
      for (LocalInequalityVariant candidate :
           {LocalInequalityVariant::kMmiLoc,
            LocalInequalityVariant::kMmiLocNew,
            LocalInequalityVariant::kLocalPoincare}) {
        if (to_tag(candidate) == tag) {
          for (const PhiFunction& phi : resolve_corpus(options)) {
            out.push_back(run_local_sweep(candidate, phi, options));
          }
        }
      }
      break;
    }
    case CheckKind::kInequality: {
      const InequalityId id = inequality_from_tag(tag);
      for (const PhiFunction& phi : resolve_corpus(options)) {
        out.push_back(run_inequality_battery(id, phi, options));
      }
      break;
    }
    case CheckKind::kAdmissibility: {
      for (const PhiFunction& phi : resolve_corpus(options)) {
        out.push_back(run_admissibility(phi, options));
      }
      break;
    }
  }
  if (out.empty()) {
    throw std::logic_error("no runner produced a report for tag " + tag);
  }
  return out;
}

}  // namespace philab
