// Copyright 2026 The multitest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "multitest/decision.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "multitest/error.hpp"
#include "multitest/normal.hpp"

namespace multitest {
namespace {

void check_se(const MetricResult& m) {
  if (!(m.se > 0.0) || !std::isfinite(m.se)) {
    throw ValidationError("metric '" + m.name + "': se must be > 0");
  }
  if (!std::isfinite(m.estimate)) {
    throw ValidationError("metric '" + m.name + "': estimate must be finite");
  }
}

// Estimate signed so that positive means "better".
double improvement(const MetricResult& m) {
  return m.direction == Direction::kHigherIsBetter ? m.estimate : -m.estimate;
}

}  // namespace

std::string_view to_string(MetricRole role) {
  switch (role) {
    case MetricRole::kSuccess: return "success";
    case MetricRole::kGuardrail: return "guardrail";
    case MetricRole::kQuality: return "quality";
  }
  return "unknown";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::kHigherIsBetter ? "higher_is_better"
                                                 : "lower_is_better";
}

MetricRole parse_metric_role(std::string_view name) {
  if (name == "success") return MetricRole::kSuccess;
  if (name == "guardrail") return MetricRole::kGuardrail;
  if (name == "quality") return MetricRole::kQuality;
  throw ValidationError("unknown metric role '" + std::string(name) + "'");
}

Direction parse_direction(std::string_view name) {
  if (name == "higher_is_better" || name == "higher-is-better") {
    return Direction::kHigherIsBetter;
  }
  if (name == "lower_is_better" || name == "lower-is-better") {
    return Direction::kLowerIsBetter;
  }
  throw ValidationError("unknown direction '" + std::string(name) + "'");
}

std::string_view to_string(FamilyMode mode) {
  switch (mode) {
    case FamilyMode::kSuccessOnly: return "success_only";
    case FamilyMode::kNaive: return "naive";
    case FamilyMode::kNaiveNim: return "naive_nim";
  }
  return "unknown";
}

FamilyMode parse_family_mode(std::string_view name) {
  if (name == "success_only" || name == "success-only") {
    return FamilyMode::kSuccessOnly;
  }
  if (name == "naive") return FamilyMode::kNaive;
  if (name == "naive_nim" || name == "naive-nim") return FamilyMode::kNaiveNim;
  throw ValidationError("unknown family mode '" + std::string(name) + "'");
}

std::string_view to_string(PValueSource source) {
  switch (source) {
    case PValueSource::kTwoSided: return "two_sided";
    case PValueSource::kNonInferiority: return "non_inferiority";
    case PValueSource::kDeterioration: return "deterioration";
    case PValueSource::kChange: return "change";
  }
  return "unknown";
}

std::string_view to_string(GateOutcome outcome) {
  switch (outcome) {
    case GateOutcome::kSignificantPreferred: return "significant_preferred";
    case GateOutcome::kSignificantWrongWay: return "significant_wrong_direction";
    case GateOutcome::kNotSignificant: return "not_significant";
    case GateOutcome::kPassed: return "passed";
    case GateOutcome::kFailed: return "failed";
    case GateOutcome::kBlocked: return "blocked";
  }
  return "unknown";
}

double success_pvalue(const MetricResult& m) {
  check_se(m);
  return two_sided_p(m.estimate / m.se);
}

double nim_pvalue(const MetricResult& m) {
  check_se(m);
  if (!m.nim_margin) {
    throw ValidationError("guardrail '" + m.name + "' has no nim_margin");
  }
  const double margin = *m.nim_margin;
  if (!(margin >= 0.0) || !std::isfinite(margin)) {
    throw ValidationError("guardrail '" + m.name + "': margin must be >= 0");
  }
  return norm_sf((improvement(m) + margin) / m.se);
}

double deterioration_pvalue(const MetricResult& m) {
  check_se(m);
  return norm_cdf(improvement(m) / m.se);
}

double change_pvalue(const MetricResult& m) {
  check_se(m);
  return two_sided_p(m.estimate / m.se);
}

double srm_pvalue(std::span<const std::int64_t> observed_counts,
                  std::span<const double> expected_ratios) {
  if (observed_counts.size() != expected_ratios.size() ||
      observed_counts.size() < 2) {
    throw ValidationError("srm: need >= 2 arms with matching ratios");
  }
  double total = 0.0;
  double ratio_sum = 0.0;
  for (std::size_t i = 0; i < observed_counts.size(); ++i) {
    if (observed_counts[i] < 0) throw ValidationError("srm: negative count");
    if (!(expected_ratios[i] > 0.0)) {
      throw ValidationError("srm: ratios must be > 0");
    }
    total += static_cast<double>(observed_counts[i]);
    ratio_sum += expected_ratios[i];
  }
  if (total == 0.0) throw ValidationError("srm: total count is 0");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed_counts.size(); ++i) {
    const double expected = total * expected_ratios[i] / ratio_sum;
    const double diff = static_cast<double>(observed_counts[i]) - expected;
    stat += diff * diff / expected;
  }
  return chisq_sf(stat, static_cast<int>(observed_counts.size()) - 1);
}

std::vector<FamilyMember> build_family(std::span<const MetricResult> metrics,
                                       FamilyMode mode) {
  std::vector<FamilyMember> family;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    if (metrics[i].role == MetricRole::kSuccess) {
      family.push_back(
          {i, PValueSource::kTwoSided, success_pvalue(metrics[i])});
    }
  }
  if (mode == FamilyMode::kSuccessOnly) return family;
  const bool nim = mode == FamilyMode::kNaiveNim;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    if (metrics[i].role != MetricRole::kGuardrail) continue;
    if (nim) {
      family.push_back(
          {i, PValueSource::kNonInferiority, nim_pvalue(metrics[i])});
    } else {
      family.push_back({i, PValueSource::kChange, change_pvalue(metrics[i])});
    }
  }
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    if (metrics[i].role != MetricRole::kQuality) continue;
    if (nim) {
      family.push_back(
          {i, PValueSource::kDeterioration, deterioration_pvalue(metrics[i])});
    } else {
      family.push_back({i, PValueSource::kChange, change_pvalue(metrics[i])});
    }
  }
  return family;
}

Decision ship_decision(std::span<const MetricResult> metrics,
                       const DecisionConfig& cfg,
                       const std::optional<SrmCheck>& srm) {
  if (metrics.empty()) throw ValidationError("no metrics to decide on");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
  for (const auto& m : metrics) {
    check_se(m);
    if (m.role == MetricRole::kGuardrail && !m.nim_margin) {
      throw ValidationError("guardrail '" + m.name + "' has no nim_margin");
    }
  }

  Decision d;
  d.metrics.resize(metrics.size());
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const MetricResult& m = metrics[i];
    MetricOutcome& o = d.metrics[i];
    o.name = m.name;
    o.role = m.role;
    switch (m.role) {
      case MetricRole::kSuccess: o.raw_p = success_pvalue(m); break;
      case MetricRole::kGuardrail: o.raw_p = nim_pvalue(m); break;
      case MetricRole::kQuality: o.raw_p = deterioration_pvalue(m); break;
    }
    o.adjusted_p = o.raw_p;
  }

  const auto family = build_family(metrics, cfg.family_mode);
  d.family_size = family.size();
  if (!family.empty()) {
    std::vector<double> p(family.size());
    for (std::size_t k = 0; k < family.size(); ++k) p[k] = family[k].pvalue;
    const auto adj = adjust(p, cfg.method);
    for (std::size_t k = 0; k < family.size(); ++k) {
      MetricOutcome& o = d.metrics[family[k].metric_index];
      o.in_family = true;
      o.family_source = family[k].source;
      o.family_p = family[k].pvalue;
      o.family_adjusted_p = adj.adjusted[k];
      // In the plain naive mode only success gates read the family.
      if (o.role == MetricRole::kSuccess ||
          cfg.family_mode == FamilyMode::kNaiveNim) {
        o.adjusted_p = adj.adjusted[k];
      }
    }
  }

  bool any_success = false;
  bool success_gate = false;
  bool guardrail_gate = true;
  bool quality_gate = true;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const MetricResult& m = metrics[i];
    MetricOutcome& o = d.metrics[i];
    o.ci_family_size = o.in_family ? family.size() : 1;
    const double est = m.estimate;
    const double se = m.se;
    o.interval = bonferroni_cis(std::span(&est, 1), std::span(&se, 1),
                                cfg.alpha, o.ci_family_size)[0];
    const bool significant = o.adjusted_p < cfg.alpha;
    switch (m.role) {
      case MetricRole::kSuccess:
        any_success = true;
        if (!significant) {
          o.gate = GateOutcome::kNotSignificant;
        } else if (improvement(m) > 0.0) {
          o.gate = GateOutcome::kSignificantPreferred;
          success_gate = true;
          d.driving_success.push_back(m.name);
        } else {
          o.gate = GateOutcome::kSignificantWrongWay;
        }
        break;
      case MetricRole::kGuardrail:
        o.gate = significant ? GateOutcome::kPassed : GateOutcome::kFailed;
        if (!significant) {
          guardrail_gate = false;
          d.failed_guardrails.push_back(m.name);
        }
        break;
      case MetricRole::kQuality:
        o.gate = significant ? GateOutcome::kBlocked : GateOutcome::kPassed;
        if (significant) {
          quality_gate = false;
          d.blocking_quality.push_back(m.name);
        }
        break;
    }
  }

  if (srm) {
    d.srm_p = srm_pvalue(srm->counts, srm->ratios);
    d.srm_blocked = *d.srm_p < cfg.srm_alpha;
    if (d.srm_blocked) d.blocking_quality.push_back("sample_ratio_mismatch");
  }

  d.ship = (!any_success || success_gate) && guardrail_gate && quality_gate &&
           !d.srm_blocked;
  return d;
}

}  // namespace multitest
