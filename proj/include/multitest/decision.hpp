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

#ifndef MULTITEST_DECISION_HPP_
#define MULTITEST_DECISION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multitest/adjust.hpp"
#include "multitest/intervals.hpp"

namespace multitest {

// Success metrics form a union-intersection gate (one must win),
// guardrails an intersection-union gate (all must pass a non-inferiority
// test), quality metrics block on significant deterioration.
enum class MetricRole { kSuccess, kGuardrail, kQuality };
enum class Direction { kHigherIsBetter, kLowerIsBetter };

std::string_view to_string(MetricRole role);
std::string_view to_string(Direction direction);
MetricRole parse_metric_role(std::string_view name);
Direction parse_direction(std::string_view name);

struct MetricResult {
  std::string name;
  MetricRole role = MetricRole::kSuccess;
  Direction direction = Direction::kHigherIsBetter;
  double estimate = 0.0;  // treatment - control, metric units
  double se = 1.0;
  // Absolute non-inferiority margin, required for guardrails. 0 means a
  // pure non-deterioration test.
  std::optional<double> nim_margin;
  std::optional<std::int64_t> n_treat;
  std::optional<std::int64_t> n_ctrl;
};

enum class FamilyMode {
  kSuccessOnly,  // family = success metrics; guardrail/quality gates at raw alpha
  kNaive,        // every metric counted in the family; gates stay raw
  kNaiveNim,     // every metric's gate p adjusted together
};
std::string_view to_string(FamilyMode mode);
FamilyMode parse_family_mode(std::string_view name);

struct DecisionConfig {
  double alpha = 0.05;
  AdjustMethod method = AdjustMethod::kBonferroni;
  FamilyMode family_mode = FamilyMode::kSuccessOnly;
  double srm_alpha = 0.001;
};

struct SrmCheck {
  std::vector<std::int64_t> counts;
  std::vector<double> ratios;
};

// Two-sided p for a success metric; direction is checked at decision time.
double success_pvalue(const MetricResult& m);
// One-sided non-inferiority p. H0: the effect is at least `margin` worse
// than zero in the metric's harmful direction.
double nim_pvalue(const MetricResult& m);
// One-sided p for movement in the harmful direction; small p = significant
// deterioration.
double deterioration_pvalue(const MetricResult& m);
// Two-sided p for "any change", used by the naive family for guardrails.
double change_pvalue(const MetricResult& m);
// Chi-square goodness-of-fit p for the observed arm counts.
double srm_pvalue(std::span<const std::int64_t> observed_counts,
                  std::span<const double> expected_ratios);

enum class PValueSource { kTwoSided, kNonInferiority, kDeterioration, kChange };
std::string_view to_string(PValueSource source);

struct FamilyMember {
  std::size_t metric_index = 0;
  PValueSource source = PValueSource::kTwoSided;
  double pvalue = 1.0;
};

// Ordered correction family, success metrics first.
//   success_only: success metrics' two-sided p.
//   naive:        plus a two-sided change p for every guardrail and quality
//                 metric. These rarely reject; they only enlarge the family.
//                 Guardrail and quality gates still read their raw tests.
//   naive_nim:    plus guardrail non-inferiority p and quality
//                 deterioration p; those gates read the adjusted values.
std::vector<FamilyMember> build_family(std::span<const MetricResult> metrics,
                                       FamilyMode mode);

enum class GateOutcome {
  kSignificantPreferred,  // success metric driving a ship
  kSignificantWrongWay,
  kNotSignificant,
  kPassed,   // guardrail NIM passed / quality not deteriorated
  kFailed,   // guardrail NIM not shown
  kBlocked,  // quality metric deteriorated
};
std::string_view to_string(GateOutcome outcome);

struct MetricOutcome {
  std::string name;
  MetricRole role = MetricRole::kSuccess;
  double raw_p = 1.0;        // p of the metric's own gate test
  double adjusted_p = 1.0;   // p the gate compares to alpha
  bool in_family = false;
  std::optional<PValueSource> family_source;
  std::optional<double> family_p;           // as entered in the family
  std::optional<double> family_adjusted_p;
  std::size_t ci_family_size = 1;
  Interval interval;         // 1 - alpha / ci_family_size
  GateOutcome gate = GateOutcome::kNotSignificant;
};

struct Decision {
  bool ship = false;
  std::vector<std::string> driving_success;
  std::vector<std::string> failed_guardrails;
  std::vector<std::string> blocking_quality;
  std::vector<MetricOutcome> metrics;  // input order
  std::size_t family_size = 0;
  std::optional<double> srm_p;
  bool srm_blocked = false;
};

// Ship iff (no success metrics, or one is adjusted-significant in its
// preferred direction) and (every guardrail passes non-inferiority) and
// (no quality metric deteriorates) and the SRM check, when given, passes.
// Throws ValidationError on empty input, invalid alpha, nonpositive se or
// a guardrail without a margin.
Decision ship_decision(std::span<const MetricResult> metrics,
                       const DecisionConfig& cfg,
                       const std::optional<SrmCheck>& srm = std::nullopt);

}  // namespace multitest

#endif  // MULTITEST_DECISION_HPP_
