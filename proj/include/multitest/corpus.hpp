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

#ifndef MULTITEST_CORPUS_HPP_
#define MULTITEST_CORPUS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "multitest/adjust.hpp"
#include "multitest/decision.hpp"
#include "multitest/vr_model.hpp"

namespace multitest {

// Distribution over small counts: explicit weights for min, min+1, ...
// followed by a geometric tail carrying the remaining mass.
struct CountDistribution {
  int min = 1;
  std::vector<double> head;
  double tail_ratio = 0.0;
  int tail_length = 0;

  std::vector<double> pmf() const;  // P(min + i)
  double mean() const;
  int median() const;
  int sample(double u) const;  // inverse cdf at u in [0, 1)
};

CountDistribution default_success_counts();    // median 2, mean ~3.7
CountDistribution default_guardrail_counts();  // median 4, mean ~5.7

struct CorpusConfig {
  std::int64_t n_experiments = 5000;
  double rollout_fraction = 0.25;
  // P(1), P(2), ... comparisons (treatment arms) per experiment.
  std::vector<double> comparisons_per_experiment{0.7, 0.2, 0.1};
  CountDistribution success_counts = default_success_counts();
  CountDistribution guardrail_counts = default_guardrail_counts();
  CountDistribution quality_counts{0, {1.0}, 0.0, 0};
  double null_fraction = 0.7;
  // When true a comparison's treatment is null or not as a whole, and a
  // non-null treatment moves every success metric. Otherwise each success
  // metric is null independently.
  bool treatment_level_nulls = true;
  // Non-null success effects, in units of the variance-reduced standard
  // error: |N(effect_mean, effect_sd)|. A share go the wrong way.
  double effect_mean = 2.0;
  double effect_sd = 1.0;
  double harmful_fraction = 0.2;
  // Share of metrics whose preferred direction is "higher".
  double higher_is_better_fraction = 0.8;
  // Guardrail margins in variance-reduced standard errors, uniform.
  double margin_min = 2.5;
  double margin_max = 4.5;
  // Share of guardrails whose true effect sits on the margin, and of
  // quality metrics that truly deteriorate (by quality_harm_z).
  double guardrail_harm_fraction = 0.05;
  double quality_harm_fraction = 0.05;
  double quality_harm_z = 3.0;
  // Residual correlation per comparison: 0 with probability corr_zero_weight,
  // otherwise uniform on [0, corr_max].
  double corr_zero_weight = 0.6;
  double corr_max = 0.45;
  // gamma, sigma0_sq and sigma_eps_sq set the no-VR inflation; the gap
  // rho0 - rho_eps is added to each comparison's residual correlation to
  // give its pre-period correlation.
  VrDgpParams vr{0.45, std::nullopt, 1.0, 1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0};
  std::uint64_t seed = 0;
  int workers = 1;
};

void validate(const CorpusConfig& cfg);

struct Estimate {
  double estimate = 0.0;
  double se = 1.0;
};

struct MetricTruth {
  bool non_null = false;
  double improvement = 0.0;  // true change in the preferred direction
};

struct CorpusMetric {
  std::string name;
  MetricRole role = MetricRole::kSuccess;
  Direction direction = Direction::kHigherIsBetter;
  std::optional<double> nim_margin;
  Estimate vr;
  std::optional<Estimate> no_vr;
  std::optional<MetricTruth> truth;
};

struct ComparisonRecord {
  std::string experiment_id;
  std::string comparison_id;
  bool rollout = false;
  std::vector<CorpusMetric> metrics;
  std::optional<double> rho_eps;  // generation metadata, if synthetic
  std::optional<double> rho0;

  std::vector<MetricResult> results(bool vr_on) const;
};

struct Corpus {
  std::vector<ComparisonRecord> records;
  std::vector<std::string> warnings;
};

Corpus generate_corpus(const CorpusConfig& cfg);

// One JSON object per line. Unknown fields are rejected; errors name the
// line number.
void write_corpus(std::ostream& out, const Corpus& corpus);
Corpus read_corpus(std::istream& in);

enum class ShipKind : std::uint8_t {
  kNoShip = 0,
  kTrueShip = 1,      // a truly improving success metric drove the ship
  kFalseShip = 2,     // only null or harmful success metrics drove it
  kUnlabelled = 3,    // shipped, no truth labels
  kRolloutShip = 4,   // shipped with no success metrics
};

struct ReplayConfig {
  std::vector<AdjustMethod> methods = all_adjust_methods();
  FamilyMode family_mode = FamilyMode::kSuccessOnly;
  double alpha = 0.05;
  bool vr_on = true;
  int workers = 1;
};

struct MethodReplay {
  AdjustMethod method = AdjustMethod::kNone;
  std::vector<ShipKind> outcome;  // per record
  std::int64_t ships = 0;
  std::int64_t ab_ships = 0;
  std::int64_t rollout_ships = 0;
};

struct ReplayRow {
  AdjustMethod method = AdjustMethod::kNone;
  double ship_rate = 0.0;
  double ab_ship_rate = 0.0;
  double rollout_ship_rate = 0.0;
  std::optional<double> delta_pp;   // vs. bonferroni, percentage points
  std::optional<double> delta_rel;  // vs. bonferroni, percent
};

struct ReplayResult {
  ReplayConfig config;
  std::int64_t n_records = 0;
  std::int64_t n_ab = 0;
  std::int64_t n_rollout = 0;
  std::vector<MethodReplay> methods;  // bonferroni always present

  const MethodReplay& method(AdjustMethod m) const;
  std::vector<ReplayRow> rows() const;
};

ReplayResult replay(const Corpus& corpus, const ReplayConfig& cfg);

struct VrCrossedRow {
  AdjustMethod method = AdjustMethod::kNone;
  double ship_vr = 0.0;
  double ship_no_vr = 0.0;
  std::optional<double> gap_vr;     // pp vs. bonferroni with VR
  std::optional<double> gap_no_vr;  // pp vs. bonferroni without VR
  std::optional<double> gap_delta;  // gap_vr - gap_no_vr, pp
  std::optional<double> gap_delta_se;
};

// Replays with and without variance reduction. Throws ValidationError if a
// record lacks its no-VR variant.
std::vector<VrCrossedRow> vr_crossed_replay(const Corpus& corpus,
                                            const ReplayConfig& cfg);

struct ScoreRow {
  AdjustMethod method = AdjustMethod::kNone;
  std::int64_t ab_records = 0;
  std::int64_t ab_ships = 0;
  std::int64_t true_ships = 0;
  std::int64_t false_ships = 0;
  std::int64_t unlabelled_ships = 0;
  double true_ship_rate = 0.0;   // per A/B record
  double false_ship_rate = 0.0;  // per A/B record
  double false_ship_se = 0.0;
  std::optional<double> ppv;     // true / (true + false)
};

std::vector<ScoreRow> score_corpus(const ReplayResult& result);

}  // namespace multitest

#endif  // MULTITEST_CORPUS_HPP_
