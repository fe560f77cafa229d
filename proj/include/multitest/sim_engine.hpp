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

#ifndef MULTITEST_SIM_ENGINE_HPP_
#define MULTITEST_SIM_ENGINE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "multitest/adjust.hpp"
#include "multitest/linalg.hpp"
#include "multitest/sequential.hpp"

namespace multitest {

// kSufficient draws the m-vector of z statistics directly from its exact
// sampling distribution. kRaw draws every observation of both arms and
// forms z from the difference in means; slower, same distribution.
enum class SimMode { kSufficient, kRaw };

std::string_view to_string(SimMode mode);
SimMode parse_sim_mode(std::string_view name);

struct SimConfig {
  int m = 8;
  std::int64_t n_total = 1000;  // split equally between the arms
  std::int64_t reps = 10000;
  std::vector<double> deltas{0.0, 0.05, 0.10, 0.15};  // unit-variance SDs
  CorrelationSpec corr = Independent{};
  // Effects go on the first k metrics. At delta = 0 every metric is null
  // and the cell reports FWER only.
  int k_nonnull = 8;
  std::vector<AdjustMethod> methods = all_adjust_methods();
  double alpha = 0.05;
  Sides sides = Sides::kOne;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::kSufficient;
  int workers = 1;  // 0 = one per hardware thread
};

void validate(const SimConfig& cfg);

struct PowerCell {
  AdjustMethod method = AdjustMethod::kNone;
  double delta = 0.0;
  std::int64_t reps = 0;
  std::int64_t power_hits = 0;  // replications rejecting >= 1 non-null
  std::int64_t fwer_hits = 0;   // replications rejecting >= 1 null
  // Paired against bonferroni on the same replication; zero when
  // bonferroni is not among the methods.
  std::int64_t gain_vs_bonferroni = 0;
  std::int64_t loss_vs_bonferroni = 0;

  double power() const;
  double fwer() const;
  double power_se() const;
  double fwer_se() const;
  double advantage() const;     // power minus bonferroni's power
  double advantage_se() const;  // paired standard error
};

struct PowerTable {
  SimConfig config;
  std::int64_t n_ctrl = 0;
  std::int64_t n_treat = 0;
  std::vector<PowerCell> cells;  // delta-major, methods in config order
  // Replications in which holm rejected something and bonferroni did not,
  // or the reverse. Always zero for a correct implementation.
  std::int64_t holm_bonferroni_disagreements = 0;
  std::vector<std::string> warnings;

  const PowerCell& cell(AdjustMethod method, double delta) const;
};

// Monte Carlo disjunctive power and FWER. Replication r uses RngStream
// (seed, r) and the same noise for every delta, so cells are paired.
PowerTable run_power_study(const SimConfig& cfg);

struct AnalyticCell {
  AdjustMethod method = AdjustMethod::kNone;
  double delta = 0.0;
  double power = 0.0;
  double fwer = 0.0;
};
// Closed form for independent metrics with equal effects:
//   power = 1 - (1 - P(reject one non-null))^k.
// Throws ValidationError for correlated configs or methods other than none
// and bonferroni.
std::vector<AnalyticCell> analytic_power_oracle(const SimConfig& cfg);

struct AdvantageConfig {
  int m = 8;
  std::int64_t n_total = 1000;
  std::int64_t reps = 10000;
  double delta = 0.10;
  std::vector<int> ks{1, 4, 8};
  std::vector<CorrelationSpec> corrs{Independent{}, Equicorrelated{0.95}};
  std::vector<AdjustMethod> methods{AdjustMethod::kHommel, AdjustMethod::kBH};
  double alpha = 0.05;
  Sides sides = Sides::kOne;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct AdvantageRow {
  int k = 0;
  std::string corr;
  AdjustMethod method = AdjustMethod::kNone;
  double bonferroni_power = 0.0;
  double power = 0.0;
  double advantage = 0.0;
  double advantage_se = 0.0;
};

std::vector<AdvantageRow> advantage_table(const AdvantageConfig& cfg);

struct SparseRegimeResult {
  int m = 0;
  double q = 0.0;
  double target_power = 0.0;
  double ncp = 0.0;  // noncentrality of the single non-null z statistic
  AdjustMethod method = AdjustMethod::kBH;
  std::int64_t reps = 0;
  std::int64_t fwer_hits = 0;
  double fwer() const;
  double fwer_se() const;
};

// One non-null among m independent one-sided tests with noncentrality
// z_q + z_{1 - target_power} (uncorrected power = target_power); returns
// the probability that `method` at level q rejects any of the m - 1 nulls.
SparseRegimeResult sparse_regime_fwer(int m, double q, double target_power,
                                      std::int64_t reps, std::uint64_t seed,
                                      AdjustMethod method = AdjustMethod::kBH,
                                      int workers = 1);

struct CrossingMcResult {
  std::int64_t paths = 0;
  std::vector<std::int64_t> first_crossings;  // per look
  std::vector<double> cumulative;             // P(cross at or before look k)
  std::vector<double> cumulative_se;
};

// Simulates standard Brownian motion under H0 observed at the boundary
// schedule's fractions and records the first look with |Z| >= bound
// (Z >= bound one-sided).
CrossingMcResult sequential_crossing_mc(const GstBoundaries& boundaries,
                                        std::int64_t paths,
                                        std::uint64_t seed, int workers = 1);

struct CompositionMcResult {
  std::int64_t paths = 0;
  std::int64_t any_crossing = 0;
  double fwer() const;
  double fwer_se() const;
};

// Several metrics monitored together under the global null, each observed
// at its own fractions. Score processes are Brownian motions with pairwise
// correlation rho. Returns the probability that any metric crosses.
CompositionMcResult composition_fwer_mc(
    const std::vector<GstBoundaries>& boundaries, double rho,
    std::int64_t paths, std::uint64_t seed, int workers = 1);

}  // namespace multitest

#endif  // MULTITEST_SIM_ENGINE_HPP_
