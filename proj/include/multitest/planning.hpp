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

#ifndef MULTITEST_PLANNING_HPP_
#define MULTITEST_PLANNING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace multitest {

// FWER of m independent tests each at level alpha: 1 - (1 - alpha)^m.
double fwer_inflation(std::int64_t m, double alpha);

struct PlanInputs {
  double alpha = 0.05;
  double beta = 0.2;     // 1 - target power
  double delta = 0.0;    // minimum detectable effect, metric units
  double sigma = 1.0;    // per-observation standard deviation
  int success_count = 1;          // S
  int guardrail_count = 0;        // G
  std::vector<double> margins;    // one per guardrail, metric units
  // Optional weights for splitting beta across guardrails; equal when empty.
  std::vector<double> guardrail_beta_weights;
  // True guardrail effect assumed at design time, in the preferred
  // direction. 0 means "treatment is harmless".
  double guardrail_expected_effect = 0.0;
  // Human-readable MDE for the plan statement, e.g. "1% relative change".
  // Defaults to "change of <delta>".
  std::string mde_label;
};

struct SampleSize {
  double exact = 0.0;     // the closed-form value before rounding
  std::int64_t per_variant = 0;
};

// n = 2 sigma^2 (z_{alpha*/2} + z_beta)^2 / delta^2 with alpha* = alpha/S,
// rounded to the nearest integer.
SampleSize sample_size_success(const PlanInputs& p);

// One-sided non-inferiority sizing with beta split across G guardrails:
// n = 2 sigma^2 (z_alpha + z_{beta_g})^2 / (margin + expected_effect)^2,
// beta_g = beta_total / G.
SampleSize sample_size_guardrail(double margin, double sigma, double alpha,
                                 double beta_total, int guardrail_count,
                                 double expected_effect = 0.0);

struct PlanRow {
  std::string metric;  // "success" or "guardrail_<i>"
  double alpha_used = 0.0;
  double beta_used = 0.0;
  SampleSize n;
};

struct Plan {
  std::vector<PlanRow> rows;
  std::int64_t overall_per_variant = 0;
  double adjusted_alpha = 0.0;  // alpha / S
  std::string statement;
};

Plan plan_experiment(const PlanInputs& p);

}  // namespace multitest

#endif  // MULTITEST_PLANNING_HPP_
