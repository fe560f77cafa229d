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

#include "multitest/planning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "multitest/error.hpp"
#include "multitest/normal.hpp"

namespace multitest {
namespace {

void check_probability(double v, const char* name) {
  if (!(v > 0.0 && v < 1.0)) {
    throw ValidationError(std::string(name) + " must lie in (0, 1)");
  }
}

SampleSize finish(double exact) {
  return {exact, static_cast<std::int64_t>(std::llround(exact))};
}

std::string percent(double v) {
  std::ostringstream os;
  os << v * 100.0;
  return os.str() + "%";
}

}  // namespace

double fwer_inflation(std::int64_t m, double alpha) {
  if (m < 1) throw ValidationError("fwer_inflation: m must be >= 1");
  check_probability(alpha, "alpha");
  return -std::expm1(static_cast<double>(m) * std::log1p(-alpha));
}

SampleSize sample_size_success(const PlanInputs& p) {
  check_probability(p.alpha, "alpha");
  check_probability(p.beta, "beta");
  if (p.delta == 0.0) throw DomainError("delta must be nonzero");
  if (!(p.sigma > 0.0)) throw ValidationError("sigma must be > 0");
  if (p.success_count < 1) {
    throw ValidationError("success metric count must be >= 1");
  }
  const double alpha_star = p.alpha / p.success_count;
  const double z = norm_isf(alpha_star / 2.0) + norm_isf(p.beta);
  return finish(2.0 * p.sigma * p.sigma * z * z / (p.delta * p.delta));
}

SampleSize sample_size_guardrail(double margin, double sigma, double alpha,
                                 double beta_total, int guardrail_count,
                                 double expected_effect) {
  check_probability(alpha, "alpha");
  check_probability(beta_total, "beta");
  if (guardrail_count < 1) {
    throw ValidationError("guardrail count must be >= 1");
  }
  if (!(margin > 0.0)) {
    throw DomainError(
        "margin must be > 0: a pure non-deterioration test cannot be sized");
  }
  if (!(sigma > 0.0)) throw ValidationError("sigma must be > 0");
  const double distance = margin + expected_effect;
  if (!(distance > 0.0)) {
    throw DomainError("margin + expected effect must be > 0");
  }
  const double beta_g = beta_total / guardrail_count;
  const double z = norm_isf(alpha) + norm_isf(beta_g);
  return finish(2.0 * sigma * sigma * z * z / (distance * distance));
}

Plan plan_experiment(const PlanInputs& p) {
  if (p.guardrail_count < 0) {
    throw ValidationError("guardrail count must be >= 0");
  }
  if (static_cast<int>(p.margins.size()) != p.guardrail_count) {
    throw ValidationError("need exactly one margin per guardrail");
  }
  if (!p.guardrail_beta_weights.empty() &&
      static_cast<int>(p.guardrail_beta_weights.size()) != p.guardrail_count) {
    throw ValidationError("need one beta weight per guardrail");
  }

  Plan plan;
  plan.adjusted_alpha = p.alpha / p.success_count;
  PlanRow success{"success", plan.adjusted_alpha, p.beta,
                  sample_size_success(p)};
  plan.rows.push_back(success);

  double weight_sum = 0.0;
  for (double w : p.guardrail_beta_weights) {
    if (!(w > 0.0)) throw ValidationError("beta weights must be > 0");
    weight_sum += w;
  }
  for (int g = 0; g < p.guardrail_count; ++g) {
    // With weights, beta_g = beta * w_g / sum(w); expressed through the
    // equal-split API as an effective guardrail count.
    double beta_g = p.beta / p.guardrail_count;
    if (!p.guardrail_beta_weights.empty()) {
      beta_g = p.beta * p.guardrail_beta_weights[g] / weight_sum;
    }
    PlanRow row;
    row.metric = "guardrail_" + std::to_string(g);
    row.alpha_used = p.alpha;
    row.beta_used = beta_g;
    row.n = sample_size_guardrail(p.margins[g], p.sigma, p.alpha, beta_g, 1,
                                  p.guardrail_expected_effect);
    plan.rows.push_back(row);
  }

  plan.overall_per_variant = 0;
  for (const auto& row : plan.rows) {
    plan.overall_per_variant =
        std::max(plan.overall_per_variant, row.n.per_variant);
  }

  std::ostringstream mde;
  if (p.mde_label.empty()) {
    mde << "change of " << p.delta;
  } else {
    mde << p.mde_label;
  }
  std::ostringstream st;
  st << "This experiment is powered at " << percent(1.0 - p.beta)
     << " to detect a " << mde.str() << " in any of " << p.success_count
     << " success metrics, controlling FWER at " << percent(p.alpha) << ".";
  plan.statement = st.str();
  return plan;
}

}  // namespace multitest
