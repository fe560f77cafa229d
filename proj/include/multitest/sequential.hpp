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

#ifndef MULTITEST_SEQUENTIAL_HPP_
#define MULTITEST_SEQUENTIAL_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace multitest {

// Lan-DeMets style spending functions, scaled to a budget alpha:
//   obf_type:    2 (1 - Phi(z_{alpha/2} / sqrt(t)))
//   pocock_type: alpha * ln(1 + (e - 1) t)
//   linear:      alpha * t
enum class SpendingFunction { kObfType, kPocockType, kLinear };
enum class Sides { kOne, kTwo };

std::string_view to_string(SpendingFunction fn);
SpendingFunction parse_spending_function(std::string_view name);
std::string_view to_string(Sides sides);
Sides parse_sides(std::string_view name);

struct LookSchedule {
  std::string metric_name;
  std::vector<double> fractions;  // 0 < t_1 < ... < t_K <= 1
  double budget = 0.05;
  Sides sides = Sides::kTwo;
};

struct GstBoundaries {
  LookSchedule schedule;
  SpendingFunction spending = SpendingFunction::kObfType;
  // Critical values on the z scale; +infinity where a look spends nothing.
  std::vector<double> z_bounds;
  std::vector<double> cumulative_spend;
  std::vector<double> incremental_spend;
  double grid_step = 0.0;  // final grid step (z units); 0 for closed forms
};

struct InfoFraction {
  double value = 0.0;
  bool immature = false;  // nothing observed yet; clamped to epsilon
  bool overrun = false;   // observed exceeded planned; clamped to 1
};

inline constexpr double kMinInfoFraction = 1e-6;

InfoFraction info_fraction(double n_observed, double n_planned);

// Spend at information time t in (0, 1]. Throws DomainError for t <= 0.
double alpha_spend(SpendingFunction fn, double budget, double t);

struct GridOptions {
  double range = 8.0;          // integrate z over [-range, range]
  double initial_step = 0.05;  // z units
  double tolerance = 1e-5;     // stop halving when bounds move less
  int max_halvings = 4;
};

// Boundaries whose H0 first-crossing probabilities match the incremental
// spend at every look. The statistic is standardized Brownian motion
// observed at the schedule's own information fractions; the recursion
// integrates the continuation density with Simpson's rule and each bound
// is found by bisection. The final look spends whatever budget remains.
GstBoundaries gst_boundaries(const LookSchedule& schedule, SpendingFunction fn,
                             const GridOptions& grid = {});

// Same recursion at one fixed grid step, no refinement.
GstBoundaries gst_boundaries_at_step(const LookSchedule& schedule,
                                     SpendingFunction fn, double step,
                                     double range = 8.0);

// H0 first-crossing probability at each look for given bounds, by the
// same numerical recursion.
std::vector<double> crossing_probabilities(std::span<const double> fractions,
                                           std::span<const double> z_bounds,
                                           Sides sides, double step,
                                           double range = 8.0);

// Each look tested alone at its incremental spend, ignoring the
// correlation between looks. Never below the gst_boundaries bound.
GstBoundaries bonferroni_over_time(const LookSchedule& schedule,
                                   SpendingFunction fn);

struct MetricSchedule {
  LookSchedule schedule;
  SpendingFunction spending = SpendingFunction::kObfType;
};

// Bonferroni composition: every metric gets budget alpha / S and its own
// boundaries at its own information fractions.
std::vector<GstBoundaries> multi_metric_sequential(
    std::vector<MetricSchedule> schedules, double alpha, int success_count,
    const GridOptions& grid = {});

enum class LookStatus { kContinue, kReject, kAlreadyStopped };
std::string_view to_string(LookStatus status);

// Append-only interim monitor over several metrics sharing calendar
// looks. A metric rejects when |z| >= bound (z >= bound one-sided) and is
// absorbed afterwards.
class SequentialMonitor {
 public:
  explicit SequentialMonitor(std::vector<GstBoundaries> boundaries);

  // `look` must be the next unevaluated look index.
  std::vector<LookStatus> evaluate(std::size_t look,
                                   std::span<const double> zstats);

  std::size_t next_look() const { return next_look_; }
  std::size_t look_count() const { return looks_; }
  const std::vector<std::optional<std::size_t>>& rejected_at() const {
    return rejected_at_;
  }
  const std::vector<GstBoundaries>& boundaries() const { return boundaries_; }

 private:
  std::vector<GstBoundaries> boundaries_;
  std::vector<std::optional<std::size_t>> rejected_at_;
  std::size_t looks_ = 0;
  std::size_t next_look_ = 0;
};

}  // namespace multitest

#endif  // MULTITEST_SEQUENTIAL_HPP_
