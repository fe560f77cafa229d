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

#include "multitest/sequential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "multitest/error.hpp"
#include "multitest/normal.hpp"

namespace multitest {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectionTolerance = 1e-12;

void validate(const LookSchedule& s) {
  if (s.fractions.empty()) {
    throw ValidationError("schedule '" + s.metric_name + "' has no looks");
  }
  if (!(s.budget > 0.0 && s.budget < 1.0)) {
    throw ValidationError("schedule budget must lie in (0, 1)");
  }
  double prev = 0.0;
  for (double t : s.fractions) {
    if (!(t > prev) || t > 1.0) {
      throw ValidationError("schedule '" + s.metric_name +
                            "': fractions must be strictly increasing in "
                            "(0, 1]");
    }
    prev = t;
  }
}

// Target spends: cumulative f(t_k), with the final look topped up to the
// full budget.
void fill_spend(const LookSchedule& s, SpendingFunction fn,
                GstBoundaries& out) {
  const std::size_t k = s.fractions.size();
  out.cumulative_spend.resize(k);
  out.incremental_spend.resize(k);
  double prev = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double cum = i + 1 == k ? s.budget
                            : alpha_spend(fn, s.budget, s.fractions[i]);
    cum = std::max(cum, prev);
    out.cumulative_spend[i] = cum;
    out.incremental_spend[i] = cum - prev;
    prev = cum;
  }
}

double single_look_bound(double spend, Sides sides) {
  if (!(spend > 0.0)) return kInf;
  return norm_isf(sides == Sides::kTwo ? spend / 2.0 : spend);
}

// Nodes and Simpson weights on [lo, hi] with spacing at most `spacing`.
struct Grid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Grid simpson_grid(double lo, double hi, double spacing) {
  Grid g;
  std::size_t intervals = static_cast<std::size_t>(
      std::ceil((hi - lo) / std::max(spacing, 1e-12)));
  intervals = std::max<std::size_t>(intervals, 2);
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / static_cast<double>(intervals);
  g.nodes.resize(intervals + 1);
  g.weights.resize(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    g.nodes[i] = lo + h * static_cast<double>(i);
    double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    g.weights[i] = w * h / 3.0;
  }
  return g;
}

// Sub-density of the score S(t) = Z sqrt(t) on the continuation region,
// stored as mass per node (density * quadrature weight).
struct Continuation {
  std::vector<double> nodes;
  std::vector<double> mass;
};

// Probability that the path crosses at a look with score-scale threshold
// c = b sqrt(t_k), starting from `prev` with increment sd `sd`.
double crossing_mass(const Continuation& prev, double c, double sd,
                     Sides sides) {
  double total = 0.0;
  for (std::size_t j = 0; j < prev.nodes.size(); ++j) {
    const double u = prev.nodes[j];
    double p = norm_sf((c - u) / sd);
    if (sides == Sides::kTwo) p += norm_cdf((-c - u) / sd);
    total += prev.mass[j] * p;
  }
  return total;
}

class Recursion {
 public:
  Recursion(std::span<const double> fractions, Sides sides, double step,
            double range)
      : t_(fractions.begin(), fractions.end()),
        sides_(sides),
        step_(step),
        range_(range) {}

  std::size_t looks() const { return t_.size(); }

  // H0 crossing probability at look k for z bound b, given the state.
  double crossing(std::size_t k, double b) const {
    if (b == kInf) return 0.0;
    if (k == 0) {
      return sides_ == Sides::kTwo ? 2.0 * norm_sf(std::fabs(b)) : norm_sf(b);
    }
    const double sd = std::sqrt(t_[k] - t_[k - 1]);
    return crossing_mass(state_, b * std::sqrt(t_[k]), sd, sides_);
  }

  // Advance the continuation density past look k with bound b.
  void advance(std::size_t k, double b) {
    const double root_t = std::sqrt(t_[k]);
    const double zcap = std::min(b, range_);
    const double hi = zcap * root_t;
    const double lo = sides_ == Sides::kTwo ? -hi : -range_ * root_t;
    double spacing = step_ * root_t;
    if (k + 1 < t_.size()) {
      spacing = std::min(spacing, step_ * std::sqrt(t_[k + 1] - t_[k]));
    }
    Continuation next;
    if (!(hi > lo)) {
      state_ = std::move(next);
      return;
    }
    const Grid g = simpson_grid(lo, hi, spacing);
    next.nodes = g.nodes;
    next.mass.resize(g.nodes.size());
    if (k == 0) {
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        next.mass[i] = g.weights[i] * norm_pdf(g.nodes[i] / root_t) / root_t;
      }
    } else {
      const double sd = std::sqrt(t_[k] - t_[k - 1]);
      const double inv_sd = 1.0 / sd;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        double density = 0.0;
        const double s = g.nodes[i];
        for (std::size_t j = 0; j < state_.nodes.size(); ++j) {
          const double x = (s - state_.nodes[j]) * inv_sd;
          if (std::fabs(x) > 12.0) continue;
          density += state_.mass[j] * std::exp(-0.5 * x * x);
        }
        density *= inv_sd / std::sqrt(2.0 * std::numbers::pi);
        next.mass[i] = g.weights[i] * density;
      }
    }
    state_ = std::move(next);
  }

 private:
  std::vector<double> t_;
  Sides sides_;
  double step_;
  double range_;
  Continuation state_;
};

double solve_bound(const Recursion& rec, std::size_t k, double spend,
                   Sides sides) {
  if (!(spend > 0.0)) return kInf;
  double lo = sides == Sides::kTwo ? 0.0 : -10.0;
  double hi = 40.0;
  if (rec.crossing(k, lo) < spend) {
    std::ostringstream os;
    os << "look " << k << ": spend " << spend
       << " exceeds the remaining crossing probability";
    throw NumericError(os.str());
  }
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (rec.crossing(k, mid) > spend) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(SpendingFunction fn) {
  switch (fn) {
    case SpendingFunction::kObfType: return "obf_type";
    case SpendingFunction::kPocockType: return "pocock_type";
    case SpendingFunction::kLinear: return "linear";
  }
  return "unknown";
}

SpendingFunction parse_spending_function(std::string_view name) {
  if (name == "obf_type" || name == "obf") return SpendingFunction::kObfType;
  if (name == "pocock_type" || name == "pocock") {
    return SpendingFunction::kPocockType;
  }
  if (name == "linear") return SpendingFunction::kLinear;
  throw ValidationError("unknown spending function '" + std::string(name) +
                        "'");
}

std::string_view to_string(Sides sides) {
  return sides == Sides::kOne ? "one" : "two";
}

Sides parse_sides(std::string_view name) {
  if (name == "one") return Sides::kOne;
  if (name == "two") return Sides::kTwo;
  throw ValidationError("sides must be 'one' or 'two'");
}

InfoFraction info_fraction(double n_observed, double n_planned) {
  if (!(n_planned > 0.0)) {
    throw ValidationError("info_fraction: planned size must be > 0");
  }
  if (!(n_observed >= 0.0)) {
    throw ValidationError("info_fraction: observed size must be >= 0");
  }
  InfoFraction f;
  const double raw = n_observed / n_planned;
  f.immature = raw < kMinInfoFraction;
  f.overrun = raw > 1.0;
  f.value = std::clamp(raw, kMinInfoFraction, 1.0);
  return f;
}

double alpha_spend(SpendingFunction fn, double budget, double t) {
  if (!(t > 0.0)) throw DomainError("alpha_spend: t must be > 0");
  if (!(budget > 0.0 && budget < 1.0)) {
    throw DomainError("alpha_spend: budget must lie in (0, 1)");
  }
  if (t >= 1.0) return budget;
  switch (fn) {
    case SpendingFunction::kObfType:
      return 2.0 * norm_sf(norm_isf(budget / 2.0) / std::sqrt(t));
    case SpendingFunction::kPocockType:
      return budget * std::log1p((std::numbers::e - 1.0) * t);
    case SpendingFunction::kLinear:
      return budget * t;
  }
  return budget;
}

GstBoundaries gst_boundaries_at_step(const LookSchedule& schedule,
                                     SpendingFunction fn, double step,
                                     double range) {
  validate(schedule);
  if (!(step > 0.0)) throw ValidationError("grid step must be > 0");
  GstBoundaries out;
  out.schedule = schedule;
  out.spending = fn;
  out.grid_step = step;
  fill_spend(schedule, fn, out);

  Recursion rec(schedule.fractions, schedule.sides, step, range);
  const std::size_t k = schedule.fractions.size();
  out.z_bounds.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double b =
        i == 0 ? single_look_bound(out.incremental_spend[0], schedule.sides)
               : solve_bound(rec, i, out.incremental_spend[i], schedule.sides);
    out.z_bounds[i] = b;
    if (i + 1 < k) rec.advance(i, b);
  }
  return out;
}

GstBoundaries gst_boundaries(const LookSchedule& schedule, SpendingFunction fn,
                             const GridOptions& grid) {
  double step = grid.initial_step;
  GstBoundaries current = gst_boundaries_at_step(schedule, fn, step, grid.range);
  if (schedule.fractions.size() == 1) return current;
  for (int h = 0; h < grid.max_halvings; ++h) {
    step /= 2.0;
    GstBoundaries finer = gst_boundaries_at_step(schedule, fn, step, grid.range);
    double moved = 0.0;
    for (std::size_t i = 0; i < finer.z_bounds.size(); ++i) {
      if (std::isinf(finer.z_bounds[i]) || std::isinf(current.z_bounds[i])) {
        continue;
      }
      moved = std::max(moved,
                       std::fabs(finer.z_bounds[i] - current.z_bounds[i]));
    }
    current = std::move(finer);
    if (moved < grid.tolerance) break;
  }
  return current;
}

std::vector<double> crossing_probabilities(std::span<const double> fractions,
                                           std::span<const double> z_bounds,
                                           Sides sides, double step,
                                           double range) {
  if (fractions.size() != z_bounds.size()) {
    throw ValidationError("fractions and bounds differ in length");
  }
  Recursion rec(fractions, sides, step, range);
  std::vector<double> out(fractions.size());
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    out[i] = rec.crossing(i, z_bounds[i]);
    if (i + 1 < fractions.size()) rec.advance(i, z_bounds[i]);
  }
  return out;
}

GstBoundaries bonferroni_over_time(const LookSchedule& schedule,
                                   SpendingFunction fn) {
  validate(schedule);
  GstBoundaries out;
  out.schedule = schedule;
  out.spending = fn;
  fill_spend(schedule, fn, out);
  out.z_bounds.resize(schedule.fractions.size());
  for (std::size_t i = 0; i < out.z_bounds.size(); ++i) {
    out.z_bounds[i] =
        single_look_bound(out.incremental_spend[i], schedule.sides);
  }
  return out;
}

std::vector<GstBoundaries> multi_metric_sequential(
    std::vector<MetricSchedule> schedules, double alpha, int success_count,
    const GridOptions& grid) {
  if (success_count < 1) {
    throw ValidationError("success metric count must be >= 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
  if (static_cast<int>(schedules.size()) > success_count) {
    throw ValidationError("more schedules than success metrics");
  }
  std::vector<GstBoundaries> out;
  out.reserve(schedules.size());
  for (auto& ms : schedules) {
    ms.schedule.budget = alpha / success_count;
    out.push_back(gst_boundaries(ms.schedule, ms.spending, grid));
  }
  return out;
}

std::string_view to_string(LookStatus status) {
  switch (status) {
    case LookStatus::kContinue: return "continue";
    case LookStatus::kReject: return "reject";
    case LookStatus::kAlreadyStopped: return "already_stopped";
  }
  return "unknown";
}

SequentialMonitor::SequentialMonitor(std::vector<GstBoundaries> boundaries)
    : boundaries_(std::move(boundaries)) {
  if (boundaries_.empty()) throw ValidationError("monitor needs metrics");
  looks_ = boundaries_.front().z_bounds.size();
  for (const auto& b : boundaries_) {
    if (b.z_bounds.size() != looks_) {
      throw ValidationError(
          "all monitored metrics must share the same number of looks");
    }
  }
  rejected_at_.assign(boundaries_.size(), std::nullopt);
}

std::vector<LookStatus> SequentialMonitor::evaluate(
    std::size_t look, std::span<const double> zstats) {
  if (look != next_look_) {
    std::ostringstream os;
    os << "out-of-order look " << look << ", expected " << next_look_;
    throw ValidationError(os.str());
  }
  if (look >= looks_) throw ValidationError("look index beyond schedule");
  if (zstats.size() != boundaries_.size()) {
    throw ValidationError("one z statistic per metric required");
  }
  std::vector<LookStatus> out(boundaries_.size(), LookStatus::kContinue);
  for (std::size_t m = 0; m < boundaries_.size(); ++m) {
    if (rejected_at_[m]) {
      out[m] = LookStatus::kAlreadyStopped;
      continue;
    }
    const double bound = boundaries_[m].z_bounds[look];
    const double z = boundaries_[m].schedule.sides == Sides::kTwo
                         ? std::fabs(zstats[m])
                         : zstats[m];
    if (z >= bound) {
      out[m] = LookStatus::kReject;
      rejected_at_[m] = look;
    }
  }
  ++next_look_;
  return out;
}

}  // namespace multitest
