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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "multitest/error.hpp"
#include "multitest/normal.hpp"
#include "multitest/sequential.hpp"
#include "oracles.hpp"

namespace multitest {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LookSchedule sched(std::vector<double> t, double budget = 0.05,
                   Sides sides = Sides::kTwo) {
  return {"m", std::move(t), budget, sides};
}

double phi(double x) { return static_cast<double>(oracle::norm_cdf(x)); }

// P(no crossing at look 1, crossing at look 2) for two-sided bounds, by
// brute-force midpoint integration over Z1 with the exact conditional tail
// of Z2 = (sqrt(t1) Z1 + sqrt(t2 - t1) W) / sqrt(t2).
double two_look_second_crossing(double t1, double t2, double b1, double b2) {
  const int n = 400000;
  const double h = 2.0 * b1 / n;
  const double r = std::sqrt(t1 / t2);
  const double s = std::sqrt(1.0 - r * r);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z1 = -b1 + (i + 0.5) * h;
    const double dens = std::exp(-0.5 * z1 * z1) / std::sqrt(2 * M_PI);
    const double up = 1.0 - phi((b2 - r * z1) / s);
    const double down = phi((-b2 - r * z1) / s);
    sum += dens * (up + down) * h;
  }
  return sum;
}

TEST(AlphaSpend, Values) {
  EXPECT_NEAR(alpha_spend(SpendingFunction::kObfType, 0.05, 0.5),
              2 * (1 - phi(1.959963984540054 / std::sqrt(0.5))), 1e-12);
  EXPECT_NEAR(alpha_spend(SpendingFunction::kObfType, 0.05, 0.5), 0.0055746,
              1e-6);
  EXPECT_NEAR(alpha_spend(SpendingFunction::kPocockType, 0.05, 0.5),
              0.05 * std::log(1 + (std::exp(1.0) - 1) / 2), 1e-15);
  EXPECT_NEAR(alpha_spend(SpendingFunction::kPocockType, 0.05, 0.5), 0.031005,
              1e-6);
  for (auto fn : {SpendingFunction::kObfType, SpendingFunction::kPocockType,
                  SpendingFunction::kLinear}) {
    EXPECT_NEAR(alpha_spend(fn, 0.05, 1.0), 0.05, 1e-12);
    EXPECT_NEAR(alpha_spend(fn, 0.05, 1e-14), 0.0, 1e-12);
    EXPECT_THROW(alpha_spend(fn, 0.05, 0.0), DomainError);
    double prev = 0.0;
    for (double t = 0.01; t <= 1.0; t += 0.01) {
      const double a = alpha_spend(fn, 0.05, t);
      EXPECT_GE(a, prev);
      prev = a;
    }
  }
}

TEST(InfoFraction, ClampsAndFlags) {
  EXPECT_EQ(info_fraction(500, 1000).value, 0.5);
  const auto zero = info_fraction(0, 1000);
  EXPECT_EQ(zero.value, kMinInfoFraction);
  EXPECT_TRUE(zero.immature);
  const auto over = info_fraction(1200, 1000);
  EXPECT_EQ(over.value, 1.0);
  EXPECT_TRUE(over.overrun);
  EXPECT_THROW(info_fraction(1, 0), ValidationError);
}

TEST(GstBoundaries, SingleLookIsFixedTest) {
  const auto b = gst_boundaries(sched({1.0}), SpendingFunction::kObfType);
  ASSERT_EQ(b.z_bounds.size(), 1u);
  EXPECT_NEAR(b.z_bounds[0], 1.959964, 1e-6);
  const auto bot = bonferroni_over_time(sched({1.0}),
                                        SpendingFunction::kObfType);
  EXPECT_NEAR(bot.z_bounds[0], b.z_bounds[0], 1e-9);
}

TEST(GstBoundaries, PublishedTwoLookOneSided) {
  // Lan-DeMets O'Brien-Fleming type, one-sided 0.025, looks at 1/2 and 1;
  // the standard tabulated bounds are 2.9626 and 1.9686.
  const auto b = gst_boundaries(sched({0.5, 1.0}, 0.025, Sides::kOne),
                                SpendingFunction::kObfType);
  EXPECT_NEAR(b.z_bounds[0], 2.9626, 1e-3);
  EXPECT_NEAR(b.z_bounds[1], 1.9686, 1e-3);
}

TEST(GstBoundaries, TwoLookOracle) {
  for (auto fn : {SpendingFunction::kObfType, SpendingFunction::kPocockType,
                  SpendingFunction::kLinear}) {
    for (double t1 : {0.3, 0.5, 0.8}) {
      const auto b = gst_boundaries(sched({t1, 1.0}), fn);
      EXPECT_NEAR(2 * (1 - phi(b.z_bounds[0])), b.incremental_spend[0],
                  1e-9);
      EXPECT_NEAR(
          two_look_second_crossing(t1, 1.0, b.z_bounds[0], b.z_bounds[1]),
          b.incremental_spend[1], 2e-6);
    }
  }
}

TEST(GstBoundaries, SelfConsistencyAndConvergence) {
  const std::vector<double> t{0.2, 0.4, 0.6, 0.8, 1.0};
  for (auto fn : {SpendingFunction::kObfType, SpendingFunction::kPocockType,
                  SpendingFunction::kLinear}) {
    for (auto sides : {Sides::kOne, Sides::kTwo}) {
      const auto b = gst_boundaries(sched(t, 0.05, sides), fn);
      const auto cross = crossing_probabilities(t, b.z_bounds, sides,
                                                b.grid_step / 2);
      for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_NEAR(cross[k], b.incremental_spend[k], 1e-6);
      }
      const auto coarse =
          gst_boundaries_at_step(sched(t, 0.05, sides), fn, 0.05);
      const auto fine =
          gst_boundaries_at_step(sched(t, 0.05, sides), fn, 0.025);
      for (std::size_t k = 0; k < t.size(); ++k) {
        EXPECT_LT(std::fabs(coarse.z_bounds[k] - fine.z_bounds[k]), 1e-4);
      }
    }
  }
}

TEST(GstBoundaries, MatchesBrownianMonteCarlo) {
  const std::vector<double> t{0.25, 0.5, 0.75, 1.0};
  const auto b = gst_boundaries(sched(t), SpendingFunction::kPocockType);
  std::mt19937_64 gen(41);
  std::normal_distribution<double> n01;
  const int paths = 100000;
  std::vector<int> first(t.size(), 0);
  for (int p = 0; p < paths; ++p) {
    double s = 0.0, prev = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      s += std::sqrt(t[k] - prev) * n01(gen);
      prev = t[k];
      if (std::fabs(s / std::sqrt(t[k])) >= b.z_bounds[k]) {
        ++first[k];
        break;
      }
    }
  }
  double cum = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    cum += static_cast<double>(first[k]) / paths;
    const double target = b.cumulative_spend[k];
    EXPECT_NEAR(cum, target, 3 * std::sqrt(target * (1 - target) / paths))
        << k;
  }
}

TEST(GstBoundaries, ObfDecreasesAndSentinels) {
  const auto b = gst_boundaries(sched({0.2, 0.4, 0.6, 0.8, 1.0}),
                                SpendingFunction::kObfType);
  for (std::size_t k = 1; k < b.z_bounds.size(); ++k) {
    EXPECT_LT(b.z_bounds[k], b.z_bounds[k - 1]);
  }
  const auto s = gst_boundaries(sched({1e-4, 1.0}), SpendingFunction::kObfType);
  EXPECT_EQ(s.z_bounds[0], kInf);
  EXPECT_NEAR(s.z_bounds[1], 1.959964, 1e-6);
  EXPECT_THROW(gst_boundaries(sched({0.5, 0.4, 1.0}),
                              SpendingFunction::kLinear),
               ValidationError);
  EXPECT_THROW(gst_boundaries(sched({0.5, 0.5}), SpendingFunction::kLinear),
               ValidationError);
}

TEST(BonferroniOverTime, EqualSplitAndDominance) {
  const auto b = bonferroni_over_time(sched({0.5, 1.0}),
                                      SpendingFunction::kLinear);
  EXPECT_NEAR(b.z_bounds[0], 2.241403, 1e-6);
  EXPECT_NEAR(b.z_bounds[1], 2.241403, 1e-6);
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::uniform_int_distribution<int> kk(1, 6);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> t;
    const int k = kk(gen);
    for (int i = 0; i < k - 1; ++i) t.push_back(u(gen));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    t.push_back(1.0);
    for (auto fn : {SpendingFunction::kObfType,
                    SpendingFunction::kPocockType}) {
      for (auto sides : {Sides::kOne, Sides::kTwo}) {
        const auto g = gst_boundaries(sched(t, 0.05, sides), fn);
        const auto bot = bonferroni_over_time(sched(t, 0.05, sides), fn);
        for (std::size_t i = 0; i < t.size(); ++i) {
          EXPECT_GE(bot.z_bounds[i], g.z_bounds[i] - 1e-9);
        }
      }
    }
  }
}

TEST(MultiMetric, SplitsBudgetAndKeepsOwnFractions) {
  const MetricSchedule a{sched({0.2, 0.5, 1.0}), SpendingFunction::kObfType};
  const MetricSchedule b{sched({0.6, 1.0}), SpendingFunction::kObfType};
  const auto single = multi_metric_sequential({a}, 0.05, 1);
  const auto direct = gst_boundaries(a.schedule, a.spending);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(single[0].z_bounds[k], direct.z_bounds[k], 1e-12);
  }
  const auto two = multi_metric_sequential({a, b}, 0.05, 2);
  EXPECT_NEAR(two[0].schedule.budget, 0.025, 1e-15);
  EXPECT_NEAR(two[1].cumulative_spend.back(), 0.025, 1e-12);
  EXPECT_EQ(two[0].z_bounds.size(), 3u);
  EXPECT_EQ(two[1].z_bounds.size(), 2u);
  EXPECT_THROW(multi_metric_sequential({a, b}, 0.05, 1), ValidationError);
}

TEST(SequentialMonitor, ContinueRejectAbsorb) {
  GstBoundaries b;
  b.schedule = sched({0.5, 1.0});
  b.z_bounds = {3.0, 2.0};
  SequentialMonitor mon({b, b});
  const std::vector<double> z0{1.0, 3.0};
  auto s = mon.evaluate(0, z0);
  EXPECT_EQ(s[0], LookStatus::kContinue);
  EXPECT_EQ(s[1], LookStatus::kReject);  // equality rejects
  EXPECT_THROW(mon.evaluate(0, z0), ValidationError);
  const std::vector<double> z1{-2.0, 0.0};
  s = mon.evaluate(1, z1);
  EXPECT_EQ(s[0], LookStatus::kReject);
  EXPECT_EQ(s[1], LookStatus::kAlreadyStopped);
  EXPECT_EQ(mon.rejected_at()[1], 0u);
}

}  // namespace
}  // namespace multitest
