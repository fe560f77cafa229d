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

#ifndef MULTITEST_INTERVALS_HPP_
#define MULTITEST_INTERVALS_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace multitest {

// Two-sided normal-theory interval. `level` is the nominal per-interval
// coverage, e.g. 1 - alpha/m for a Bonferroni family of m.
struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;

  bool excludes(double value) const { return value < lower || value > upper; }
  bool covers(double value) const { return !excludes(value); }
};

// Critical value z_{alpha/(2m)} shared by the intervals and the test
// decision so the two can never disagree.
double bonferroni_critical_value(double alpha, std::size_t m);

// estimate +- z_{alpha/(2m)} * se for each metric. m is the family size
// and must be at least the number of estimates. se == 0 yields a
// degenerate interval at the estimate.
std::vector<Interval> bonferroni_cis(std::span<const double> estimates,
                                     std::span<const double> ses, double alpha,
                                     std::size_t m);

struct SelectedInterval {
  std::size_t index = 0;
  Interval interval;
};

// False-coverage-rate intervals for a selected subset R of a family of m:
// each selected parameter gets a 1 - |R| * alpha / m interval. Unselected
// indices get nothing. An empty selection returns an empty vector.
std::vector<SelectedInterval> fcr_cis(std::span<const double> estimates,
                                      std::span<const double> ses,
                                      std::span<const std::size_t> selected,
                                      double alpha, std::size_t m);

struct CiReportRow {
  std::size_t index = 0;
  double z = 0.0;
  double pvalue = 0.0;
  bool rejected = false;       // p < alpha / m
  Interval interval;           // 1 - alpha/m
  bool ci_excludes_zero = false;
  bool consistent = true;      // rejected == ci_excludes_zero
  bool pvalue_mismatch = false;  // supplied p differs from est/se by > 1e-6
};

// Pairs each metric's Bonferroni test decision with its interval. When
// `raw_pvalues` is empty the two-sided p is derived from est/se.
std::vector<CiReportRow> ci_report(std::span<const double> estimates,
                                   std::span<const double> ses,
                                   std::span<const double> raw_pvalues,
                                   double alpha, std::size_t m);

}  // namespace multitest

#endif  // MULTITEST_INTERVALS_HPP_
