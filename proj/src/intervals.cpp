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

#include "multitest/intervals.hpp"

#include <cmath>

#include "multitest/error.hpp"
#include "multitest/normal.hpp"

namespace multitest {
namespace {

void check_common(std::span<const double> estimates,
                  std::span<const double> ses, double alpha, std::size_t m) {
  if (estimates.size() != ses.size()) {
    throw ValidationError("estimates and standard errors differ in length");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
  if (m < 1) throw ValidationError("family size must be >= 1");
  for (double se : ses) {
    if (!(se >= 0.0) || !std::isfinite(se)) {
      throw ValidationError("standard errors must be finite and >= 0");
    }
  }
}

Interval make_interval(double estimate, double se, double z, double level) {
  return {estimate - z * se, estimate + z * se, level};
}

}  // namespace

double bonferroni_critical_value(double alpha, std::size_t m) {
  return norm_isf(alpha / (2.0 * static_cast<double>(m)));
}

std::vector<Interval> bonferroni_cis(std::span<const double> estimates,
                                     std::span<const double> ses, double alpha,
                                     std::size_t m) {
  check_common(estimates, ses, alpha, m);
  if (m < estimates.size()) {
    throw ValidationError(
        "family size is smaller than the number of reported metrics");
  }
  const double z = bonferroni_critical_value(alpha, m);
  const double level = 1.0 - alpha / static_cast<double>(m);
  std::vector<Interval> out;
  out.reserve(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    out.push_back(make_interval(estimates[i], ses[i], z, level));
  }
  return out;
}

std::vector<SelectedInterval> fcr_cis(std::span<const double> estimates,
                                      std::span<const double> ses,
                                      std::span<const std::size_t> selected,
                                      double alpha, std::size_t m) {
  check_common(estimates, ses, alpha, m);
  if (selected.empty()) return {};
  if (selected.size() > m) {
    throw ValidationError("selection is larger than the family");
  }
  for (std::size_t idx : selected) {
    if (idx >= estimates.size() || idx >= m) {
      throw ValidationError("selected index out of range");
    }
  }
  const double level_alpha =
      static_cast<double>(selected.size()) * alpha / static_cast<double>(m);
  const double z = norm_isf(level_alpha / 2.0);
  std::vector<SelectedInterval> out;
  out.reserve(selected.size());
  for (std::size_t idx : selected) {
    out.push_back({idx, make_interval(estimates[idx], ses[idx], z,
                                      1.0 - level_alpha)});
  }
  return out;
}

std::vector<CiReportRow> ci_report(std::span<const double> estimates,
                                   std::span<const double> ses,
                                   std::span<const double> raw_pvalues,
                                   double alpha, std::size_t m) {
  const auto intervals = bonferroni_cis(estimates, ses, alpha, m);
  if (!raw_pvalues.empty() && raw_pvalues.size() != estimates.size()) {
    throw ValidationError("p-values and estimates differ in length");
  }
  const double threshold = alpha / static_cast<double>(m);
  const double z_crit = bonferroni_critical_value(alpha, m);
  std::vector<CiReportRow> rows;
  rows.reserve(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    CiReportRow row;
    row.index = i;
    row.interval = intervals[i];
    if (ses[i] > 0.0) {
      row.z = estimates[i] / ses[i];
    } else {
      row.z = estimates[i] == 0.0 ? 0.0 : std::copysign(INFINITY, estimates[i]);
    }
    const double derived = two_sided_p(row.z);
    row.pvalue = raw_pvalues.empty() ? derived : raw_pvalues[i];
    row.pvalue_mismatch = std::fabs(row.pvalue - derived) > 1e-6;
    // The test decision is taken on the z scale against the same critical
    // value the interval uses.
    row.rejected = std::fabs(row.z) > z_crit;
    row.ci_excludes_zero = row.interval.excludes(0.0);
    row.consistent = row.rejected == row.ci_excludes_zero &&
                     (row.pvalue < threshold) == row.rejected;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace multitest
