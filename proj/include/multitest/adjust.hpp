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

#ifndef MULTITEST_ADJUST_HPP_
#define MULTITEST_ADJUST_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multitest/linalg.hpp"

namespace multitest {

enum class AdjustMethod { kNone, kBonferroni, kHolm, kHochberg, kHommel, kBH, kBY };

std::string_view to_string(AdjustMethod method);
// Accepts the lower-case names used on the command line ("none",
// "bonferroni", "holm", "hochberg", "hommel", "bh", "by").
AdjustMethod parse_adjust_method(std::string_view name);
const std::vector<AdjustMethod>& all_adjust_methods();

// Benjamini-Yekutieli constant c(m) = sum_{k=1..m} 1/k.
double harmonic_constant(std::size_t m);

struct AdjustedPValues {
  std::vector<double> raw;
  std::vector<double> adjusted;  // same order as `raw`
  AdjustMethod method = AdjustMethod::kNone;
  std::size_t family_size = 0;
};

// Adjusted p-values under `method`. Ties are ordered by input position.
// Throws ValidationError on an empty vector or any p outside [0, 1].
AdjustedPValues adjust(std::span<const double> pvalues, AdjustMethod method);

// Indices with adjusted p strictly below alpha, ascending.
std::vector<std::size_t> reject_set(const AdjustedPValues& adj, double alpha);

enum class LocalTest { kBonferroni, kSimes };

// Brute-force closed testing: H_i is rejected iff every intersection
// hypothesis containing i is rejected by the local test (strictly) at
// `alpha`. Enumerates all 2^m - 1 intersections; m is capped at 16.
std::vector<std::size_t> closure_oracle(std::span<const double> pvalues,
                                        LocalTest local_test, double alpha);

// Nyholt effective number of tests, clamped to [1, m]. Informational
// only; never used as a correction denominator.
double effective_count(const Matrix& correlation);

}  // namespace multitest

#endif  // MULTITEST_ADJUST_HPP_
