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

#ifndef MULTITEST_NORMAL_HPP_
#define MULTITEST_NORMAL_HPP_

namespace multitest {

// Standard normal density.
double norm_pdf(double x);

// Standard normal CDF. Saturates to exactly 0 / 1 beyond |x| > 40.
double norm_cdf(double x);

// Upper tail 1 - Phi(x), computed without cancellation for large x.
double norm_sf(double x);

// Inverse of norm_cdf. Throws DomainError unless 0 < p < 1.
double norm_quantile(double p);

// Upper-tail critical value: the z with norm_sf(z) == q. This is the
// z_q of textbook sample-size formulas (z_{0.025} = 1.959964).
double norm_isf(double q);

// Two-sided p-value 2 * (1 - Phi(|z|)).
double two_sided_p(double z);

// Chi-square survival function P(X > x), X ~ chi2(df).
// Throws DomainError for df < 1 or x < 0.
double chisq_sf(double x, int df);

}  // namespace multitest

#endif  // MULTITEST_NORMAL_HPP_
