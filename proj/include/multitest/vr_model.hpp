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

#ifndef MULTITEST_VR_MODEL_HPP_
#define MULTITEST_VR_MODEL_HPP_

#include <cstdint>
#include <optional>

#include "multitest/rng.hpp"

namespace multitest {

// Linear outcome model for two metrics with pre-period covariates:
//   A = mu_a + gamma   A0 + tau_a T + eps_a
//   B = mu_b + gamma_b B0 + tau_b T + eps_b
// (A0, B0) have common variance sigma0_sq and correlation rho0, the
// residuals have variance sigma_eps_sq and correlation rho_eps, and the two
// pairs are independent. gamma_b defaults to gamma.
struct VrDgpParams {
  double gamma = 1.0;
  std::optional<double> gamma_b;
  double sigma0_sq = 1.0;
  double sigma_eps_sq = 1.0;
  double rho0 = 0.0;
  double rho_eps = 0.0;
  double tau_a = 0.0;
  double tau_b = 0.0;
  double mu_a = 0.0;
  double mu_b = 0.0;

  double gamma_for_b() const { return gamma_b.value_or(gamma); }
};

// Throws ValidationError when the covariance of (A0, B0, eps_a, eps_b) is
// not positive semidefinite or a variance is not positive.
void validate(const VrDgpParams& p);

// Correlation of the unadjusted outcomes within an arm:
//   (g^2 s0 rho0 + se rho_eps) / (g^2 s0 + se).
// Symmetric parameterization; gamma_b is ignored.
double unadjusted_corr(const VrDgpParams& p);

// unadjusted_corr - rho_eps. Positive iff rho_eps < rho0 and gamma != 0.
double decorrelation_gap(const VrDgpParams& p);

// Ratio of the unadjusted to the adjusted standard error of a difference
// in means, sqrt(1 + g^2 s0 / se).
double vr_se_ratio(const VrDgpParams& p);

struct VrSimResult {
  double raw_corr = 0.0;
  double residual_corr = 0.0;
  double gamma_hat_a = 0.0;
  double gamma_hat_b = 0.0;
  std::int64_t n = 0;
};

// Draws n units with 50/50 treatment assignment, adjusts each metric on its
// own pre-period value with an in-sample least-squares slope, and returns
// the within-arm correlations of the raw and adjusted outcomes.
VrSimResult simulate_dgp(const VrDgpParams& p, std::int64_t n,
                         RngStream& rng);

}  // namespace multitest

#endif  // MULTITEST_VR_MODEL_HPP_
