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

#include "multitest/vr_model.hpp"

#include <array>
#include <cmath>

#include "multitest/error.hpp"

namespace multitest {
namespace {

// Running within-arm moments of (a0, b0, a, b).
struct ArmMoments {
  std::int64_t n = 0;
  std::array<double, 4> sum{};
  std::array<std::array<double, 4>, 4> cross{};

  void add(const std::array<double, 4>& x) {
    ++n;
    for (int i = 0; i < 4; ++i) {
      sum[i] += x[i];
      for (int j = i; j < 4; ++j) cross[i][j] += x[i] * x[j];
    }
  }

  // Centered cross-product sum.
  double scatter(int i, int j) const {
    if (i > j) std::swap(i, j);
    return cross[i][j] - sum[i] * sum[j] / static_cast<double>(n);
  }
};

double pooled(const ArmMoments (&arms)[2], int i, int j) {
  return arms[0].scatter(i, j) + arms[1].scatter(i, j);
}

}  // namespace

void validate(const VrDgpParams& p) {
  if (!(p.sigma0_sq > 0.0) || !(p.sigma_eps_sq > 0.0)) {
    throw ValidationError("vr params: variances must be > 0");
  }
  if (!(std::fabs(p.rho0) <= 1.0) || !(std::fabs(p.rho_eps) <= 1.0)) {
    throw ValidationError(
        "vr params: implied covariance is not positive semidefinite "
        "(correlations must lie in [-1, 1])");
  }
  if (!std::isfinite(p.gamma) || !std::isfinite(p.gamma_for_b())) {
    throw ValidationError("vr params: gamma must be finite");
  }
}

double unadjusted_corr(const VrDgpParams& p) {
  validate(p);
  const double w0 = p.gamma * p.gamma * p.sigma0_sq;
  return (w0 * p.rho0 + p.sigma_eps_sq * p.rho_eps) / (w0 + p.sigma_eps_sq);
}

double decorrelation_gap(const VrDgpParams& p) {
  return unadjusted_corr(p) - p.rho_eps;
}

double vr_se_ratio(const VrDgpParams& p) {
  validate(p);
  return std::sqrt(1.0 + p.gamma * p.gamma * p.sigma0_sq / p.sigma_eps_sq);
}

VrSimResult simulate_dgp(const VrDgpParams& p, std::int64_t n,
                         RngStream& rng) {
  validate(p);
  if (n < 100) throw ValidationError("simulate_dgp: n must be >= 100");
  const double s0 = std::sqrt(p.sigma0_sq);
  const double se = std::sqrt(p.sigma_eps_sq);
  const double c0 = std::sqrt(1.0 - p.rho0 * p.rho0);
  const double ce = std::sqrt(1.0 - p.rho_eps * p.rho_eps);
  const double gb = p.gamma_for_b();

  ArmMoments arms[2];
  for (std::int64_t i = 0; i < n; ++i) {
    const int t = rng.bernoulli(0.5) ? 1 : 0;
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    const double e1 = rng.normal();
    const double e2 = rng.normal();
    const double a0 = s0 * z1;
    const double b0 = s0 * (p.rho0 * z1 + c0 * z2);
    const double ea = se * e1;
    const double eb = se * (p.rho_eps * e1 + ce * e2);
    const double a = p.mu_a + p.gamma * a0 + p.tau_a * t + ea;
    const double b = p.mu_b + gb * b0 + p.tau_b * t + eb;
    // Shifting by each arm's known mean keeps the one-pass moments stable;
    // within-arm correlations are unaffected.
    arms[t].add({a0, b0, a - p.mu_a - p.tau_a * t, b - p.mu_b - p.tau_b * t});
  }
  if (arms[0].n < 2 || arms[1].n < 2) {
    throw NumericError("simulate_dgp: an arm received fewer than 2 units");
  }

  enum { kA0 = 0, kB0 = 1, kA = 2, kB = 3 };
  VrSimResult r;
  r.n = n;
  const double saa = pooled(arms, kA, kA);
  const double sbb = pooled(arms, kB, kB);
  const double sab = pooled(arms, kA, kB);
  r.raw_corr = sab / std::sqrt(saa * sbb);

  const double sa0 = pooled(arms, kA0, kA0);
  const double sb0 = pooled(arms, kB0, kB0);
  r.gamma_hat_a = pooled(arms, kA, kA0) / sa0;
  r.gamma_hat_b = pooled(arms, kB, kB0) / sb0;
  const double ga = r.gamma_hat_a;
  const double gbh = r.gamma_hat_b;
  // Scatter of the adjusted outcomes A - ga A0 and B - gb B0, expanded.
  const double raa = saa - 2.0 * ga * pooled(arms, kA, kA0) + ga * ga * sa0;
  const double rbb = sbb - 2.0 * gbh * pooled(arms, kB, kB0) + gbh * gbh * sb0;
  const double rab = sab - ga * pooled(arms, kA0, kB) -
                     gbh * pooled(arms, kA, kB0) +
                     ga * gbh * pooled(arms, kA0, kB0);
  r.residual_corr = rab / std::sqrt(raa * rbb);
  return r;
}

}  // namespace multitest
