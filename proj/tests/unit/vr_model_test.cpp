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
#include <random>

#include <gtest/gtest.h>

#include "multitest/error.hpp"
#include "multitest/rng.hpp"
#include "multitest/vr_model.hpp"

namespace multitest {
namespace {

VrDgpParams params(double gamma, double s0, double se, double rho0,
                   double rho_eps) {
  VrDgpParams p;
  p.gamma = gamma;
  p.sigma0_sq = s0;
  p.sigma_eps_sq = se;
  p.rho0 = rho0;
  p.rho_eps = rho_eps;
  return p;
}

TEST(UnadjustedCorr, ClosedFormCases) {
  EXPECT_NEAR(unadjusted_corr(params(0.7, 2.0, 0.5, 0.3, 0.3)), 0.3, 1e-15);
  EXPECT_NEAR(unadjusted_corr(params(0.0, 2.0, 0.5, 0.9, 0.1)), 0.1, 1e-15);
  EXPECT_NEAR(unadjusted_corr(params(1.0, 1.0, 1.0, 0.8, 0.2)), 0.5, 1e-15);
}

TEST(UnadjustedCorr, ConvexCombinationAndGapSign) {
  std::mt19937_64 gen(51);
  std::uniform_real_distribution<double> g(-2, 2), v(0.1, 3), r(-0.9, 0.9);
  for (int i = 0; i < 5000; ++i) {
    const auto p = params(g(gen), v(gen), v(gen), r(gen), r(gen));
    const double c = unadjusted_corr(p);
    EXPECT_GE(c, std::min(p.rho0, p.rho_eps) - 1e-12);
    EXPECT_LE(c, std::max(p.rho0, p.rho_eps) + 1e-12);
    const double gap = decorrelation_gap(p);
    EXPECT_NEAR(gap, c - p.rho_eps, 1e-15);
    EXPECT_EQ(gap > 0, p.rho_eps < p.rho0 && p.gamma != 0.0);
  }
  EXPECT_EQ(decorrelation_gap(params(1, 1, 1, 0.4, 0.4)), 0.0);
}

TEST(Validate, RejectsBadParameters) {
  EXPECT_THROW(validate(params(1, -1, 1, 0, 0)), ValidationError);
  EXPECT_THROW(validate(params(1, 1, 1, 1.2, 0)), ValidationError);
  EXPECT_THROW(validate(params(1, 1, 0, 0, 0)), ValidationError);
}

TEST(SimulateDgp, SymmetricCaseMatchesClosedForm) {
  RngStream rng(52, 0);
  const auto p = params(1.0, 1.0, 1.0, 0.8, 0.2);
  const auto r = simulate_dgp(p, 100000, rng);
  EXPECT_NEAR(r.raw_corr, 0.5, 0.02);
  EXPECT_NEAR(r.residual_corr, 0.2, 0.02);
  EXPECT_NEAR(r.gamma_hat_a, 1.0, 0.02);
}

TEST(SimulateDgp, NoPrePeriodSignal) {
  RngStream rng(53, 0);
  const auto r = simulate_dgp(params(0.0, 1.0, 1.0, 0.7, 0.3), 100000, rng);
  EXPECT_NEAR(r.raw_corr, 0.3, 0.02);
  EXPECT_NEAR(r.residual_corr, 0.3, 0.02);
}

TEST(SimulateDgp, DeterministicAndGuarded) {
  const auto p = params(0.5, 1.0, 2.0, 0.5, 0.1);
  RngStream a(54, 3), b(54, 3);
  const auto x = simulate_dgp(p, 5000, a);
  const auto y = simulate_dgp(p, 5000, b);
  EXPECT_EQ(x.raw_corr, y.raw_corr);
  EXPECT_EQ(x.residual_corr, y.residual_corr);
  EXPECT_THROW(simulate_dgp(p, 99, a), ValidationError);
}

TEST(SimulateDgp, ErrorShrinksLikeRootN) {
  const auto p = params(0.8, 1.5, 1.0, 0.6, 0.1);
  const double truth = unadjusted_corr(p);
  for (std::int64_t n : {1000, 10000, 100000}) {
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      RngStream rng(55, static_cast<std::uint64_t>(rep));
      worst = std::max(worst,
                       std::fabs(simulate_dgp(p, n, rng).raw_corr - truth));
    }
    EXPECT_LT(worst, 4.0 / std::sqrt(static_cast<double>(n))) << n;
  }
}

TEST(SeRatio, GrowsWithPrePeriodVariance) {
  EXPECT_NEAR(vr_se_ratio(params(0.0, 1.0, 1.0, 0, 0)), 1.0, 1e-15);
  EXPECT_NEAR(vr_se_ratio(params(1.0, 1.0, 1.0, 0, 0)), std::sqrt(2.0),
              1e-15);
}

}  // namespace
}  // namespace multitest
