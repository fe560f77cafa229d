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

#include "multitest/adjust.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "multitest/error.hpp"

namespace multitest {
namespace {

constexpr std::size_t kMaxOracleSize = 16;

void validate_pvalues(std::span<const double> p) {
  if (p.empty()) throw ValidationError("no p-values");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      std::ostringstream os;
      os << "p-value " << i << " is outside [0, 1]: " << p[i];
      throw ValidationError(os.str());
    }
  }
}

std::vector<std::size_t> ascending_order(std::span<const double> p) {
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  return order;
}

// Step-down: running max over ascending ranks of factor(rank) * p_(rank).
template <typename Factor>
std::vector<double> step_down(std::span<const double> p, Factor factor) {
  const auto order = ascending_order(p);
  std::vector<double> out(p.size());
  double running = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    running = std::max(running, std::min(1.0, factor(r + 1) * p[order[r]]));
    out[order[r]] = running;
  }
  return out;
}

// Step-up: running min from the largest rank downwards.
template <typename Factor>
std::vector<double> step_up(std::span<const double> p, Factor factor) {
  const auto order = ascending_order(p);
  std::vector<double> out(p.size());
  double running = 1.0;
  for (std::size_t r = order.size(); r-- > 0;) {
    running = std::min(running, factor(r + 1) * p[order[r]]);
    out[order[r]] = std::min(1.0, running);
  }
  return out;
}

// Hommel adjusted p-values, O(m^2). Works on the sorted vector: for each
// subset size j (m-1 down to 2) the Simes p-value of the j largest
// hypotheses bounds the adjusted values from below.
std::vector<double> hommel(std::span<const double> p) {
  const std::size_t n = p.size();
  const auto order = ascending_order(p);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = p[order[i]];

  const double dn = static_cast<double>(n);
  double init = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    init = std::min(init, dn * s[i] / static_cast<double>(i + 1));
  }
  std::vector<double> pa(n, init);
  std::vector<double> q(n, init);
  for (std::size_t m = n - 1; m >= 2; --m) {
    const double dm = static_cast<double>(m);
    // Tail block holds the m - 1 largest ranks, n - m + 1 .. n - 1 (0-based).
    const std::size_t head = n - m + 1;
    double q1 = 1.0;
    for (std::size_t k = 2; k <= m; ++k) {
      q1 = std::min(q1, dm * s[n - m + k - 1] / static_cast<double>(k));
    }
    for (std::size_t i = 0; i < head; ++i) q[i] = std::min(dm * s[i], q1);
    for (std::size_t i = head; i < n; ++i) q[i] = q[head - 1];
    for (std::size_t i = 0; i < n; ++i) pa[i] = std::max(pa[i], q[i]);
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[order[i]] = std::min(1.0, std::max(pa[i], s[i]));
  }
  return out;
}

// Local test p-value of the intersection of the hypotheses in `members`.
double local_pvalue(std::vector<double>& members, LocalTest test) {
  std::sort(members.begin(), members.end());
  const double k = static_cast<double>(members.size());
  if (test == LocalTest::kBonferroni) return k * members.front();
  double best = 1.0;
  for (std::size_t j = 0; j < members.size(); ++j) {
    best = std::min(best, k * members[j] / static_cast<double>(j + 1));
  }
  return best;
}

}  // namespace

std::string_view to_string(AdjustMethod method) {
  switch (method) {
    case AdjustMethod::kNone: return "none";
    case AdjustMethod::kBonferroni: return "bonferroni";
    case AdjustMethod::kHolm: return "holm";
    case AdjustMethod::kHochberg: return "hochberg";
    case AdjustMethod::kHommel: return "hommel";
    case AdjustMethod::kBH: return "bh";
    case AdjustMethod::kBY: return "by";
  }
  return "unknown";
}

AdjustMethod parse_adjust_method(std::string_view name) {
  for (AdjustMethod m : all_adjust_methods()) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown adjustment method '" + std::string(name) +
                        "'");
}

const std::vector<AdjustMethod>& all_adjust_methods() {
  static const std::vector<AdjustMethod> kAll = {
      AdjustMethod::kNone,   AdjustMethod::kBonferroni, AdjustMethod::kHolm,
      AdjustMethod::kHochberg, AdjustMethod::kHommel,   AdjustMethod::kBH,
      AdjustMethod::kBY};
  return kAll;
}

double harmonic_constant(std::size_t m) {
  double c = 0.0;
  for (std::size_t k = m; k >= 1; --k) c += 1.0 / static_cast<double>(k);
  return c;
}

AdjustedPValues adjust(std::span<const double> pvalues, AdjustMethod method) {
  validate_pvalues(pvalues);
  const std::size_t m = pvalues.size();
  const double dm = static_cast<double>(m);
  AdjustedPValues out;
  out.raw.assign(pvalues.begin(), pvalues.end());
  out.method = method;
  out.family_size = m;

  switch (method) {
    case AdjustMethod::kNone:
      out.adjusted = out.raw;
      break;
    case AdjustMethod::kBonferroni:
      out.adjusted.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        out.adjusted[i] = std::min(1.0, dm * pvalues[i]);
      }
      break;
    case AdjustMethod::kHolm:
      out.adjusted = step_down(pvalues, [&](std::size_t rank) {
        return static_cast<double>(m - rank + 1);
      });
      break;
    case AdjustMethod::kHochberg:
      out.adjusted = step_up(pvalues, [&](std::size_t rank) {
        return static_cast<double>(m - rank + 1);
      });
      break;
    case AdjustMethod::kHommel:
      out.adjusted = m == 1 ? out.raw : hommel(pvalues);
      break;
    case AdjustMethod::kBH:
      out.adjusted = step_up(pvalues, [&](std::size_t rank) {
        return dm / static_cast<double>(rank);
      });
      break;
    case AdjustMethod::kBY: {
      const double c = harmonic_constant(m);
      out.adjusted = step_up(pvalues, [&](std::size_t rank) {
        return c * (dm / static_cast<double>(rank));
      });
      break;
    }
  }
  return out;
}

std::vector<std::size_t> reject_set(const AdjustedPValues& adj, double alpha) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < adj.adjusted.size(); ++i) {
    if (adj.adjusted[i] < alpha) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> closure_oracle(std::span<const double> pvalues,
                                        LocalTest local_test, double alpha) {
  validate_pvalues(pvalues);
  const std::size_t m = pvalues.size();
  if (m > kMaxOracleSize) {
    throw ValidationError("closure_oracle supports at most 16 hypotheses");
  }
  const std::uint32_t full = (1u << m) - 1u;
  std::vector<bool> rejectable(m, true);
  std::vector<double> members;
  members.reserve(m);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    members.clear();
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) members.push_back(pvalues[i]);
    }
    if (local_pvalue(members, local_test) < alpha) continue;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask & (1u << i)) rejectable[i] = false;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < m; ++i) {
    if (rejectable[i]) out.push_back(i);
  }
  return out;
}

double effective_count(const Matrix& correlation) {
  const Vector eig = symmetric_eigenvalues(correlation);
  const Eigen::Index m = eig.size();
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::fabs(correlation(i, i) - 1.0) > 1e-12) {
      throw ValidationError("effective_count: diagonal must be 1");
    }
  }
  if (eig(0) < -1e-10) {
    throw ValidationError("effective_count: matrix is not PSD");
  }
  if (m == 1) return 1.0;
  const double mean = eig.mean();
  const double var =
      (eig.array() - mean).square().sum() / static_cast<double>(m - 1);
  const double dm = static_cast<double>(m);
  const double meff = 1.0 + (dm - 1.0) * (1.0 - var / dm);
  return std::clamp(meff, 1.0, dm);
}

}  // namespace multitest
