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

#include "multitest/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "multitest/error.hpp"
#include "multitest/normal.hpp"
#include "multitest/parallel.hpp"
#include "multitest/rng.hpp"

namespace multitest {
namespace {

double proportion_se(double p, std::int64_t n) {
  return n > 0 ? std::sqrt(p * (1.0 - p) / static_cast<double>(n)) : 0.0;
}

double pvalue_of(double z, Sides sides) {
  return sides == Sides::kOne ? norm_sf(z) : two_sided_p(z);
}

// Draws one replication's null noise on the z scale: a vector distributed
// as N(0, R) where R is the correlation matrix with Cholesky factor L.
class NoiseSampler {
 public:
  NoiseSampler(const Matrix& lower, SimMode mode, std::int64_t n_ctrl,
               std::int64_t n_treat)
      : lower_(lower),
        mode_(mode),
        n_ctrl_(n_ctrl),
        n_treat_(n_treat),
        scratch_(lower.rows()),
        draw_(lower.rows()),
        sum_c_(lower.rows()),
        sum_t_(lower.rows()) {}

  void sample(RngStream& rng, Vector& out) {
    if (mode_ == SimMode::kSufficient) {
      mvn_sample_into(lower_, rng, scratch_, out);
      return;
    }
    sum_c_.setZero();
    sum_t_.setZero();
    for (std::int64_t i = 0; i < n_ctrl_; ++i) {
      mvn_sample_into(lower_, rng, scratch_, draw_);
      sum_c_ += draw_;
    }
    for (std::int64_t i = 0; i < n_treat_; ++i) {
      mvn_sample_into(lower_, rng, scratch_, draw_);
      sum_t_ += draw_;
    }
    const double nc = static_cast<double>(n_ctrl_);
    const double nt = static_cast<double>(n_treat_);
    const double scale = 1.0 / std::sqrt(1.0 / nc + 1.0 / nt);
    out = (sum_t_ / nt - sum_c_ / nc) * scale;
  }

 private:
  const Matrix& lower_;
  SimMode mode_;
  std::int64_t n_ctrl_;
  std::int64_t n_treat_;
  Vector scratch_, draw_, sum_c_, sum_t_;
};

struct RepOutcome {
  bool power = false;
  bool fwer = false;
  bool any = false;
};

RepOutcome score(const std::vector<double>& p, AdjustMethod method,
                 double alpha, int k) {
  const AdjustedPValues adj = adjust(p, method);
  RepOutcome o;
  for (std::size_t i : reject_set(adj, alpha)) {
    o.any = true;
    if (static_cast<int>(i) < k) {
      o.power = true;
    } else {
      o.fwer = true;
    }
  }
  return o;
}

}  // namespace

std::string_view to_string(SimMode mode) {
  return mode == SimMode::kSufficient ? "sufficient" : "raw";
}

SimMode parse_sim_mode(std::string_view name) {
  if (name == "sufficient") return SimMode::kSufficient;
  if (name == "raw") return SimMode::kRaw;
  throw ValidationError("mode must be 'sufficient' or 'raw'");
}

double PowerCell::power() const {
  return reps ? static_cast<double>(power_hits) / reps : 0.0;
}
double PowerCell::fwer() const {
  return reps ? static_cast<double>(fwer_hits) / reps : 0.0;
}
double PowerCell::power_se() const { return proportion_se(power(), reps); }
double PowerCell::fwer_se() const { return proportion_se(fwer(), reps); }
double PowerCell::advantage() const {
  return reps ? static_cast<double>(gain_vs_bonferroni - loss_vs_bonferroni) /
                    reps
              : 0.0;
}
double PowerCell::advantage_se() const {
  if (!reps) return 0.0;
  const double n = static_cast<double>(reps);
  const double mean = advantage();
  const double second = (gain_vs_bonferroni + loss_vs_bonferroni) / n;
  return std::sqrt(std::max(second - mean * mean, 0.0) / n);
}

const PowerCell& PowerTable::cell(AdjustMethod method, double delta) const {
  for (const auto& c : cells) {
    if (c.method == method && std::fabs(c.delta - delta) < 1e-12) return c;
  }
  std::ostringstream os;
  os << "no cell for " << to_string(method) << " at delta " << delta;
  throw ValidationError(os.str());
}

void validate(const SimConfig& cfg) {
  if (cfg.m < 1) throw ValidationError("m must be >= 1");
  if (cfg.n_total < 2) throw ValidationError("n_total must be >= 2");
  if (cfg.reps < 1) throw ValidationError("reps must be >= 1");
  if (cfg.k_nonnull < 0 || cfg.k_nonnull > cfg.m) {
    throw ValidationError("k_nonnull must lie in [0, m]");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
  if (cfg.deltas.empty()) throw ValidationError("deltas must be nonempty");
  for (double d : cfg.deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw ValidationError("deltas must be finite and >= 0");
    }
  }
  if (cfg.methods.empty()) throw ValidationError("methods must be nonempty");
}

PowerTable run_power_study(const SimConfig& cfg) {
  validate(cfg);
  PowerTable table;
  table.config = cfg;
  table.n_ctrl = cfg.n_total / 2;
  table.n_treat = cfg.n_total - table.n_ctrl;
  if (cfg.n_total % 2) {
    std::ostringstream os;
    os << "odd n_total " << cfg.n_total << " split as " << table.n_ctrl
       << " control / " << table.n_treat << " treatment";
    table.warnings.push_back(os.str());
  }
  const CholeskyFactor chol = cholesky(realize(cfg.corr, cfg.m));
  for (const auto& w : chol.warnings) table.warnings.push_back(w);

  const double ncp_scale =
      1.0 / std::sqrt(1.0 / table.n_ctrl + 1.0 / table.n_treat);
  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_cells = cfg.deltas.size() * n_methods;
  const auto bonf_it = std::find(cfg.methods.begin(), cfg.methods.end(),
                                 AdjustMethod::kBonferroni);
  const auto holm_it =
      std::find(cfg.methods.begin(), cfg.methods.end(), AdjustMethod::kHolm);
  const bool have_bonf = bonf_it != cfg.methods.end();
  const bool have_holm = holm_it != cfg.methods.end();
  const std::size_t bonf_idx = bonf_it - cfg.methods.begin();
  const std::size_t holm_idx = holm_it - cfg.methods.begin();

  const int chunks = chunk_count(cfg.reps, cfg.workers);
  std::vector<std::vector<PowerCell>> partial(
      chunks, std::vector<PowerCell>(n_cells));
  std::vector<std::int64_t> disagreements(chunks, 0);

  parallel_chunks(cfg.reps, cfg.workers, [&](std::int64_t begin,
                                              std::int64_t end, int chunk) {
    auto& cells = partial[chunk];
    NoiseSampler sampler(chol.lower, cfg.mode, table.n_ctrl, table.n_treat);
    Vector noise(cfg.m);
    std::vector<double> p(cfg.m);
    std::vector<RepOutcome> outcomes(n_methods);
    for (std::int64_t r = begin; r < end; ++r) {
      RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
      sampler.sample(rng, noise);
      for (std::size_t d = 0; d < cfg.deltas.size(); ++d) {
        // A zero effect makes every metric null.
        const int k = cfg.deltas[d] > 0.0 ? cfg.k_nonnull : 0;
        const double shift = cfg.deltas[d] * ncp_scale;
        for (int i = 0; i < cfg.m; ++i) {
          p[i] = pvalue_of(noise[i] + (i < k ? shift : 0.0), cfg.sides);
        }
        for (std::size_t j = 0; j < n_methods; ++j) {
          outcomes[j] = score(p, cfg.methods[j], cfg.alpha, k);
        }
        if (have_holm && have_bonf &&
            outcomes[holm_idx].any != outcomes[bonf_idx].any) {
          ++disagreements[chunk];
        }
        for (std::size_t j = 0; j < n_methods; ++j) {
          PowerCell& c = cells[d * n_methods + j];
          c.power_hits += outcomes[j].power;
          c.fwer_hits += outcomes[j].fwer;
          if (have_bonf) {
            const bool b = outcomes[bonf_idx].power;
            c.gain_vs_bonferroni += outcomes[j].power && !b;
            c.loss_vs_bonferroni += !outcomes[j].power && b;
          }
        }
      }
    }
  });

  table.cells.resize(n_cells);
  for (std::size_t d = 0; d < cfg.deltas.size(); ++d) {
    for (std::size_t j = 0; j < n_methods; ++j) {
      PowerCell& c = table.cells[d * n_methods + j];
      c.method = cfg.methods[j];
      c.delta = cfg.deltas[d];
      c.reps = cfg.reps;
      for (const auto& part : partial) {
        const PowerCell& pc = part[d * n_methods + j];
        c.power_hits += pc.power_hits;
        c.fwer_hits += pc.fwer_hits;
        c.gain_vs_bonferroni += pc.gain_vs_bonferroni;
        c.loss_vs_bonferroni += pc.loss_vs_bonferroni;
      }
    }
  }
  for (auto v : disagreements) table.holm_bonferroni_disagreements += v;
  return table;
}

std::vector<AnalyticCell> analytic_power_oracle(const SimConfig& cfg) {
  validate(cfg);
  if (!std::holds_alternative<Independent>(cfg.corr)) {
    const auto* eq = std::get_if<Equicorrelated>(&cfg.corr);
    if (!eq || eq->rho != 0.0) {
      throw ValidationError("analytic oracle requires independent metrics");
    }
  }
  const double n_ctrl = static_cast<double>(cfg.n_total / 2);
  const double n_treat = static_cast<double>(cfg.n_total) - n_ctrl;
  const double ncp_scale = 1.0 / std::sqrt(1.0 / n_ctrl + 1.0 / n_treat);
  std::vector<AnalyticCell> out;
  for (double delta : cfg.deltas) {
    for (AdjustMethod method : cfg.methods) {
      double level;
      if (method == AdjustMethod::kNone) {
        level = cfg.alpha;
      } else if (method == AdjustMethod::kBonferroni) {
        level = cfg.alpha / cfg.m;
      } else {
        throw ValidationError("analytic oracle supports none and bonferroni");
      }
      const double ncp = delta * ncp_scale;
      double p_one;
      if (cfg.sides == Sides::kOne) {
        p_one = norm_sf(norm_isf(level) - ncp);
      } else {
        const double zc = norm_isf(level / 2.0);
        p_one = norm_sf(zc - ncp) + norm_cdf(-zc - ncp);
      }
      const int k = delta > 0.0 ? cfg.k_nonnull : 0;
      AnalyticCell c;
      c.method = method;
      c.delta = delta;
      c.power = k ? -std::expm1(k * std::log1p(-p_one)) : 0.0;
      c.fwer = -std::expm1((cfg.m - k) * std::log1p(-level));
      out.push_back(c);
    }
  }
  return out;
}

std::vector<AdvantageRow> advantage_table(const AdvantageConfig& cfg) {
  std::vector<AdvantageRow> rows;
  for (const auto& corr : cfg.corrs) {
    for (int k : cfg.ks) {
      SimConfig sc;
      sc.m = cfg.m;
      sc.n_total = cfg.n_total;
      sc.reps = cfg.reps;
      sc.deltas = {cfg.delta};
      sc.corr = corr;
      sc.k_nonnull = k;
      sc.methods = {AdjustMethod::kBonferroni};
      for (AdjustMethod m : cfg.methods) {
        if (m != AdjustMethod::kBonferroni) sc.methods.push_back(m);
      }
      sc.alpha = cfg.alpha;
      sc.sides = cfg.sides;
      sc.seed = cfg.seed;
      sc.workers = cfg.workers;
      const PowerTable t = run_power_study(sc);
      const double bonf = t.cell(AdjustMethod::kBonferroni, cfg.delta).power();
      for (AdjustMethod m : cfg.methods) {
        const PowerCell& c = t.cell(m, cfg.delta);
        rows.push_back({k, describe(corr), m, bonf, c.power(), c.advantage(),
                        c.advantage_se()});
      }
    }
  }
  return rows;
}

double SparseRegimeResult::fwer() const {
  return reps ? static_cast<double>(fwer_hits) / reps : 0.0;
}
double SparseRegimeResult::fwer_se() const {
  return proportion_se(fwer(), reps);
}

SparseRegimeResult sparse_regime_fwer(int m, double q, double target_power,
                                      std::int64_t reps, std::uint64_t seed,
                                      AdjustMethod method, int workers) {
  if (m < 2) throw ValidationError("sparse regime needs m >= 2");
  if (!(q > 0.0 && q < 1.0)) throw ValidationError("q must lie in (0, 1)");
  if (!(target_power > 0.0 && target_power < 1.0)) {
    throw ValidationError("target_power must lie in (0, 1)");
  }
  if (reps < 1) throw ValidationError("reps must be >= 1");
  SparseRegimeResult r;
  r.m = m;
  r.q = q;
  r.target_power = target_power;
  r.method = method;
  r.reps = reps;
  r.ncp = norm_isf(q) + norm_quantile(target_power);

  const int chunks = chunk_count(reps, workers);
  std::vector<std::int64_t> hits(chunks, 0);
  parallel_chunks(reps, workers, [&](std::int64_t begin, std::int64_t end,
                                     int chunk) {
    std::vector<double> p(m);
    for (std::int64_t i = begin; i < end; ++i) {
      RngStream rng(seed, static_cast<std::uint64_t>(i));
      p[0] = norm_sf(r.ncp + rng.normal());
      for (int j = 1; j < m; ++j) p[j] = norm_sf(rng.normal());
      if (score(p, method, q, 1).fwer) ++hits[chunk];
    }
  });
  for (auto h : hits) r.fwer_hits += h;
  return r;
}

namespace {

bool crosses(double z, double bound, Sides sides) {
  return (sides == Sides::kTwo ? std::fabs(z) : z) >= bound;
}

}  // namespace

CrossingMcResult sequential_crossing_mc(const GstBoundaries& boundaries,
                                        std::int64_t paths,
                                        std::uint64_t seed, int workers) {
  if (paths < 1) throw ValidationError("paths must be >= 1");
  const auto& t = boundaries.schedule.fractions;
  const std::size_t k = t.size();
  if (boundaries.z_bounds.size() != k) {
    throw ValidationError("boundaries and fractions differ in length");
  }
  const int chunks = chunk_count(paths, workers);
  std::vector<std::vector<std::int64_t>> partial(
      chunks, std::vector<std::int64_t>(k, 0));
  parallel_chunks(paths, workers, [&](std::int64_t begin, std::int64_t end,
                                      int chunk) {
    for (std::int64_t i = begin; i < end; ++i) {
      RngStream rng(seed, static_cast<std::uint64_t>(i));
      double s = 0.0;
      double prev = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        s += std::sqrt(t[j] - prev) * rng.normal();
        prev = t[j];
        if (crosses(s / std::sqrt(t[j]), boundaries.z_bounds[j],
                    boundaries.schedule.sides)) {
          ++partial[chunk][j];
          break;
        }
      }
    }
  });
  CrossingMcResult r;
  r.paths = paths;
  r.first_crossings.assign(k, 0);
  for (const auto& part : partial) {
    for (std::size_t j = 0; j < k; ++j) r.first_crossings[j] += part[j];
  }
  std::int64_t running = 0;
  for (std::size_t j = 0; j < k; ++j) {
    running += r.first_crossings[j];
    const double p = static_cast<double>(running) / paths;
    r.cumulative.push_back(p);
    r.cumulative_se.push_back(proportion_se(p, paths));
  }
  return r;
}

double CompositionMcResult::fwer() const {
  return paths ? static_cast<double>(any_crossing) / paths : 0.0;
}
double CompositionMcResult::fwer_se() const {
  return proportion_se(fwer(), paths);
}

CompositionMcResult composition_fwer_mc(
    const std::vector<GstBoundaries>& boundaries, double rho,
    std::int64_t paths, std::uint64_t seed, int workers) {
  if (boundaries.empty()) throw ValidationError("no metrics to monitor");
  if (paths < 1) throw ValidationError("paths must be >= 1");
  const int m = static_cast<int>(boundaries.size());
  std::vector<double> grid;
  for (const auto& b : boundaries) {
    if (b.z_bounds.size() != b.schedule.fractions.size()) {
      throw ValidationError("boundaries and fractions differ in length");
    }
    grid.insert(grid.end(), b.schedule.fractions.begin(),
                b.schedule.fractions.end());
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const CholeskyFactor chol = cholesky(realize(Equicorrelated{rho}, m));

  const int chunks = chunk_count(paths, workers);
  std::vector<std::int64_t> hits(chunks, 0);
  parallel_chunks(paths, workers, [&](std::int64_t begin, std::int64_t end,
                                      int chunk) {
    Vector scratch(m), step(m), score(m);
    std::vector<std::size_t> next(m);
    for (std::int64_t i = begin; i < end; ++i) {
      RngStream rng(seed, static_cast<std::uint64_t>(i));
      score.setZero();
      std::fill(next.begin(), next.end(), 0);
      double prev = 0.0;
      bool crossed = false;
      for (double t : grid) {
        mvn_sample_into(chol.lower, rng, scratch, step);
        score += std::sqrt(t - prev) * step;
        prev = t;
        for (int j = 0; j < m && !crossed; ++j) {
          const auto& b = boundaries[j];
          std::size_t& look = next[j];
          if (look < b.schedule.fractions.size() &&
              b.schedule.fractions[look] == t) {
            crossed = crosses(score[j] / std::sqrt(t), b.z_bounds[look],
                              b.schedule.sides);
            ++look;
          }
        }
        if (crossed) break;
      }
      hits[chunk] += crossed;
    }
  });
  CompositionMcResult r;
  r.paths = paths;
  for (auto h : hits) r.any_crossing += h;
  return r;
}

}  // namespace multitest
