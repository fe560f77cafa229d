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

#include "multitest/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "multitest/error.hpp"
#include "multitest/linalg.hpp"
#include "multitest/parallel.hpp"
#include "multitest/rng.hpp"

namespace multitest {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Count distributions

std::vector<double> CountDistribution::pmf() const {
  std::vector<double> p(head.begin(), head.end());
  double head_mass = 0.0;
  for (double w : head) head_mass += w;
  const double rest = std::max(0.0, 1.0 - head_mass);
  if (tail_length > 0 && rest > 0.0) {
    double norm = 0.0;
    for (int i = 0; i < tail_length; ++i) norm += std::pow(tail_ratio, i);
    for (int i = 0; i < tail_length; ++i) {
      p.push_back(rest * std::pow(tail_ratio, i) / norm);
    }
  }
  double total = 0.0;
  for (double w : p) total += w;
  for (double& w : p) w /= total;
  return p;
}

double CountDistribution::mean() const {
  const auto p = pmf();
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) m += p[i] * (min + double(i));
  return m;
}

int CountDistribution::median() const { return sample(0.5); }

int CountDistribution::sample(double u) const {
  const auto p = pmf();
  double cum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cum += p[i];
    if (u < cum) return min + static_cast<int>(i);
  }
  return min + static_cast<int>(p.size()) - 1;
}

CountDistribution default_success_counts() {
  return {1, {0.26, 0.29}, 0.78, 18};
}

CountDistribution default_guardrail_counts() {
  return {1, {0.1375, 0.1375, 0.1375, 0.1375}, 0.84, 20};
}

// ---------------------------------------------------------------------------
// Generation

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError(std::string(what) + " must lie in [0, 1]");
  }
}

void check_counts(const CountDistribution& d, const char* what) {
  if (d.min < 0) throw ValidationError(std::string(what) + ": min < 0");
  double mass = 0.0;
  for (double w : d.head) {
    if (!(w >= 0.0)) {
      throw ValidationError(std::string(what) + ": negative weight");
    }
    mass += w;
  }
  if (mass > 1.0 + 1e-9) {
    throw ValidationError(std::string(what) + ": head weights exceed 1");
  }
  if (d.tail_length < 0 || !(d.tail_ratio >= 0.0)) {
    throw ValidationError(std::string(what) + ": invalid tail");
  }
  if (d.head.empty() && d.tail_length == 0) {
    throw ValidationError(std::string(what) + ": empty distribution");
  }
}

std::string experiment_name(std::int64_t e) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "exp-%06lld", static_cast<long long>(e + 1));
  return buf;
}

struct MetricTemplate {
  std::string name;
  MetricRole role;
  Direction direction;
  double scale;  // variance-reduced standard error
  std::optional<double> margin_z;
};

bool feasible_equicorrelation(double rho, int m) {
  if (rho > 0.99) return false;
  return m < 2 || rho >= -1.0 / (m - 1) + 1e-9;
}

void generate_experiment(const CorpusConfig& cfg, std::int64_t e,
                         std::vector<ComparisonRecord>& out,
                         std::vector<std::string>& warnings) {
  RngStream rng(cfg.seed, static_cast<std::uint64_t>(e));
  const std::string exp_id = experiment_name(e);
  const bool rollout = rng.bernoulli(cfg.rollout_fraction);

  double cum = 0.0;
  int n_comparisons = static_cast<int>(cfg.comparisons_per_experiment.size());
  const double u = rng.uniform();
  for (std::size_t i = 0; i < cfg.comparisons_per_experiment.size(); ++i) {
    cum += cfg.comparisons_per_experiment[i];
    if (u < cum) {
      n_comparisons = static_cast<int>(i) + 1;
      break;
    }
  }

  const int s_count = rollout ? 0 : cfg.success_counts.sample(rng.uniform());
  const int g_count = cfg.guardrail_counts.sample(rng.uniform());
  const int q_count = cfg.quality_counts.sample(rng.uniform());
  std::vector<MetricTemplate> templates;
  auto add = [&](MetricRole role, int count, const char* prefix) {
    for (int i = 0; i < count; ++i) {
      MetricTemplate t;
      t.name = std::string(prefix) + std::to_string(i + 1);
      t.role = role;
      t.direction = rng.bernoulli(cfg.higher_is_better_fraction) ? Direction::kHigherIsBetter
                                       : Direction::kLowerIsBetter;
      t.scale = std::exp(std::log(2.0) * (2.0 * rng.uniform() - 1.0));
      if (role == MetricRole::kGuardrail) {
        t.margin_z = cfg.margin_min +
                     (cfg.margin_max - cfg.margin_min) * rng.uniform();
      }
      templates.push_back(std::move(t));
    }
  };
  add(MetricRole::kSuccess, s_count, "success_");
  add(MetricRole::kGuardrail, g_count, "guardrail_");
  add(MetricRole::kQuality, q_count, "quality_");
  const int m = static_cast<int>(templates.size());
  if (m == 0) {
    warnings.push_back(exp_id + ": drew no metrics; skipped");
    return;
  }

  const VrDgpParams& vr = cfg.vr;
  const double g = vr.gamma * std::sqrt(vr.sigma0_sq / vr.sigma_eps_sq);
  const double ratio = std::sqrt(1.0 + g * g);
  const double shift = vr.rho0 - vr.rho_eps;

  for (int c = 0; c < n_comparisons; ++c) {
    ComparisonRecord rec;
    rec.experiment_id = exp_id;
    rec.comparison_id = exp_id + "/t" + std::to_string(c + 1);
    rec.rollout = rollout;

    double rho_eps = 0.0;
    double rho0 = 0.0;
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      rho_eps = rng.bernoulli(cfg.corr_zero_weight)
                    ? 0.0
                    : cfg.corr_max * rng.uniform();
      rho0 = rho_eps + shift;
      ok = feasible_equicorrelation(rho_eps, m) &&
           feasible_equicorrelation(rho0, m);
      if (!ok) {
        warnings.push_back(rec.comparison_id +
                           ": infeasible correlation, redrawn");
      }
    }
    if (!ok) {
      throw ValidationError(rec.comparison_id +
                            ": no feasible correlation for " +
                            std::to_string(m) + " metrics");
    }
    rec.rho_eps = rho_eps;
    rec.rho0 = rho0;

    const bool treatment_null = rng.bernoulli(cfg.null_fraction);
    Vector scratch(m), e(m), pre(m);
    const Matrix le = cholesky(realize(Equicorrelated{rho_eps}, m)).lower;
    const Matrix l0 = cholesky(realize(Equicorrelated{rho0}, m)).lower;
    mvn_sample_into(le, rng, scratch, e);
    mvn_sample_into(l0, rng, scratch, pre);

    for (int j = 0; j < m; ++j) {
      const MetricTemplate& t = templates[j];
      MetricTruth truth;
      switch (t.role) {
        case MetricRole::kSuccess:
          if (cfg.treatment_level_nulls ? !treatment_null
                                        : !rng.bernoulli(cfg.null_fraction)) {
            truth.non_null = true;
            const double z = std::fabs(cfg.effect_mean +
                                       cfg.effect_sd * rng.normal());
            const double sign = rng.bernoulli(cfg.harmful_fraction) ? -1 : 1;
            truth.improvement = sign * z * t.scale;
          }
          break;
        case MetricRole::kGuardrail:
          if (rng.bernoulli(cfg.guardrail_harm_fraction)) {
            truth.non_null = true;
            truth.improvement = -*t.margin_z * t.scale;
          }
          break;
        case MetricRole::kQuality:
          if (rng.bernoulli(cfg.quality_harm_fraction)) {
            truth.non_null = true;
            truth.improvement = -cfg.quality_harm_z * t.scale;
          }
          break;
      }
      const double sign =
          t.direction == Direction::kHigherIsBetter ? 1.0 : -1.0;
      const double effect = sign * truth.improvement;
      CorpusMetric cm;
      cm.name = t.name;
      cm.role = t.role;
      cm.direction = t.direction;
      if (t.margin_z) cm.nim_margin = *t.margin_z * t.scale;
      cm.vr = {effect + t.scale * e[j], t.scale};
      cm.no_vr = Estimate{effect + t.scale * (g * pre[j] + e[j]),
                          t.scale * ratio};
      cm.truth = truth;
      rec.metrics.push_back(std::move(cm));
    }
    out.push_back(std::move(rec));
  }
}

}  // namespace

void validate(const CorpusConfig& cfg) {
  if (cfg.n_experiments < 1) throw ValidationError("n_experiments must be >= 1");
  check_probability(cfg.rollout_fraction, "rollout_fraction");
  check_probability(cfg.null_fraction, "null_fraction");
  check_probability(cfg.harmful_fraction, "harmful_fraction");
  check_probability(cfg.higher_is_better_fraction,
                    "higher_is_better_fraction");
  check_probability(cfg.guardrail_harm_fraction, "guardrail_harm_fraction");
  check_probability(cfg.quality_harm_fraction, "quality_harm_fraction");
  check_probability(cfg.corr_zero_weight, "corr_zero_weight");
  if (cfg.comparisons_per_experiment.empty()) {
    throw ValidationError("comparisons_per_experiment must be nonempty");
  }
  double mass = 0.0;
  for (double w : cfg.comparisons_per_experiment) {
    if (!(w >= 0.0)) throw ValidationError("negative comparison weight");
    mass += w;
  }
  if (std::fabs(mass - 1.0) > 1e-9) {
    throw ValidationError("comparisons_per_experiment must sum to 1");
  }
  check_counts(cfg.success_counts, "success_counts");
  check_counts(cfg.guardrail_counts, "guardrail_counts");
  check_counts(cfg.quality_counts, "quality_counts");
  if (!(cfg.effect_sd >= 0.0)) throw ValidationError("effect_sd must be >= 0");
  if (!(cfg.margin_min > 0.0 && cfg.margin_max >= cfg.margin_min)) {
    throw ValidationError("need 0 < margin_min <= margin_max");
  }
  if (!(cfg.corr_max >= -1.0 && cfg.corr_max <= 1.0)) {
    throw ValidationError("corr_max must lie in [-1, 1]");
  }
  validate(cfg.vr);
}

Corpus generate_corpus(const CorpusConfig& cfg) {
  validate(cfg);
  const int chunks = chunk_count(cfg.n_experiments, cfg.workers);
  std::vector<std::vector<ComparisonRecord>> parts(chunks);
  std::vector<std::vector<std::string>> warns(chunks);
  parallel_chunks(cfg.n_experiments, cfg.workers,
                  [&](std::int64_t begin, std::int64_t end, int chunk) {
                    for (std::int64_t e = begin; e < end; ++e) {
                      generate_experiment(cfg, e, parts[chunk], warns[chunk]);
                    }
                  });
  Corpus corpus;
  for (int c = 0; c < chunks; ++c) {
    for (auto& r : parts[c]) corpus.records.push_back(std::move(r));
    for (auto& w : warns[c]) corpus.warnings.push_back(std::move(w));
  }
  return corpus;
}

std::vector<MetricResult> ComparisonRecord::results(bool vr_on) const {
  std::vector<MetricResult> out;
  out.reserve(metrics.size());
  for (const auto& cm : metrics) {
    MetricResult r;
    r.name = cm.name;
    r.role = cm.role;
    r.direction = cm.direction;
    r.nim_margin = cm.nim_margin;
    const Estimate* e = &cm.vr;
    if (!vr_on) {
      if (!cm.no_vr) {
        throw ValidationError(comparison_id + ": metric '" + cm.name +
                              "' has no no_vr variant");
      }
      e = &*cm.no_vr;
    }
    r.estimate = e->estimate;
    r.se = e->se;
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON lines

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ValidationError(where + ": unknown field '" + key + "'");
  }
}

template <typename T>
T required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": field '" + key + "' has the wrong type");
  }
}

json estimate_to_json(const Estimate& e) {
  return {{"estimate", e.estimate}, {"se", e.se}};
}

Estimate estimate_from_json(const json& j, const std::string& where) {
  reject_unknown(j, {"estimate", "se"}, where);
  return {required<double>(j, "estimate", where),
          required<double>(j, "se", where)};
}

json record_to_json(const ComparisonRecord& r) {
  json metrics = json::array();
  for (const auto& m : r.metrics) {
    json jm = {{"name", m.name},
               {"role", std::string(to_string(m.role))},
               {"direction", std::string(to_string(m.direction))}};
    if (m.nim_margin) jm["nim_margin"] = *m.nim_margin;
    jm["vr"] = estimate_to_json(m.vr);
    if (m.no_vr) jm["no_vr"] = estimate_to_json(*m.no_vr);
    if (m.truth) {
      jm["truth"] = {{"non_null", m.truth->non_null},
                     {"improvement", m.truth->improvement}};
    }
    metrics.push_back(std::move(jm));
  }
  json j = {{"experiment_id", r.experiment_id},
            {"comparison_id", r.comparison_id},
            {"rollout", r.rollout}};
  if (r.rho_eps) j["rho_eps"] = *r.rho_eps;
  if (r.rho0) j["rho0"] = *r.rho0;
  j["metrics"] = std::move(metrics);
  return j;
}

ComparisonRecord record_from_json(const json& j, const std::string& where) {
  reject_unknown(j, {"experiment_id", "comparison_id", "rollout", "rho_eps",
                     "rho0", "metrics"},
                 where);
  ComparisonRecord r;
  r.experiment_id = required<std::string>(j, "experiment_id", where);
  r.comparison_id = required<std::string>(j, "comparison_id", where);
  r.rollout = required<bool>(j, "rollout", where);
  if (j.contains("rho_eps")) r.rho_eps = required<double>(j, "rho_eps", where);
  if (j.contains("rho0")) r.rho0 = required<double>(j, "rho0", where);
  const json metrics = required<json>(j, "metrics", where);
  if (!metrics.is_array() || metrics.empty()) {
    throw ValidationError(where + ": metrics must be a nonempty array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const std::string mw = where + ", metric " + std::to_string(i + 1);
    const json& jm = metrics[i];
    reject_unknown(jm, {"name", "role", "direction", "nim_margin", "vr",
                        "no_vr", "truth"},
                   mw);
    CorpusMetric m;
    m.name = required<std::string>(jm, "name", mw);
    if (!names.insert(m.name).second) {
      throw ValidationError(mw + ": duplicate metric name '" + m.name + "'");
    }
    m.role = parse_metric_role(required<std::string>(jm, "role", mw));
    m.direction = parse_direction(required<std::string>(jm, "direction", mw));
    if (jm.contains("nim_margin")) {
      m.nim_margin = required<double>(jm, "nim_margin", mw);
    }
    m.vr = estimate_from_json(required<json>(jm, "vr", mw), mw + " vr");
    if (jm.contains("no_vr")) {
      m.no_vr = estimate_from_json(jm.at("no_vr"), mw + " no_vr");
    }
    if (jm.contains("truth")) {
      const json& jt = jm.at("truth");
      reject_unknown(jt, {"non_null", "improvement"}, mw + " truth");
      m.truth = MetricTruth{required<bool>(jt, "non_null", mw),
                            required<double>(jt, "improvement", mw)};
    }
    if (r.rollout && m.role == MetricRole::kSuccess) {
      throw ValidationError(where + ": rollout records carry no success "
                                    "metrics");
    }
    r.metrics.push_back(std::move(m));
  }
  return r;
}

}  // namespace

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& r : corpus.records) out << record_to_json(r).dump() << '\n';
}

Corpus read_corpus(std::istream& in) {
  Corpus corpus;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ValidationError(where + ": " + e.what());
    }
    try {
      corpus.records.push_back(record_from_json(j, where));
    } catch (const ValidationError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  if (corpus.records.empty()) throw ValidationError("corpus is empty");
  return corpus;
}

// ---------------------------------------------------------------------------
// Replay

namespace {

ShipKind classify(const ComparisonRecord& rec, const Decision& d) {
  if (!d.ship) return ShipKind::kNoShip;
  if (d.driving_success.empty()) return ShipKind::kRolloutShip;
  bool labelled = true;
  bool true_driver = false;
  for (std::size_t i = 0; i < rec.metrics.size(); ++i) {
    if (d.metrics[i].gate != GateOutcome::kSignificantPreferred) continue;
    const auto& truth = rec.metrics[i].truth;
    if (!truth) {
      labelled = false;
      continue;
    }
    true_driver = true_driver || (truth->non_null && truth->improvement > 0.0);
  }
  if (true_driver) return ShipKind::kTrueShip;
  return labelled ? ShipKind::kFalseShip : ShipKind::kUnlabelled;
}

std::vector<AdjustMethod> with_bonferroni(std::vector<AdjustMethod> methods) {
  if (std::find(methods.begin(), methods.end(), AdjustMethod::kBonferroni) ==
      methods.end()) {
    methods.push_back(AdjustMethod::kBonferroni);
  }
  return methods;
}

bool shipped(ShipKind k) { return k != ShipKind::kNoShip; }

}  // namespace

const MethodReplay& ReplayResult::method(AdjustMethod m) const {
  for (const auto& r : methods) {
    if (r.method == m) return r;
  }
  throw ValidationError("method '" + std::string(to_string(m)) +
                        "' was not replayed");
}

std::vector<ReplayRow> ReplayResult::rows() const {
  const MethodReplay& bonf = method(AdjustMethod::kBonferroni);
  const auto rate = [](std::int64_t num, std::int64_t den) {
    return den ? static_cast<double>(num) / den : 0.0;
  };
  const double base = rate(bonf.ships, n_records);
  std::vector<ReplayRow> out;
  for (const auto& m : methods) {
    ReplayRow r;
    r.method = m.method;
    r.ship_rate = rate(m.ships, n_records);
    r.ab_ship_rate = rate(m.ab_ships, n_ab);
    r.rollout_ship_rate = rate(m.rollout_ships, n_rollout);
    if (m.method != AdjustMethod::kBonferroni) {
      r.delta_pp = 100.0 * (r.ship_rate - base);
      if (base > 0.0) r.delta_rel = 100.0 * (r.ship_rate / base - 1.0);
    }
    out.push_back(r);
  }
  return out;
}

ReplayResult replay(const Corpus& corpus, const ReplayConfig& cfg) {
  if (corpus.records.empty()) throw ValidationError("corpus is empty");
  ReplayResult result;
  result.config = cfg;
  result.config.methods = with_bonferroni(cfg.methods);
  const auto& methods = result.config.methods;
  const std::int64_t n = static_cast<std::int64_t>(corpus.records.size());
  result.n_records = n;
  for (const auto& r : corpus.records) {
    (r.rollout ? result.n_rollout : result.n_ab) += 1;
  }
  result.methods.resize(methods.size());
  for (std::size_t k = 0; k < methods.size(); ++k) {
    result.methods[k].method = methods[k];
    result.methods[k].outcome.assign(n, ShipKind::kNoShip);
  }

  parallel_chunks(n, cfg.workers, [&](std::int64_t begin, std::int64_t end,
                                      int) {
    for (std::int64_t i = begin; i < end; ++i) {
      const ComparisonRecord& rec = corpus.records[i];
      const auto metrics = rec.results(cfg.vr_on);
      for (std::size_t k = 0; k < methods.size(); ++k) {
        DecisionConfig dc;
        dc.alpha = cfg.alpha;
        dc.method = methods[k];
        dc.family_mode = cfg.family_mode;
        result.methods[k].outcome[i] = classify(rec, ship_decision(metrics, dc));
      }
    }
  });

  for (auto& m : result.methods) {
    for (std::int64_t i = 0; i < n; ++i) {
      if (!shipped(m.outcome[i])) continue;
      ++m.ships;
      (corpus.records[i].rollout ? m.rollout_ships : m.ab_ships) += 1;
    }
  }
  return result;
}

std::vector<VrCrossedRow> vr_crossed_replay(const Corpus& corpus,
                                            const ReplayConfig& cfg) {
  ReplayConfig on = cfg;
  on.vr_on = true;
  ReplayConfig off = cfg;
  off.vr_on = false;
  const ReplayResult with = replay(corpus, on);
  const ReplayResult without = replay(corpus, off);
  const double n = static_cast<double>(with.n_records);
  const MethodReplay& bw = with.method(AdjustMethod::kBonferroni);
  const MethodReplay& bo = without.method(AdjustMethod::kBonferroni);

  std::vector<VrCrossedRow> rows;
  for (std::size_t k = 0; k < with.methods.size(); ++k) {
    const MethodReplay& mw = with.methods[k];
    const MethodReplay& mo = without.method(mw.method);
    VrCrossedRow row;
    row.method = mw.method;
    row.ship_vr = 100.0 * mw.ships / n;
    row.ship_no_vr = 100.0 * mo.ships / n;
    if (mw.method != AdjustMethod::kBonferroni) {
      row.gap_vr = row.ship_vr - 100.0 * bw.ships / n;
      row.gap_no_vr = row.ship_no_vr - 100.0 * bo.ships / n;
      // Taken from integer counts so an unchanged gap is exactly zero.
      row.gap_delta = 100.0 *
                      static_cast<double>((mw.ships - bw.ships) -
                                          (mo.ships - bo.ships)) /
                      n;
      // Paired per-record differences, each in {-2, ..., 2}.
      double sum = 0.0, sum_sq = 0.0;
      for (std::int64_t i = 0; i < with.n_records; ++i) {
        const double d = (shipped(mw.outcome[i]) - shipped(bw.outcome[i])) -
                         (shipped(mo.outcome[i]) - shipped(bo.outcome[i]));
        sum += d;
        sum_sq += d * d;
      }
      const double mean = sum / n;
      const double var = std::max(sum_sq / n - mean * mean, 0.0);
      row.gap_delta_se = 100.0 * std::sqrt(var / n);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<ScoreRow> score_corpus(const ReplayResult& result) {
  std::vector<ScoreRow> rows;
  for (const auto& m : result.methods) {
    ScoreRow s;
    s.method = m.method;
    s.ab_records = result.n_ab;
    for (ShipKind k : m.outcome) {
      switch (k) {
        case ShipKind::kTrueShip: ++s.true_ships; ++s.ab_ships; break;
        case ShipKind::kFalseShip: ++s.false_ships; ++s.ab_ships; break;
        case ShipKind::kUnlabelled: ++s.unlabelled_ships; ++s.ab_ships; break;
        default: break;
      }
    }
    if (s.ab_records > 0) {
      const double n = static_cast<double>(s.ab_records);
      s.true_ship_rate = s.true_ships / n;
      s.false_ship_rate = s.false_ships / n;
      s.false_ship_se =
          std::sqrt(s.false_ship_rate * (1.0 - s.false_ship_rate) / n);
    }
    if (s.true_ships + s.false_ships > 0) {
      s.ppv = static_cast<double>(s.true_ships) /
              static_cast<double>(s.true_ships + s.false_ships);
    }
    rows.push_back(s);
  }
  return rows;
}

}  // namespace multitest
