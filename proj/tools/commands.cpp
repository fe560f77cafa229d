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

#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>

#include "multitest/adjust.hpp"
#include "multitest/corpus.hpp"
#include "multitest/decision.hpp"
#include "multitest/error.hpp"
#include "multitest/io.hpp"
#include "multitest/normal.hpp"
#include "multitest/planning.hpp"
#include "multitest/sequential.hpp"
#include "multitest/sim_engine.hpp"
#include "multitest/vr_model.hpp"

namespace multitest::cli {

using nlohmann::json;

namespace {

OutputFormat format_or(const CommonOptions& c, OutputFormat fallback) {
  return c.format.empty() ? fallback : parse_output_format(c.format);
}

std::uint64_t require_seed(const CommonOptions& c, const char* command) {
  if (!c.seed) {
    throw ValidationError(std::string(command) +
                          ": --seed is required for reproducible output");
  }
  return *c.seed;
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Provenance provenance(const std::string& command,
                      const std::optional<std::uint64_t>& seed,
                      const json& config) {
  return {command, seed, config_hash(config)};
}

std::string name(AdjustMethod m) { return std::string(to_string(m)); }

Cell opt(const std::optional<double>& v) {
  return v ? Cell(*v) : Cell(std::monostate{});
}

json methods_json(const std::vector<AdjustMethod>& methods) {
  json out = json::array();
  for (auto m : methods) out.push_back(name(m));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

CommandResult run_adjust(const AdjustOptions& o, const CommonOptions& c) {
  const AdjustMethod method = parse_adjust_method(o.method);
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
  const std::vector<double> p = parse_pvalue_list(read_text(o.input));
  const AdjustedPValues adj = adjust(p, method);
  const auto rejected = reject_set(adj, o.alpha);
  std::vector<bool> is_rejected(p.size(), false);
  for (auto i : rejected) is_rejected[i] = true;

  Table t;
  t.name = "adjusted";
  t.columns = {"index", "raw", "adjusted", "rejected"};
  t.precision = 10;
  for (std::size_t i = 0; i < p.size(); ++i) {
    t.rows.push_back({static_cast<std::int64_t>(i + 1), p[i], adj.adjusted[i],
                      bool(is_rejected[i])});
  }
  t.notes.push_back("method " + name(method) + ", alpha " +
                    format_double(o.alpha, 6) + ", family size " +
                    std::to_string(p.size()));
  const json cfg = {{"method", name(method)}, {"alpha", o.alpha}, {"p", p}};
  return {render({t}, format_or(c, OutputFormat::kCsv),
                 provenance("adjust", c.seed, cfg)),
          kExitOk};
}

// ---------------------------------------------------------------------------

CommandResult run_decide(const DecideOptions& o, const CommonOptions& c) {
  ExperimentSpec spec = parse_experiment_spec(load_json(o.spec));
  if (o.method) spec.config.method = parse_adjust_method(*o.method);
  if (o.family) spec.config.family_mode = parse_family_mode(*o.family);
  if (o.alpha) spec.config.alpha = *o.alpha;
  const Decision d = ship_decision(spec.metrics, spec.config, spec.srm);

  json cfg = {{"alpha", spec.config.alpha},
              {"method", name(spec.config.method)},
              {"family_mode", std::string(to_string(spec.config.family_mode))},
              {"srm_alpha", spec.config.srm_alpha}};
  json metrics_in = json::array();
  for (const auto& m : spec.metrics) {
    metrics_in.push_back({{"name", m.name},
                          {"role", std::string(to_string(m.role))},
                          {"direction", std::string(to_string(m.direction))},
                          {"estimate", m.estimate},
                          {"se", m.se},
                          {"nim_margin", m.nim_margin ? json(*m.nim_margin)
                                                      : json(nullptr)}});
  }
  cfg["metrics"] = metrics_in;
  if (spec.srm) {
    cfg["srm"] = {{"counts", spec.srm->counts}, {"ratios", spec.srm->ratios}};
  }
  const Provenance prov = provenance("decide", c.seed, cfg);
  const int code = d.ship ? kExitOk : kExitNoShip;

  Table metrics;
  metrics.name = "metrics";
  metrics.columns = {"name",       "role",        "direction",  "estimate",
                     "se",         "raw_p",       "adjusted_p", "in_family",
                     "ci_level",   "ci_lower",    "ci_upper",   "gate"};
  json jm = json::array();
  for (std::size_t i = 0; i < d.metrics.size(); ++i) {
    const MetricOutcome& mo = d.metrics[i];
    const MetricResult& mr = spec.metrics[i];
    metrics.rows.push_back(
        {mo.name, std::string(to_string(mo.role)),
         std::string(to_string(mr.direction)), mr.estimate, mr.se, mo.raw_p,
         mo.adjusted_p, mo.in_family, mo.interval.level, mo.interval.lower,
         mo.interval.upper, std::string(to_string(mo.gate))});
    json row = {{"name", mo.name},
                {"role", std::string(to_string(mo.role))},
                {"direction", std::string(to_string(mr.direction))},
                {"estimate", mr.estimate},
                {"se", mr.se},
                {"raw_p", mo.raw_p},
                {"adjusted_p", mo.adjusted_p},
                {"in_family", mo.in_family},
                {"ci", {{"level", mo.interval.level},
                        {"lower", mo.interval.lower},
                        {"upper", mo.interval.upper},
                        {"family_size", mo.ci_family_size}}},
                {"gate", std::string(to_string(mo.gate))}};
    if (mr.nim_margin) row["nim_margin"] = *mr.nim_margin;
    if (mo.family_source) {
      row["family"] = {{"source", std::string(to_string(*mo.family_source))},
                       {"p", *mo.family_p},
                       {"adjusted_p", *mo.family_adjusted_p}};
    }
    jm.push_back(std::move(row));
  }

  json decision = {{"ship", d.ship},
                   {"outcome", d.ship ? "ship" : "no_ship"},
                   {"driving_success", d.driving_success},
                   {"failed_guardrails", d.failed_guardrails},
                   {"blocking_quality", d.blocking_quality},
                   {"family_size", d.family_size},
                   {"family_mode",
                    std::string(to_string(spec.config.family_mode))},
                   {"method", name(spec.config.method)},
                   {"alpha", spec.config.alpha},
                   {"srm_blocked", d.srm_blocked}};
  decision["srm_p"] = d.srm_p ? json(*d.srm_p) : json(nullptr);

  const OutputFormat fmt = format_or(c, OutputFormat::kJson);
  if (fmt == OutputFormat::kJson) {
    json doc = {{"schema_version", kSchemaVersion},
                {"decision", decision},
                {"metrics", jm},
                {"provenance", provenance_json(prov)}};
    return {doc.dump(2) + "\n", code};
  }
  Table summary;
  summary.name = "decision";
  summary.columns = {"field", "value"};
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : ";") + x;
    return s;
  };
  summary.rows = {
      {std::string("outcome"), std::string(d.ship ? "ship" : "no_ship")},
      {std::string("driving_success"), join(d.driving_success)},
      {std::string("failed_guardrails"), join(d.failed_guardrails)},
      {std::string("blocking_quality"), join(d.blocking_quality)},
      {std::string("family_size"), static_cast<std::int64_t>(d.family_size)},
      {std::string("family_mode"),
       std::string(to_string(spec.config.family_mode))},
      {std::string("method"), name(spec.config.method)},
      {std::string("alpha"), spec.config.alpha},
      {std::string("srm_p"), opt(d.srm_p)},
  };
  return {render({summary, metrics}, fmt, prov), code};
}

// ---------------------------------------------------------------------------

CommandResult run_plan(const PlanOptions& o, const CommonOptions& c) {
  PlanInputs in;
  if (!o.config.empty()) {
    in = parse_plan_inputs(load_json(o.config));
  } else {
    if (!o.delta) throw ValidationError("plan: --delta is required");
    in.alpha = o.alpha;
    in.beta = o.beta;
    in.delta = *o.delta;
    in.sigma = o.sigma;
    in.success_count = o.success;
    in.margins = o.margins;
    in.guardrail_count = static_cast<int>(o.margins.size());
    in.guardrail_beta_weights = o.beta_weights;
    in.guardrail_expected_effect = o.expected_effect;
    in.mde_label = o.mde_label;
  }
  const Plan plan = plan_experiment(in);
  Table t;
  t.name = "plan";
  t.columns = {"metric", "alpha_used", "beta_used", "n_exact", "n_per_variant"};
  t.precision = 8;
  for (const auto& r : plan.rows) {
    t.rows.push_back({r.metric, r.alpha_used, r.beta_used, r.n.exact,
                      static_cast<std::int64_t>(r.n.per_variant)});
  }
  t.rows.push_back({std::string("overall"), plan.adjusted_alpha,
                    std::monostate{}, std::monostate{},
                    static_cast<std::int64_t>(plan.overall_per_variant)});
  t.notes.push_back(plan.statement);
  const json cfg = {{"alpha", in.alpha},       {"beta", in.beta},
                    {"delta", in.delta},       {"sigma", in.sigma},
                    {"success_count", in.success_count},
                    {"margins", in.margins},
                    {"guardrail_beta_weights", in.guardrail_beta_weights},
                    {"guardrail_expected_effect", in.guardrail_expected_effect},
                    {"mde_label", in.mde_label}};
  return {render({t}, format_or(c, OutputFormat::kCsv),
                 provenance("plan", c.seed, cfg)),
          kExitOk};
}

// ---------------------------------------------------------------------------

CommandResult run_gst(const GstOptions& o, const CommonOptions& c) {
  const json doc_json = load_json(o.schedule);
  const GstDocument doc = parse_gst_document(doc_json);
  if (o.check_paths < 0) throw ValidationError("--check-paths must be >= 0");
  if (o.check_paths > 0) require_seed(c, "gst --check-paths");
  const auto bounds = multi_metric_sequential(doc.schedules, doc.alpha,
                                              doc.success_count, doc.grid);
  Table t;
  t.name = "boundaries";
  t.columns = {"metric",           "look",          "fraction",
               "spending",         "sides",         "budget",
               "z_bound",          "nominal_p",     "cumulative_spend",
               "incremental_spend", "bonferroni_over_time_bound"};
  if (o.check_paths > 0) {
    t.columns.push_back("mc_cumulative");
    t.columns.push_back("mc_se");
  }
  t.precision = 8;
  for (std::size_t m = 0; m < bounds.size(); ++m) {
    const GstBoundaries& b = bounds[m];
    const GstBoundaries bot =
        bonferroni_over_time(b.schedule, doc.schedules[m].spending);
    std::optional<CrossingMcResult> mc;
    if (o.check_paths > 0) {
      mc = sequential_crossing_mc(b, o.check_paths, *c.seed + m, c.workers);
    }
    for (std::size_t k = 0; k < b.z_bounds.size(); ++k) {
      const double z = b.z_bounds[k];
      const double nominal = std::isinf(z) ? 0.0
                             : b.schedule.sides == Sides::kTwo
                                 ? two_sided_p(z)
                                 : norm_sf(z);
      std::vector<Cell> row = {b.schedule.metric_name,
                               static_cast<std::int64_t>(k + 1),
                               b.schedule.fractions[k],
                               std::string(to_string(b.spending)),
                               std::string(to_string(b.schedule.sides)),
                               b.schedule.budget,
                               z,
                               nominal,
                               b.cumulative_spend[k],
                               b.incremental_spend[k],
                               bot.z_bounds[k]};
      if (mc) {
        row.push_back(mc->cumulative[k]);
        row.push_back(mc->cumulative_se[k]);
      }
      t.rows.push_back(std::move(row));
    }
  }
  t.notes.push_back("alpha " + format_double(doc.alpha, 6) + " split over " +
                    std::to_string(doc.success_count) +
                    " success metrics; reject when the statistic reaches "
                    "the bound");
  json cfg = doc_json;
  cfg["check_paths"] = o.check_paths;
  return {render({t}, format_or(c, OutputFormat::kCsv),
                 provenance("gst", c.seed, cfg)),
          kExitOk};
}

// ---------------------------------------------------------------------------

namespace {

CommandResult simulate_power(const SimulateOptions& o, const CommonOptions& c,
                             std::uint64_t seed) {
  if (o.config.empty()) throw ValidationError("simulate: --config is required");
  const json cfg_json = load_json(o.config);
  SimConfig cfg = parse_sim_config(cfg_json);
  if (o.reps) cfg.reps = *o.reps;
  if (o.mode) cfg.mode = parse_sim_mode(*o.mode);
  cfg.seed = seed;
  cfg.workers = c.workers;
  validate(cfg);
  const PowerTable table = run_power_study(cfg);

  std::vector<AnalyticCell> analytic;
  const bool independent =
      std::holds_alternative<Independent>(cfg.corr) ||
      (std::holds_alternative<Equicorrelated>(cfg.corr) &&
       std::get<Equicorrelated>(cfg.corr).rho == 0.0);
  if (independent) {
    SimConfig ac = cfg;
    ac.methods.clear();
    for (auto m : cfg.methods) {
      if (m == AdjustMethod::kNone || m == AdjustMethod::kBonferroni) {
        ac.methods.push_back(m);
      }
    }
    if (!ac.methods.empty()) analytic = analytic_power_oracle(ac);
  }
  auto analytic_for = [&](AdjustMethod m, double delta) -> Cell {
    for (const auto& a : analytic) {
      if (a.method == m && a.delta == delta) {
        return delta > 0.0 ? a.power : a.fwer;
      }
    }
    return std::monostate{};
  };

  Table t;
  t.name = "power";
  t.columns = {"method",       "delta",   "k_nonnull",  "power",
               "power_se",     "fwer",    "fwer_se",    "vs_bonferroni_pp",
               "vs_bonferroni_se_pp",     "analytic"};
  for (const auto& cell : table.cells) {
    const bool has_bonf =
        std::find(cfg.methods.begin(), cfg.methods.end(),
                  AdjustMethod::kBonferroni) != cfg.methods.end();
    const int k = cell.delta > 0.0 ? cfg.k_nonnull : 0;
    t.rows.push_back(
        {name(cell.method), cell.delta, static_cast<std::int64_t>(k),
         cell.power(), cell.power_se(), cell.fwer(), cell.fwer_se(),
         has_bonf ? Cell(100.0 * cell.advantage()) : Cell(std::monostate{}),
         has_bonf ? Cell(100.0 * cell.advantage_se()) : Cell(std::monostate{}),
         analytic_for(cell.method, cell.delta)});
  }
  t.notes.push_back("m " + std::to_string(cfg.m) + ", n " +
                    std::to_string(table.n_ctrl) + " control / " +
                    std::to_string(table.n_treat) + " treatment, " +
                    std::to_string(cfg.reps) + " replications, " +
                    describe(cfg.corr) + ", " +
                    std::string(to_string(cfg.sides)) + "-sided, " +
                    std::string(to_string(cfg.mode)) + " sampling");
  t.notes.push_back("holm/bonferroni disagreements on rejecting anything: " +
                    std::to_string(table.holm_bonferroni_disagreements));
  for (const auto& w : table.warnings) t.notes.push_back("warning: " + w);
  json prov_cfg = cfg_json;
  prov_cfg["reps"] = cfg.reps;
  prov_cfg["mode"] = std::string(to_string(cfg.mode));
  prov_cfg["study"] = "power";
  return {render({t}, format_or(c, OutputFormat::kCsv),
                 provenance("simulate", seed, prov_cfg)),
          kExitOk};
}

CommandResult simulate_advantage(const SimulateOptions& o,
                                 const CommonOptions& c, std::uint64_t seed) {
  AdvantageConfig cfg;
  if (o.reps) cfg.reps = *o.reps;
  cfg.delta = o.delta;
  cfg.seed = seed;
  cfg.workers = c.workers;
  const auto rows = advantage_table(cfg);
  Table t;
  t.name = "advantage";
  t.columns = {"k_nonnull", "corr", "method", "bonferroni_power", "power",
               "advantage_pp", "advantage_se_pp"};
  for (const auto& r : rows) {
    t.rows.push_back({static_cast<std::int64_t>(r.k), r.corr, name(r.method),
                      r.bonferroni_power, r.power, 100.0 * r.advantage,
                      100.0 * r.advantage_se});
  }
  t.notes.push_back("delta " + format_double(cfg.delta, 6) + ", m " +
                    std::to_string(cfg.m) + ", " + std::to_string(cfg.reps) +
                    " replications, paired on common random numbers");
  const json prov_cfg = {{"study", "advantage"},
                         {"reps", cfg.reps},
                         {"delta", cfg.delta}};
  return {render({t}, format_or(c, OutputFormat::kCsv),
                 provenance("simulate", seed, prov_cfg)),
          kExitOk};
}

CommandResult simulate_sparse(const SimulateOptions& o, const CommonOptions& c,
                              std::uint64_t seed) {
  const std::int64_t reps = o.reps.value_or(20000);
  const AdjustMethod method = parse_adjust_method(o.method);
  const auto r = sparse_regime_fwer(o.m, o.q, o.target_power, reps, seed,
                                    method, c.workers);
  Table t;
  t.name = "sparse_regime";
  t.columns = {"method", "m", "q", "target_power", "ncp", "reps", "fwer",
               "fwer_se"};
  t.rows.push_back({name(method), static_cast<std::int64_t>(r.m), r.q,
                    r.target_power, r.ncp, r.reps, r.fwer(), r.fwer_se()});
  const json prov_cfg = {{"study", "sparse"}, {"m", o.m},
                         {"q", o.q},          {"target_power", o.target_power},
                         {"method", name(method)}, {"reps", reps}};
  return {render({t}, format_or(c, OutputFormat::kCsv),
                 provenance("simulate", seed, prov_cfg)),
          kExitOk};
}

}  // namespace

CommandResult run_simulate(const SimulateOptions& o, const CommonOptions& c) {
  const std::uint64_t seed = require_seed(c, "simulate");
  if (o.study == "power") return simulate_power(o, c, seed);
  if (o.study == "advantage") return simulate_advantage(o, c, seed);
  if (o.study == "sparse") return simulate_sparse(o, c, seed);
  throw ValidationError("--study must be power, advantage or sparse");
}

// ---------------------------------------------------------------------------

CommandResult run_vr(const VrOptions& o, const CommonOptions& c) {
  VrDgpParams p;
  if (!o.config.empty()) p = parse_vr_params(load_json(o.config));
  if (o.gamma) p.gamma = *o.gamma;
  if (o.gamma_b) p.gamma_b = *o.gamma_b;
  if (o.sigma0_sq) p.sigma0_sq = *o.sigma0_sq;
  if (o.sigma_eps_sq) p.sigma_eps_sq = *o.sigma_eps_sq;
  if (o.rho0) p.rho0 = *o.rho0;
  if (o.rho_eps) p.rho_eps = *o.rho_eps;
  validate(p);
  if (o.n < 0) throw ValidationError("--n must be >= 0");

  std::optional<VrSimResult> sim;
  if (o.n > 0) {
    RngStream rng(require_seed(c, "vr"), 0);
    sim = simulate_dgp(p, o.n, rng);
  }
  const bool symmetric = !p.gamma_b || *p.gamma_b == p.gamma;
  auto mc = [&](double v) -> Cell {
    return sim ? Cell(v) : Cell(std::monostate{});
  };
  auto closed = [&](double v) -> Cell {
    return symmetric ? Cell(v) : Cell(std::monostate{});
  };
  Table t;
  t.name = "vr_model";
  t.columns = {"quantity", "closed_form", "monte_carlo"};
  t.rows = {
      {std::string("unadjusted_corr"), closed(unadjusted_corr(p)),
       mc(sim ? sim->raw_corr : 0.0)},
      {std::string("adjusted_corr"), p.rho_eps,
       mc(sim ? sim->residual_corr : 0.0)},
      {std::string("decorrelation_gap"), closed(decorrelation_gap(p)),
       mc(sim ? sim->raw_corr - sim->residual_corr : 0.0)},
      {std::string("gamma_a"), p.gamma, mc(sim ? sim->gamma_hat_a : 0.0)},
      {std::string("gamma_b"), p.gamma_for_b(),
       mc(sim ? sim->gamma_hat_b : 0.0)},
      {std::string("se_ratio"), closed(vr_se_ratio(p)), Cell(std::monostate{})},
  };
  t.notes.push_back(decorrelation_gap(p) > 0.0
                        ? "variance reduction lowers the inter-metric "
                          "correlation (rho_eps < rho0)"
                        : "variance reduction does not lower the "
                          "inter-metric correlation");
  if (!symmetric) {
    t.notes.push_back("gamma_b differs from gamma: no closed form");
  }
  const json cfg = {{"gamma", p.gamma},
                    {"gamma_b", p.gamma_b ? json(*p.gamma_b) : json(nullptr)},
                    {"sigma0_sq", p.sigma0_sq},
                    {"sigma_eps_sq", p.sigma_eps_sq},
                    {"rho0", p.rho0},
                    {"rho_eps", p.rho_eps},
                    {"n", o.n}};
  return {render({t}, format_or(c, OutputFormat::kCsv),
                 provenance("vr", c.seed, cfg)),
          kExitOk};
}

// ---------------------------------------------------------------------------

CommandResult run_corpus_generate(const CorpusGenerateOptions& o,
                                  const CommonOptions& c) {
  if (!c.format.empty() && c.format != "json") {
    throw ValidationError("corpus generate writes JSON lines; use --format "
                          "json");
  }
  CorpusConfig cfg;
  if (!o.config.empty()) cfg = parse_corpus_config(load_json(o.config));
  if (o.n_experiments) cfg.n_experiments = *o.n_experiments;
  if (o.rollout_fraction) cfg.rollout_fraction = *o.rollout_fraction;
  if (o.null_fraction) cfg.null_fraction = *o.null_fraction;
  if (o.rho0) cfg.vr.rho0 = *o.rho0;
  if (o.rho_eps) cfg.vr.rho_eps = *o.rho_eps;
  cfg.seed = require_seed(c, "corpus generate");
  cfg.workers = c.workers;
  const Corpus corpus = generate_corpus(cfg);
  for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << '\n';
  std::ostringstream os;
  write_corpus(os, corpus);
  return {os.str(), kExitOk};
}

// ---------------------------------------------------------------------------

namespace {

Table ship_table(const ReplayResult& r, const std::string& table_name) {
  Table t;
  t.name = table_name;
  t.columns = {"method",          "ship_pct",         "ab_ship_pct",
               "rollout_ship_pct", "vs_bonferroni_pp", "vs_bonferroni_rel_pct"};
  t.precision = 4;
  for (const auto& row : r.rows()) {
    t.rows.push_back({name(row.method), 100.0 * row.ship_rate,
                      100.0 * row.ab_ship_rate, 100.0 * row.rollout_ship_rate,
                      opt(row.delta_pp), opt(row.delta_rel)});
  }
  t.notes.push_back(std::to_string(r.n_records) + " comparisons (" +
                    std::to_string(r.n_ab) + " A/B, " +
                    std::to_string(r.n_rollout) + " rollout), family " +
                    std::string(to_string(r.config.family_mode)) +
                    (r.config.vr_on ? ", with" : ", without") +
                    " variance reduction");
  return t;
}

}  // namespace

CommandResult run_replay(const ReplayOptions& o, const CommonOptions& c) {
  std::istringstream in(read_text(o.corpus));
  const Corpus corpus = read_corpus(in);
  ReplayConfig rc;
  if (!o.methods.empty()) {
    rc.methods.clear();
    for (const auto& m : o.methods) rc.methods.push_back(parse_adjust_method(m));
  }
  rc.alpha = o.alpha;
  rc.workers = c.workers;
  if (o.vr != "on" && o.vr != "off" && o.vr != "crossed") {
    throw ValidationError("--vr must be on, off or crossed");
  }
  rc.vr_on = o.vr != "off";

  std::vector<Table> tables;
  const bool family_crossed = o.family == "crossed";
  if (!family_crossed) rc.family_mode = parse_family_mode(o.family);

  if (family_crossed) {
    ReplayConfig naive = rc;
    naive.family_mode = FamilyMode::kNaive;
    ReplayConfig so = rc;
    so.family_mode = FamilyMode::kSuccessOnly;
    const ReplayResult rn = replay(corpus, naive);
    const ReplayResult rs = replay(corpus, so);
    tables.push_back(ship_table(rs, "ship_rates_success_only"));
    tables.push_back(ship_table(rn, "ship_rates_naive"));
    Table t;
    t.name = "family_crossed";
    t.columns = {"method", "naive_pp", "success_only_pp", "gain_pp"};
    t.precision = 4;
    const auto rows_n = rn.rows();
    const auto rows_s = rs.rows();
    for (std::size_t i = 0; i < rows_s.size(); ++i) {
      if (!rows_s[i].delta_pp) continue;
      t.rows.push_back({name(rows_s[i].method), *rows_n[i].delta_pp,
                        *rows_s[i].delta_pp,
                        *rows_s[i].delta_pp - *rows_n[i].delta_pp});
    }
    t.notes.push_back("advantage over bonferroni in percentage points");
    tables.push_back(std::move(t));
    if (o.score) {
      rc.family_mode = FamilyMode::kSuccessOnly;
    }
  } else if (o.vr == "crossed") {
    const auto rows = vr_crossed_replay(corpus, rc);
    Table t;
    t.name = "vr_crossed";
    t.columns = {"method",          "ship_pct_vr", "vs_bonferroni_vr_pp",
                 "ship_pct_no_vr",  "vs_bonferroni_no_vr_pp", "gap_delta_pp",
                 "gap_delta_se_pp"};
    t.precision = 4;
    for (const auto& r : rows) {
      t.rows.push_back({name(r.method), r.ship_vr, opt(r.gap_vr), r.ship_no_vr,
                        opt(r.gap_no_vr), opt(r.gap_delta),
                        opt(r.gap_delta_se)});
    }
    t.notes.push_back("gap_delta = (gap vs. bonferroni with variance "
                      "reduction) - (gap without); negative means variance "
                      "reduction shrank the advantage");
    tables.push_back(std::move(t));
  } else {
    tables.push_back(ship_table(replay(corpus, rc), "ship_rates"));
  }

  if (o.score) {
    const ReplayResult r = replay(corpus, rc);
    Table t;
    t.name = "score";
    t.columns = {"method",        "ab_ships",        "true_ships",
                 "false_ships",   "unlabelled_ships", "true_ship_pct",
                 "false_ship_pct", "false_ship_se_pct", "ppv"};
    t.precision = 4;
    for (const auto& s : score_corpus(r)) {
      t.rows.push_back({name(s.method), s.ab_ships, s.true_ships,
                        s.false_ships, s.unlabelled_ships,
                        100.0 * s.true_ship_rate, 100.0 * s.false_ship_rate,
                        100.0 * s.false_ship_se, opt(s.ppv)});
    }
    t.notes.push_back("rates per A/B comparison; a true ship is driven by a "
                      "success metric that truly improved");
    tables.push_back(std::move(t));
  }

  std::ostringstream corpus_text;
  write_corpus(corpus_text, corpus);
  const json cfg = {{"methods", methods_json(rc.methods)},
                    {"family", o.family},
                    {"alpha", o.alpha},
                    {"vr", o.vr},
                    {"score", o.score},
                    {"corpus_hash", config_hash(json(corpus_text.str()))}};
  return {render(tables, format_or(c, OutputFormat::kCsv),
                 provenance("replay", c.seed, cfg)),
          kExitOk};
}

}  // namespace multitest::cli
