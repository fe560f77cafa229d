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

#include "multitest/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include "multitest/error.hpp"

namespace multitest {

using nlohmann::json;

namespace {

// Reads fields from one JSON object and rejects any it was not asked for.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ValidationError(where_ + ": expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  template <typename T>
  T get(const char* key) {
    if (!has(key)) {
      throw ValidationError(where_ + ": missing field '" + key + "'");
    }
    return convert<T>(key);
  }

  template <typename T>
  T get(const char* key, T fallback) {
    return has(key) ? convert<T>(key) : fallback;
  }

  template <typename T>
  std::optional<T> optional(const char* key) {
    if (!has(key) || j_.at(key).is_null()) return std::nullopt;
    return convert<T>(key);
  }

  const json& raw(const char* key) {
    if (!has(key)) {
      throw ValidationError(where_ + ": missing field '" + key + "'");
    }
    return j_.at(key);
  }

  std::string at(const std::string& sub) const { return where_ + "." + sub; }

  // Call after reading every field.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) {
        throw ValidationError(where_ + ": unknown field '" + key + "'");
      }
    }
  }

  void check_schema() {
    const auto v = get<std::string>("schema_version");
    if (v != kSchemaVersion) {
      throw ValidationError(where_ + ": unsupported schema_version '" + v +
                            "' (expected '" + kSchemaVersion + "')");
    }
  }

 private:
  template <typename T>
  T convert(const char* key) const {
    const json& v = j_.at(key);
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) {
        throw ValidationError(where_ + ": field '" + key +
                              "' must be a number");
      }
    } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
      if (!v.is_number_integer()) {
        throw ValidationError(where_ + ": field '" + key +
                              "' must be an integer");
      }
    }
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      throw ValidationError(where_ + ": field '" + key +
                            "' has the wrong type");
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::vector<AdjustMethod> parse_methods(const std::vector<std::string>& names) {
  std::vector<AdjustMethod> out;
  for (const auto& n : names) out.push_back(parse_adjust_method(n));
  if (out.empty()) throw ValidationError("methods must be nonempty");
  return out;
}

CountDistribution parse_counts(const json& j, const std::string& where) {
  Fields f(j, where);
  CountDistribution d;
  d.min = f.get<int>("min", 1);
  d.head = f.get<std::vector<double>>("head");
  d.tail_ratio = f.get<double>("tail_ratio", 0.0);
  d.tail_length = f.get<int>("tail_length", 0);
  f.finish();
  return d;
}

}  // namespace

json load_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << path << ":" << line << ":" << col << ": invalid JSON";
    throw ValidationError(os.str());
  }
}

ExperimentSpec parse_experiment_spec(const json& j) {
  Fields f(j, "spec");
  f.check_schema();
  ExperimentSpec spec;
  spec.config.alpha = f.get<double>("alpha", 0.05);
  spec.config.method =
      parse_adjust_method(f.get<std::string>("method", "bonferroni"));
  spec.config.family_mode =
      parse_family_mode(f.get<std::string>("family_mode", "success_only"));
  spec.config.srm_alpha = f.get<double>("srm_alpha", 0.001);
  const json& metrics = f.raw("metrics");
  if (!metrics.is_array() || metrics.empty()) {
    throw ValidationError("spec.metrics must be a nonempty array");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    Fields m(metrics[i], "spec.metrics[" + std::to_string(i) + "]");
    MetricResult r;
    r.name = m.get<std::string>("name");
    if (!names.insert(r.name).second) {
      throw ValidationError(m.at("name") + ": duplicate metric '" + r.name +
                            "'");
    }
    r.role = parse_metric_role(m.get<std::string>("role"));
    r.direction =
        parse_direction(m.get<std::string>("direction", "higher_is_better"));
    r.estimate = m.get<double>("estimate");
    r.se = m.get<double>("se");
    r.nim_margin = m.optional<double>("nim_margin");
    r.n_treat = m.optional<std::int64_t>("n_treat");
    r.n_ctrl = m.optional<std::int64_t>("n_ctrl");
    m.finish();
    spec.metrics.push_back(std::move(r));
  }
  if (f.has("srm")) {
    Fields s(j.at("srm"), "spec.srm");
    SrmCheck srm;
    srm.counts = s.get<std::vector<std::int64_t>>("counts");
    srm.ratios = s.get<std::vector<double>>("ratios");
    s.finish();
    spec.srm = std::move(srm);
  }
  f.finish();
  return spec;
}

CorrelationSpec parse_correlation(const json& j) {
  Fields f(j, "corr");
  const auto type = f.get<std::string>("type");
  CorrelationSpec out;
  if (type == "independent") {
    out = Independent{};
  } else if (type == "equicorrelated") {
    out = Equicorrelated{f.get<double>("rho")};
  } else if (type == "block") {
    out = BlockCorrelation{f.get<std::vector<int>>("sizes"),
                           f.get<std::vector<double>>("rhos")};
  } else if (type == "explicit") {
    const auto rows = f.get<std::vector<std::vector<double>>>("matrix");
    Matrix m(rows.size(), rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows.size()) {
        throw ValidationError("corr.matrix must be square");
      }
      for (std::size_t c = 0; c < rows.size(); ++c) m(r, c) = rows[r][c];
    }
    out = ExplicitCorrelation{m};
  } else {
    throw ValidationError("corr.type must be one of independent, "
                          "equicorrelated, block, explicit");
  }
  f.finish();
  return out;
}

json correlation_to_json(const CorrelationSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Independent>) {
          return {{"type", "independent"}};
        } else if constexpr (std::is_same_v<T, Equicorrelated>) {
          return {{"type", "equicorrelated"}, {"rho", s.rho}};
        } else if constexpr (std::is_same_v<T, BlockCorrelation>) {
          return {{"type", "block"}, {"sizes", s.sizes}, {"rhos", s.rhos}};
        } else {
          json rows = json::array();
          for (Eigen::Index r = 0; r < s.matrix.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < s.matrix.cols(); ++c) {
              row.push_back(s.matrix(r, c));
            }
            rows.push_back(row);
          }
          return {{"type", "explicit"}, {"matrix", rows}};
        }
      },
      spec);
}

SimConfig parse_sim_config(const json& j) {
  Fields f(j, "config");
  f.check_schema();
  SimConfig c;
  c.m = f.get<int>("m", c.m);
  c.n_total = f.get<std::int64_t>("n_total", c.n_total);
  c.reps = f.get<std::int64_t>("reps", c.reps);
  c.deltas = f.get<std::vector<double>>("deltas", c.deltas);
  if (f.has("corr")) c.corr = parse_correlation(j.at("corr"));
  c.k_nonnull = f.get<int>("k_nonnull", c.m);
  if (f.has("methods")) {
    c.methods = parse_methods(f.get<std::vector<std::string>>("methods"));
  }
  c.alpha = f.get<double>("alpha", c.alpha);
  c.sides = parse_sides(f.get<std::string>("sides", "one"));
  c.mode = parse_sim_mode(f.get<std::string>("mode", "sufficient"));
  f.finish();
  validate(c);
  return c;
}

VrDgpParams parse_vr_params(const json& j) {
  Fields f(j, "vr");
  if (f.has("schema_version")) f.check_schema();
  VrDgpParams p;
  p.gamma = f.get<double>("gamma", p.gamma);
  p.gamma_b = f.optional<double>("gamma_b");
  p.sigma0_sq = f.get<double>("sigma0_sq", p.sigma0_sq);
  p.sigma_eps_sq = f.get<double>("sigma_eps_sq", p.sigma_eps_sq);
  p.rho0 = f.get<double>("rho0", p.rho0);
  p.rho_eps = f.get<double>("rho_eps", p.rho_eps);
  p.tau_a = f.get<double>("tau_a", p.tau_a);
  p.tau_b = f.get<double>("tau_b", p.tau_b);
  p.mu_a = f.get<double>("mu_a", p.mu_a);
  p.mu_b = f.get<double>("mu_b", p.mu_b);
  f.finish();
  validate(p);
  return p;
}

PlanInputs parse_plan_inputs(const json& j) {
  Fields f(j, "plan");
  f.check_schema();
  PlanInputs p;
  p.alpha = f.get<double>("alpha", p.alpha);
  p.beta = f.get<double>("beta", p.beta);
  p.delta = f.get<double>("delta");
  p.sigma = f.get<double>("sigma", p.sigma);
  p.success_count = f.get<int>("success_count", p.success_count);
  p.margins = f.get<std::vector<double>>("margins", {});
  p.guardrail_count =
      f.get<int>("guardrail_count", static_cast<int>(p.margins.size()));
  p.guardrail_beta_weights =
      f.get<std::vector<double>>("guardrail_beta_weights", {});
  p.guardrail_expected_effect = f.get<double>("guardrail_expected_effect", 0.0);
  p.mde_label = f.get<std::string>("mde_label", "");
  f.finish();
  return p;
}

CorpusConfig parse_corpus_config(const json& j) {
  Fields f(j, "corpus");
  f.check_schema();
  CorpusConfig c;
  c.n_experiments = f.get<std::int64_t>("n_experiments", c.n_experiments);
  c.rollout_fraction = f.get<double>("rollout_fraction", c.rollout_fraction);
  c.comparisons_per_experiment = f.get<std::vector<double>>(
      "comparisons_per_experiment", c.comparisons_per_experiment);
  if (f.has("success_counts")) {
    c.success_counts = parse_counts(j.at("success_counts"), f.at("success_counts"));
  }
  if (f.has("guardrail_counts")) {
    c.guardrail_counts =
        parse_counts(j.at("guardrail_counts"), f.at("guardrail_counts"));
  }
  if (f.has("quality_counts")) {
    c.quality_counts = parse_counts(j.at("quality_counts"), f.at("quality_counts"));
  }
  c.null_fraction = f.get<double>("null_fraction", c.null_fraction);
  c.treatment_level_nulls =
      f.get<bool>("treatment_level_nulls", c.treatment_level_nulls);
  c.effect_mean = f.get<double>("effect_mean", c.effect_mean);
  c.effect_sd = f.get<double>("effect_sd", c.effect_sd);
  c.harmful_fraction = f.get<double>("harmful_fraction", c.harmful_fraction);
  c.higher_is_better_fraction =
      f.get<double>("higher_is_better_fraction", c.higher_is_better_fraction);
  c.margin_min = f.get<double>("margin_min", c.margin_min);
  c.margin_max = f.get<double>("margin_max", c.margin_max);
  c.guardrail_harm_fraction =
      f.get<double>("guardrail_harm_fraction", c.guardrail_harm_fraction);
  c.quality_harm_fraction =
      f.get<double>("quality_harm_fraction", c.quality_harm_fraction);
  c.quality_harm_z = f.get<double>("quality_harm_z", c.quality_harm_z);
  c.corr_zero_weight = f.get<double>("corr_zero_weight", c.corr_zero_weight);
  c.corr_max = f.get<double>("corr_max", c.corr_max);
  if (f.has("vr")) c.vr = parse_vr_params(j.at("vr"));
  f.finish();
  validate(c);
  return c;
}

GstDocument parse_gst_document(const json& j) {
  Fields f(j, "schedule");
  f.check_schema();
  GstDocument doc;
  doc.alpha = f.get<double>("alpha", doc.alpha);
  doc.success_count = f.get<int>("success_count", 0);
  const std::string default_spending =
      f.get<std::string>("spending", "obf_type");
  const std::string default_sides = f.get<std::string>("sides", "two");
  if (f.has("grid")) {
    Fields g(j.at("grid"), "schedule.grid");
    doc.grid.range = g.get<double>("range", doc.grid.range);
    doc.grid.initial_step = g.get<double>("initial_step", doc.grid.initial_step);
    doc.grid.tolerance = g.get<double>("tolerance", doc.grid.tolerance);
    doc.grid.max_halvings = g.get<int>("max_halvings", doc.grid.max_halvings);
    g.finish();
  }
  const json& metrics = f.raw("metrics");
  if (!metrics.is_array() || metrics.empty()) {
    throw ValidationError("schedule.metrics must be a nonempty array");
  }
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    Fields m(metrics[i], "schedule.metrics[" + std::to_string(i) + "]");
    MetricSchedule ms;
    ms.schedule.metric_name = m.get<std::string>("name");
    ms.schedule.fractions = m.get<std::vector<double>>("fractions");
    ms.schedule.sides = parse_sides(m.get<std::string>("sides", default_sides));
    ms.spending = parse_spending_function(
        m.get<std::string>("spending", default_spending));
    m.finish();
    doc.schedules.push_back(std::move(ms));
  }
  if (doc.success_count == 0) {
    doc.success_count = static_cast<int>(doc.schedules.size());
  }
  f.finish();
  return doc;
}

std::vector<double> parse_pvalue_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    for (char& ch : line) {
      if (ch == ',' || ch == ';' || ch == '\t' || ch == '\r') ch = ' ';
    }
    std::istringstream tokens(line);
    std::string tok;
    while (tokens >> tok) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": not a number: '" + tok + "'");
      }
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("line " + std::to_string(line_no) +
                              ": p-value outside [0, 1]: '" + tok + "'");
      }
      out.push_back(v);
    }
  }
  if (out.empty()) throw ValidationError("no p-values");
  return out;
}

}  // namespace multitest
