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

// multitest._core: the library's main operations for Python. Structured
// inputs cross the boundary as JSON text; the pure-Python wrapper in
// multitest/__init__.py handles dict <-> JSON.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "multitest/adjust.hpp"
#include "multitest/corpus.hpp"
#include "multitest/decision.hpp"
#include "multitest/error.hpp"
#include "multitest/intervals.hpp"
#include "multitest/io.hpp"
#include "multitest/planning.hpp"
#include "multitest/report.hpp"
#include "multitest/sequential.hpp"
#include "multitest/sim_engine.hpp"
#include "multitest/vr_model.hpp"

namespace py = pybind11;
namespace mt = multitest;
using nlohmann::json;

namespace {

std::string s(mt::AdjustMethod m) { return std::string(mt::to_string(m)); }

py::dict adjust_py(const std::vector<double>& p, const std::string& method,
                   double alpha) {
  const auto adj = mt::adjust(p, mt::parse_adjust_method(method));
  const auto rej = mt::reject_set(adj, alpha);
  py::dict out;
  out["raw"] = adj.raw;
  out["adjusted"] = adj.adjusted;
  out["rejected"] = rej;
  out["method"] = s(adj.method);
  return out;
}

std::vector<std::size_t> closure_py(const std::vector<double>& p,
                                    const std::string& local, double alpha) {
  mt::LocalTest t;
  if (local == "bonferroni") {
    t = mt::LocalTest::kBonferroni;
  } else if (local == "simes") {
    t = mt::LocalTest::kSimes;
  } else {
    throw mt::ValidationError("local test must be bonferroni or simes");
  }
  return mt::closure_oracle(p, t, alpha);
}

std::vector<std::pair<double, double>> cis_py(const std::vector<double>& est,
                                              const std::vector<double>& se,
                                              double alpha, std::size_t m) {
  std::vector<std::pair<double, double>> out;
  for (const auto& ci : mt::bonferroni_cis(est, se, alpha, m)) {
    out.emplace_back(ci.lower, ci.upper);
  }
  return out;
}

py::dict plan_py(const std::string& inputs_json) {
  const mt::Plan plan =
      mt::plan_experiment(mt::parse_plan_inputs(json::parse(inputs_json)));
  py::list rows;
  for (const auto& r : plan.rows) {
    py::dict d;
    d["metric"] = r.metric;
    d["alpha_used"] = r.alpha_used;
    d["beta_used"] = r.beta_used;
    d["n_exact"] = r.n.exact;
    d["n_per_variant"] = r.n.per_variant;
    rows.append(d);
  }
  py::dict out;
  out["rows"] = rows;
  out["overall_per_variant"] = plan.overall_per_variant;
  out["adjusted_alpha"] = plan.adjusted_alpha;
  out["statement"] = plan.statement;
  return out;
}

py::dict gst_py(const std::vector<double>& fractions, double budget,
                const std::string& spending, const std::string& sides) {
  mt::LookSchedule sched{"metric", fractions, budget, mt::parse_sides(sides)};
  const auto fn = mt::parse_spending_function(spending);
  const auto b = mt::gst_boundaries(sched, fn);
  const auto bot = mt::bonferroni_over_time(sched, fn);
  py::dict out;
  out["z_bounds"] = b.z_bounds;
  out["cumulative_spend"] = b.cumulative_spend;
  out["incremental_spend"] = b.incremental_spend;
  out["bonferroni_over_time"] = bot.z_bounds;
  return out;
}

std::string decide_py(const std::string& spec_json) {
  const mt::ExperimentSpec spec =
      mt::parse_experiment_spec(json::parse(spec_json));
  const mt::Decision d = mt::ship_decision(spec.metrics, spec.config, spec.srm);
  json metrics = json::array();
  for (const auto& m : d.metrics) {
    metrics.push_back({{"name", m.name},
                       {"role", std::string(mt::to_string(m.role))},
                       {"raw_p", m.raw_p},
                       {"adjusted_p", m.adjusted_p},
                       {"in_family", m.in_family},
                       {"ci", {m.interval.lower, m.interval.upper}},
                       {"ci_level", m.interval.level},
                       {"gate", std::string(mt::to_string(m.gate))}});
  }
  json out = {{"ship", d.ship},
              {"driving_success", d.driving_success},
              {"failed_guardrails", d.failed_guardrails},
              {"blocking_quality", d.blocking_quality},
              {"family_size", d.family_size},
              {"srm_blocked", d.srm_blocked},
              {"metrics", metrics}};
  out["srm_p"] = d.srm_p ? json(*d.srm_p) : json(nullptr);
  return out.dump();
}

py::list power_py(const std::string& config_json, std::uint64_t seed,
                  std::int64_t reps, int workers) {
  mt::SimConfig cfg = mt::parse_sim_config(json::parse(config_json));
  cfg.seed = seed;
  if (reps > 0) cfg.reps = reps;
  cfg.workers = workers;
  mt::PowerTable table;
  {
    py::gil_scoped_release release;
    table = mt::run_power_study(cfg);
  }
  py::list out;
  for (const auto& c : table.cells) {
    py::dict d;
    d["method"] = s(c.method);
    d["delta"] = c.delta;
    d["power"] = c.power();
    d["fwer"] = c.fwer();
    d["power_se"] = c.power_se();
    d["fwer_se"] = c.fwer_se();
    out.append(d);
  }
  return out;
}

mt::VrDgpParams vr_params(const std::string& params_json) {
  mt::VrDgpParams p = mt::parse_vr_params(json::parse(params_json));
  mt::validate(p);
  return p;
}

std::string corpus_py(const std::string& config_json, std::uint64_t seed,
                      int workers) {
  mt::CorpusConfig cfg = mt::parse_corpus_config(json::parse(config_json));
  cfg.seed = seed;
  cfg.workers = workers;
  std::ostringstream os;
  mt::Corpus corpus;
  {
    py::gil_scoped_release release;
    corpus = mt::generate_corpus(cfg);
  }
  mt::write_corpus(os, corpus);
  return os.str();
}

py::list replay_py(const std::string& corpus_jsonl,
                   const std::vector<std::string>& methods,
                   const std::string& family, double alpha, bool vr_on) {
  std::istringstream in(corpus_jsonl);
  const mt::Corpus corpus = mt::read_corpus(in);
  mt::ReplayConfig cfg;
  if (!methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : methods) {
      cfg.methods.push_back(mt::parse_adjust_method(m));
    }
  }
  cfg.family_mode = mt::parse_family_mode(family);
  cfg.alpha = alpha;
  cfg.vr_on = vr_on;
  py::list out;
  for (const auto& r : mt::replay(corpus, cfg).rows()) {
    py::dict d;
    d["method"] = s(r.method);
    d["ship_rate"] = r.ship_rate;
    d["ab_ship_rate"] = r.ab_ship_rate;
    d["rollout_ship_rate"] = r.rollout_ship_rate;
    d["delta_pp"] = r.delta_pp ? py::object(py::float_(*r.delta_pp))
                               : py::object(py::none());
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Multiple-testing corrections and ship decisions";
  m.attr("__version__") = std::string(mt::library_version());

  py::register_exception<mt::ValidationError>(m, "ValidationError",
                                               PyExc_ValueError);
  py::register_exception<mt::DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<mt::NumericError>(m, "NumericError",
                                           PyExc_ArithmeticError);

  m.def("adjust", &adjust_py, py::arg("pvalues"),
        py::arg("method") = "bonferroni", py::arg("alpha") = 0.05,
        "Adjusted p-values and the rejected indices.");
  m.def("closure_oracle", &closure_py, py::arg("pvalues"),
        py::arg("local_test"), py::arg("alpha") = 0.05,
        "Brute-force closed testing with a Bonferroni or Simes local test.");
  m.def("bonferroni_cis", &cis_py, py::arg("estimates"), py::arg("ses"),
        py::arg("alpha"), py::arg("m"));
  m.def("plan_json", &plan_py, py::arg("inputs_json"));
  m.def("gst_boundaries", &gst_py, py::arg("fractions"),
        py::arg("budget") = 0.05, py::arg("spending") = "obf",
        py::arg("sides") = "two");
  m.def("alpha_spend",
        [](const std::string& fn, double budget, double t) {
          return mt::alpha_spend(mt::parse_spending_function(fn), budget, t);
        },
        py::arg("spending"), py::arg("budget"), py::arg("t"));
  m.def("decide_json", &decide_py, py::arg("spec_json"));
  m.def("power_study_json", &power_py, py::arg("config_json"),
        py::arg("seed"), py::arg("reps") = 0, py::arg("workers") = 1);
  m.def("unadjusted_corr_json",
        [](const std::string& p) { return mt::unadjusted_corr(vr_params(p)); });
  m.def("decorrelation_gap_json", [](const std::string& p) {
    return mt::decorrelation_gap(vr_params(p));
  });
  m.def("generate_corpus_json", &corpus_py, py::arg("config_json"),
        py::arg("seed"), py::arg("workers") = 1);
  m.def("replay_jsonl", &replay_py, py::arg("corpus_jsonl"),
        py::arg("methods") = std::vector<std::string>{},
        py::arg("family") = "success_only", py::arg("alpha") = 0.05,
        py::arg("vr_on") = true);
}
