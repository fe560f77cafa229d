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

#ifndef MULTITEST_IO_HPP_
#define MULTITEST_IO_HPP_

// JSON input documents. Every document is an object with a
// "schema_version" of "1"; unknown fields are rejected so that typos fail
// loudly instead of silently falling back to defaults.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "multitest/corpus.hpp"
#include "multitest/decision.hpp"
#include "multitest/linalg.hpp"
#include "multitest/planning.hpp"
#include "multitest/sequential.hpp"
#include "multitest/sim_engine.hpp"
#include "multitest/vr_model.hpp"

namespace multitest {

inline constexpr const char* kSchemaVersion = "1";

// Reads a file (or stdin for "-") and parses it as JSON. Parse errors are
// reported as ValidationError with line and column.
nlohmann::json load_json(const std::string& path);

struct ExperimentSpec {
  DecisionConfig config;
  std::vector<MetricResult> metrics;
  std::optional<SrmCheck> srm;
};

ExperimentSpec parse_experiment_spec(const nlohmann::json& j);
SimConfig parse_sim_config(const nlohmann::json& j);
CorrelationSpec parse_correlation(const nlohmann::json& j);
nlohmann::json correlation_to_json(const CorrelationSpec& spec);
VrDgpParams parse_vr_params(const nlohmann::json& j);
PlanInputs parse_plan_inputs(const nlohmann::json& j);
CorpusConfig parse_corpus_config(const nlohmann::json& j);

struct GstDocument {
  double alpha = 0.05;
  int success_count = 1;
  std::vector<MetricSchedule> schedules;
  GridOptions grid;
};

// Each metric names its own fractions, spending function and sidedness;
// budgets are alpha / success_count.
GstDocument parse_gst_document(const nlohmann::json& j);

// Numbers separated by whitespace or commas; '#' starts a comment.
// Throws ValidationError naming the line of the first bad token.
std::vector<double> parse_pvalue_list(const std::string& text);

}  // namespace multitest

#endif  // MULTITEST_IO_HPP_
