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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "multitest/error.hpp"
#include "multitest/io.hpp"
#include "multitest/report.hpp"

namespace multitest {
namespace {

using nlohmann::json;

TEST(PValueList, ParsesSeparatorsAndComments) {
  EXPECT_EQ(parse_pvalue_list("0.1, 0.2;0.3\t0.4 # note\n\n0.5\n"),
            (std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5}));
  try {
    parse_pvalue_list("0.1\n0.2 abc\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_pvalue_list("1.2"), ValidationError);
  try {
    parse_pvalue_list("  # nothing\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "no p-values");
  }
}

TEST(Schemas, StrictFieldsAndVersion) {
  const json ok = {{"schema_version", "1"}, {"m", 4}, {"reps", 10}};
  EXPECT_EQ(parse_sim_config(ok).m, 4);
  json bad = ok;
  bad["colour"] = "blue";
  EXPECT_THROW(parse_sim_config(bad), ValidationError);
  bad = ok;
  bad["schema_version"] = "2";
  EXPECT_THROW(parse_sim_config(bad), ValidationError);
  bad = ok;
  bad.erase("schema_version");
  EXPECT_THROW(parse_sim_config(bad), ValidationError);
}

TEST(Schemas, CorrelationRoundTrip) {
  for (const json& j :
       {json{{"type", "independent"}},
        json{{"type", "equicorrelated"}, {"rho", 0.95}},
        json{{"type", "block"},
             {"sizes", {4, 4}},
             {"rhos", {0.95, 0.0}}}}) {
    EXPECT_EQ(correlation_to_json(parse_correlation(j)), j);
  }
  EXPECT_THROW(parse_correlation(json{{"type", "toeplitz"}}),
               ValidationError);
}

TEST(Schemas, ExperimentSpec) {
  const json j = {
      {"schema_version", "1"},
      {"method", "holm"},
      {"metrics",
       {{{"name", "a"}, {"role", "success"}, {"estimate", 1.0}, {"se", 0.5}},
        {{"name", "g"},
         {"role", "guardrail"},
         {"direction", "lower_is_better"},
         {"estimate", 0.0},
         {"se", 1.0},
         {"nim_margin", 2.0}}}}};
  const auto spec = parse_experiment_spec(j);
  EXPECT_EQ(spec.metrics.size(), 2u);
  EXPECT_EQ(spec.config.method, AdjustMethod::kHolm);
  EXPECT_EQ(spec.metrics[1].direction, Direction::kLowerIsBetter);
  json bad = j;
  bad["metrics"][0]["role"] = "primary";
  EXPECT_THROW(parse_experiment_spec(bad), ValidationError);
  bad = j;
  bad["metrics"][0]["weight"] = 1;
  EXPECT_THROW(parse_experiment_spec(bad), ValidationError);
}

TEST(Report, RendersAllFormatsWithProvenance) {
  Table t;
  t.name = "demo";
  t.columns = {"method", "value", "flag", "missing"};
  t.rows = {{std::string("holm"), 0.25, true, std::monostate{}}};
  t.notes = {"a note"};
  const Provenance p{"adjust", 7, config_hash(json{{"a", 1}})};

  const std::string csv = render({t}, OutputFormat::kCsv, p);
  EXPECT_NE(csv.find("# seed: 7"), std::string::npos);
  EXPECT_NE(csv.find("method,value,flag,missing\nholm,0.25,true,\n"),
            std::string::npos);
  EXPECT_NE(csv.find("# a note"), std::string::npos);

  const std::string md = render({t}, OutputFormat::kMd, p);
  EXPECT_NE(md.find("| holm | 0.25 | true |  |"), std::string::npos);
  EXPECT_NE(md.find("provenance"), std::string::npos);

  const json doc = json::parse(render({t}, OutputFormat::kJson, p));
  EXPECT_EQ(doc["provenance"]["seed"], 7);
  EXPECT_EQ(doc["provenance"]["command"], "adjust");
  EXPECT_EQ(doc["tables"][0]["rows"][0]["value"], 0.25);
  EXPECT_TRUE(doc["tables"][0]["rows"][0]["missing"].is_null());
  EXPECT_THROW(parse_output_format("xml"), ValidationError);
}

TEST(Report, ConfigHashIsStable) {
  const json a = {{"x", 1}, {"y", {1, 2}}};
  const json b = json::parse(R"({"y":[1,2],"x":1})");
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_NE(config_hash(a), config_hash(json{{"x", 2}}));
}

}  // namespace
}  // namespace multitest
