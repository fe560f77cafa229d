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

// Drives the installed command-line tool as a subprocess.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "multitest/corpus.hpp"
#include "multitest/report.hpp"

#if !defined(MULTITEST_CLI) || !defined(MULTITEST_TEST_DATA)
#error "MULTITEST_CLI and MULTITEST_TEST_DATA must be defined"
#endif

namespace {

using nlohmann::json;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& stdin_text = "") {
  std::string cmd = std::string(MULTITEST_CLI) + " " + args;
  if (!stdin_text.empty()) {
    cmd = "printf '%s' '" + stdin_text + "' | " + cmd;
  } else if (args.find('|') == std::string::npos) {
    cmd += " < /dev/null";
  }
  cmd += " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) {
  return std::string(MULTITEST_TEST_DATA) + "/" + name;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "multitest_cli";
  std::filesystem::create_directories(dir);
  return dir / name;
}

TEST(Cli, AdjustWorkedExample) {
  const auto r = run("adjust --method bonferroni --alpha 0.05",
                     "0.01 0.2 0.6");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1,0.01,0.03,true\n2,0.2,0.6,false\n3,0.6,1,false\n"),
            std::string::npos)
      << r.out;
}

TEST(Cli, AdjustErrors) {
  auto r = run("adjust", " ");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("no p-values"), std::string::npos);
  r = run("adjust", "0.1\n0.2\nfoo");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 3"), std::string::npos);
  r = run("adjust --method sidak", "0.1");
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, DecideExitCodes) {
  auto r = run("decide " + data("decide_rollout.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(json::parse(r.out)["decision"]["ship"].get<bool>());

  r = run("decide " + data("decide_failing_guardrail.json"));
  EXPECT_EQ(r.code, 1);
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["decision"]["failed_guardrails"], json({"crash_rate"}));
  EXPECT_EQ(doc["provenance"]["command"], "decide");
  for (const auto& m : doc["metrics"]) {
    EXPECT_TRUE(m.contains("adjusted_p"));
    EXPECT_TRUE(m.contains("ci"));
  }

  r = run("decide " + data("decide_wrong_direction.json"));
  EXPECT_EQ(r.code, 1);
  r = run("decide " + data("decide_ship.json") + " --format md");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("| outcome | ship |"), std::string::npos);
}

TEST(Cli, DecideInvalidInput) {
  const auto bad = scratch("bad_spec.json");
  std::ofstream(bad) << "{\"schema_version\": \"1\",\n \"metrics\": [,]}";
  auto r = run("decide " + bad.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find(":2:"), std::string::npos) << r.out;
  std::ofstream(bad) << R"({"schema_version": "1", "metrics": [],
                           "extra": 1})";
  EXPECT_EQ(run("decide " + bad.string()).code, 2);
}

TEST(Cli, PlanFixture) {
  const auto r = run("plan --config " + data("plan_single.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(",1570\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("# This experiment is powered at 80% to detect a "
                       "change of 0.1 in any of 1 success metrics, "
                       "controlling FWER at 5%."),
            std::string::npos)
      << r.out;
  const auto flags = run("plan --delta 0.1 --success 2 --format json");
  EXPECT_EQ(json::parse(flags.out)["tables"][0]["rows"][1]["n_per_variant"],
            1901);
}

TEST(Cli, SimulateIsByteIdentical) {
  const std::string args =
      "simulate --config " + data("table2.json") + " --reps 800 --seed 7";
  const auto a = run(args);
  const auto b = run(args);
  const auto c = run(args + " --workers 3");
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  EXPECT_NE(a.out.find("# seed: 7"), std::string::npos);
}

TEST(Cli, SeedsMustBeExplicit) {
  EXPECT_EQ(run("simulate --config " + data("table2.json")).code, 2);
  // Seed-like environment variables are ignored.
  const std::string cmd = std::string("env MULTITEST_SEED=3 SEED=3 ") +
                          MULTITEST_CLI + " corpus generate 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  std::array<char, 4096> buf{};
  while (fread(buf.data(), 1, buf.size(), p) > 0) {
  }
  const int status = pclose(p);
  EXPECT_EQ(WEXITSTATUS(status), 2);
  EXPECT_EQ(run("vr --n 1000").code, 2);
  EXPECT_EQ(run("vr --n 0").code, 0);
}

TEST(Cli, NumericFailureExitCode) {
  const auto cfg = scratch("bad_corr.json");
  std::ofstream(cfg) << R"({"schema_version": "1", "m": 2, "reps": 10,
    "corr": {"type": "explicit", "matrix": [[1, 2], [2, 1]]}})";
  const auto r = run("simulate --seed 1 --config " + cfg.string());
  EXPECT_EQ(r.code, 3) << r.out;
}

TEST(Cli, GstTable) {
  const auto r = run("gst " + data("gst_obf.json") + " --format json");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = json::parse(r.out)["tables"][0]["rows"];
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_NEAR(rows[3]["cumulative_spend"].get<double>(), 0.05, 1e-9);
  for (const auto& row : rows) {
    EXPECT_GE(row["bonferroni_over_time_bound"].get<double>() + 1e-9,
              row["z_bound"].get<double>());
  }
  EXPECT_EQ(run("gst " + data("gst_obf.json") + " --check-paths 100").code,
            2);
}

TEST(Cli, VrTable) {
  const auto r = run("vr --gamma 1 --rho0 0.8 --rho-eps 0.2 --n 20000 "
                     "--seed 3 --format json");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = json::parse(r.out)["tables"][0]["rows"];
  EXPECT_NEAR(rows[0]["closed_form"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(rows[0]["monte_carlo"].get<double>(), 0.5, 0.03);
}

TEST(Cli, OutFileAndFormats) {
  const auto out = scratch("adjust.md");
  std::filesystem::remove(out);
  EXPECT_EQ(run("adjust --format md --out " + out.string(), "0.01 0.02").code,
            0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("| index | raw | adjusted | rejected |"),
            std::string::npos);
  EXPECT_EQ(run("adjust --format xml", "0.1").code, 2);
}

TEST(Cli, CorpusRoundTripMatchesLibrary) {
  const auto path = scratch("corpus.jsonl");
  const auto gen = run("corpus generate --n-experiments 400 --seed 5 --out " +
                       path.string());
  ASSERT_EQ(gen.code, 0) << gen.out;
  const auto r = run("replay " + path.string() + " --format json");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto rows = json::parse(r.out)["tables"][0]["rows"];

  multitest::CorpusConfig cfg;
  cfg.n_experiments = 400;
  cfg.seed = 5;
  const auto lib = multitest::replay(multitest::generate_corpus(cfg), {});
  const auto lib_rows = lib.rows();
  ASSERT_EQ(rows.size(), lib_rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i]["method"], std::string(to_string(lib_rows[i].method)));
    EXPECT_EQ(multitest::format_double(rows[i]["ship_pct"].get<double>(), 4),
              multitest::format_double(100 * lib_rows[i].ship_rate, 4));
  }
  const auto piped =
      run("corpus generate --n-experiments 400 --seed 5 | " +
          std::string(MULTITEST_CLI) + " replay - --format json");
  EXPECT_EQ(json::parse(piped.out)["tables"], json::parse(r.out)["tables"]);
}

TEST(Cli, ReplayFamilyAndVrLayouts) {
  const auto path = scratch("corpus_layouts.jsonl");
  ASSERT_EQ(run("corpus generate --n-experiments 300 --seed 6 --out " +
                path.string())
                .code,
            0);
  auto r = run("replay " + path.string() + " --family crossed --format md");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("## family_crossed"), std::string::npos);
  r = run("replay " + path.string() + " --vr crossed --score");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("gap_delta_pp"), std::string::npos);
  EXPECT_NE(r.out.find("false_ship_pct"), std::string::npos);
  EXPECT_EQ(run("replay " + path.string() + " --family everything").code, 2);
}

TEST(Cli, HelpDocumentsFlags) {
  const auto r = run("simulate --help");
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--seed", "--out", "--format", "--workers"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
}

}  // namespace
