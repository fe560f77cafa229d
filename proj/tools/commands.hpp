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

#ifndef MULTITEST_TOOLS_COMMANDS_HPP_
#define MULTITEST_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multitest/report.hpp"

namespace multitest::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNoShip = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

struct CommonOptions {
  std::string format;  // empty = the command's default
  std::string out;     // empty or "-" = stdout
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

struct CommandResult {
  std::string text;
  int exit_code = kExitOk;
};

struct AdjustOptions {
  std::string input = "-";
  std::string method = "bonferroni";
  double alpha = 0.05;
};
CommandResult run_adjust(const AdjustOptions& o, const CommonOptions& c);

struct DecideOptions {
  std::string spec;
  std::optional<std::string> method;
  std::optional<std::string> family;
  std::optional<double> alpha;
};
CommandResult run_decide(const DecideOptions& o, const CommonOptions& c);

struct PlanOptions {
  std::string config;
  double alpha = 0.05;
  double beta = 0.2;
  std::optional<double> delta;
  double sigma = 1.0;
  int success = 1;
  std::vector<double> margins;
  std::vector<double> beta_weights;
  double expected_effect = 0.0;
  std::string mde_label;
};
CommandResult run_plan(const PlanOptions& o, const CommonOptions& c);

struct GstOptions {
  std::string schedule;
  std::int64_t check_paths = 0;
};
CommandResult run_gst(const GstOptions& o, const CommonOptions& c);

struct SimulateOptions {
  std::string study = "power";
  std::string config;
  std::optional<std::int64_t> reps;
  std::optional<std::string> mode;
  // sparse
  int m = 100;
  double q = 0.05;
  double target_power = 0.95;
  std::string method = "bh";
  // advantage
  double delta = 0.10;
};
CommandResult run_simulate(const SimulateOptions& o, const CommonOptions& c);

struct VrOptions {
  std::string config;
  std::optional<double> gamma, gamma_b, sigma0_sq, sigma_eps_sq, rho0,
      rho_eps;
  std::int64_t n = 100000;
};
CommandResult run_vr(const VrOptions& o, const CommonOptions& c);

struct CorpusGenerateOptions {
  std::string config;
  std::optional<std::int64_t> n_experiments;
  std::optional<double> rollout_fraction;
  std::optional<double> null_fraction;
  std::optional<double> rho0;
  std::optional<double> rho_eps;
};
CommandResult run_corpus_generate(const CorpusGenerateOptions& o,
                                  const CommonOptions& c);

struct ReplayOptions {
  std::string corpus = "-";
  std::vector<std::string> methods;
  std::string family = "success_only";  // or naive, naive_nim, crossed
  double alpha = 0.05;
  std::string vr = "on";                // on, off, crossed
  bool score = false;
};
CommandResult run_replay(const ReplayOptions& o, const CommonOptions& c);

}  // namespace multitest::cli

#endif  // MULTITEST_TOOLS_COMMANDS_HPP_
