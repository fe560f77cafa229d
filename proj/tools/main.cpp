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

// multitest: command-line front end. Exit codes: 0 ok / ship, 1 no-ship,
// 2 invalid input, 3 numeric failure.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "multitest/error.hpp"
#include "multitest/report.hpp"

namespace cli = multitest::cli;

namespace {

void add_common(CLI::App* app, cli::CommonOptions& c) {
  app->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "md", "json"}));
  app->add_option("--out", c.out, "Output file (default stdout)");
  app->add_option("--seed", c.seed,
                  "Random seed; required by commands that sample");
  app->add_option("--workers", c.workers,
                  "Worker threads (0 = all cores); results do not depend "
                  "on it")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple-testing corrections and ship decisions for online "
               "experiments"};
  app.set_version_flag("--version", std::string(multitest::library_version()));
  app.require_subcommand(1);

  cli::CommonOptions common;

  cli::AdjustOptions adjust;
  auto* c_adjust = app.add_subcommand("adjust", "Adjust a list of p-values");
  c_adjust->add_option("--input", adjust.input,
                       "File of p-values separated by whitespace or commas "
                       "('-' = stdin)");
  c_adjust->add_option("--method", adjust.method,
                       "none, bonferroni, holm, hochberg, hommel, bh, by");
  c_adjust->add_option("--alpha", adjust.alpha, "Rejection level");
  add_common(c_adjust, common);

  cli::DecideOptions decide;
  auto* c_decide =
      app.add_subcommand("decide", "Ship decision and CI report for one "
                                   "comparison; exit 0 ship, 1 no-ship");
  c_decide->add_option("spec", decide.spec, "Experiment spec JSON")
      ->required();
  c_decide->add_option("--method", decide.method, "Override the method set in the experiment file");
  c_decide->add_option("--family", decide.family,
                       "Override the family: success_only, naive, naive_nim");
  c_decide->add_option("--alpha", decide.alpha, "Override alpha");
  add_common(c_decide, common);

  cli::PlanOptions plan;
  auto* c_plan = app.add_subcommand("plan", "Per-variant sample size");
  c_plan->add_option("--config", plan.config, "Plan JSON instead of flags");
  c_plan->add_option("--alpha", plan.alpha, "Family-wise error rate");
  c_plan->add_option("--beta", plan.beta, "1 - target power");
  c_plan->add_option("--delta", plan.delta, "Minimum detectable effect");
  c_plan->add_option("--sigma", plan.sigma, "Per-observation SD");
  c_plan->add_option("--success", plan.success, "Number of success metrics");
  c_plan->add_option("--margin", plan.margins,
                     "Non-inferiority margin, one per guardrail");
  c_plan->add_option("--guardrail-beta-weights", plan.beta_weights,
                     "Split of beta across guardrails");
  c_plan->add_option("--expected-effect", plan.expected_effect,
                     "Expected true guardrail change");
  c_plan->add_option("--mde-label", plan.mde_label,
                     "How to describe delta in the statement");
  add_common(c_plan, common);

  cli::GstOptions gst;
  auto* c_gst =
      app.add_subcommand("gst", "Group-sequential boundaries per metric");
  c_gst->add_option("schedule", gst.schedule, "Schedule JSON")->required();
  c_gst->add_option("--check-paths", gst.check_paths,
                    "Monte Carlo paths to check crossing probabilities");
  add_common(c_gst, common);

  cli::SimulateOptions sim;
  auto* c_sim =
      app.add_subcommand("simulate", "Monte Carlo power and error rates");
  c_sim->add_option("--study", sim.study, "power, advantage or sparse")
      ->check(CLI::IsMember({"power", "advantage", "sparse"}));
  c_sim->add_option("--config", sim.config, "Power study JSON");
  c_sim->add_option("--reps", sim.reps, "Override replications");
  c_sim->add_option("--mode", sim.mode, "sufficient or raw");
  c_sim->add_option("--m", sim.m, "Sparse study: metric count");
  c_sim->add_option("--q", sim.q, "Sparse study: level");
  c_sim->add_option("--target-power", sim.target_power,
                    "Sparse study: uncorrected power of the non-null");
  c_sim->add_option("--method", sim.method, "Sparse study: method");
  c_sim->add_option("--delta", sim.delta, "Advantage study: effect size");
  add_common(c_sim, common);

  cli::VrOptions vr;
  auto* c_vr = app.add_subcommand(
      "vr", "Variance reduction and inter-metric correlation");
  c_vr->add_option("--config", vr.config, "Parameter JSON");
  c_vr->add_option("--gamma", vr.gamma, "Pre-period coefficient");
  c_vr->add_option("--gamma-b", vr.gamma_b,
                   "Second metric's coefficient (no closed form)");
  c_vr->add_option("--sigma0-sq", vr.sigma0_sq, "Pre-period variance");
  c_vr->add_option("--sigma-eps-sq", vr.sigma_eps_sq, "Residual variance");
  c_vr->add_option("--rho0", vr.rho0, "Pre-period correlation");
  c_vr->add_option("--rho-eps", vr.rho_eps, "Residual correlation");
  c_vr->add_option("--n", vr.n, "Simulated units (0 = closed form only)");
  add_common(c_vr, common);

  auto* c_corpus = app.add_subcommand("corpus", "Synthetic corpora");
  c_corpus->require_subcommand(1);
  cli::CorpusGenerateOptions gen;
  auto* c_gen =
      c_corpus->add_subcommand("generate", "Write a corpus as JSON lines");
  c_gen->add_option("--config", gen.config, "Corpus config JSON");
  c_gen->add_option("--n-experiments", gen.n_experiments, "Experiments");
  c_gen->add_option("--rollout-fraction", gen.rollout_fraction,
                    "Share of rollouts");
  c_gen->add_option("--null-fraction", gen.null_fraction,
                    "Share of null treatments");
  c_gen->add_option("--rho0", gen.rho0, "Pre-period correlation offset");
  c_gen->add_option("--rho-eps", gen.rho_eps, "Residual correlation offset");
  add_common(c_gen, common);

  cli::ReplayOptions rep;
  auto* c_rep = app.add_subcommand("replay", "Ship rates over a corpus");
  c_rep->add_option("corpus", rep.corpus, "Corpus JSON lines ('-' = stdin)");
  c_rep->add_option("--methods", rep.methods, "Methods to compare");
  c_rep->add_option("--family", rep.family,
                    "success_only, naive, naive_nim or crossed");
  c_rep->add_option("--alpha", rep.alpha, "Significance level");
  c_rep->add_option("--vr", rep.vr, "on, off or crossed")
      ->check(CLI::IsMember({"on", "off", "crossed"}));
  c_rep->add_flag("--score", rep.score,
                  "Split ships by truth labels (synthetic corpora)");
  add_common(c_rep, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitValidation;
  }

  try {
    cli::CommandResult result;
    if (c_adjust->parsed()) {
      result = cli::run_adjust(adjust, common);
    } else if (c_decide->parsed()) {
      result = cli::run_decide(decide, common);
    } else if (c_plan->parsed()) {
      result = cli::run_plan(plan, common);
    } else if (c_gst->parsed()) {
      result = cli::run_gst(gst, common);
    } else if (c_sim->parsed()) {
      result = cli::run_simulate(sim, common);
    } else if (c_vr->parsed()) {
      result = cli::run_vr(vr, common);
    } else if (c_gen->parsed()) {
      result = cli::run_corpus_generate(gen, common);
    } else if (c_rep->parsed()) {
      result = cli::run_replay(rep, common);
    }
    multitest::write_output(common.out, result.text);
    return result.exit_code;
  } catch (const multitest::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return cli::kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return cli::kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return cli::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitNumeric;
  }
}
