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

// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed
// here and never read from the environment. Exit status is the number of
// failed criteria (0 = all passed).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "multitest/adjust.hpp"
#include "multitest/corpus.hpp"
#include "multitest/io.hpp"
#include "multitest/normal.hpp"
#include "multitest/planning.hpp"
#include "multitest/sequential.hpp"
#include "multitest/sim_engine.hpp"
#include "multitest/vr_model.hpp"
#include "oracles.hpp"

#if !defined(MULTITEST_CLI) || !defined(MULTITEST_TEST_DATA)
#error "MULTITEST_CLI and MULTITEST_TEST_DATA must be defined"
#endif

namespace mt = multitest;
using mt::AdjustMethod;

namespace {

constexpr std::uint64_t kSeed = 20240611;

std::string data(const std::string& name) {
  return std::string(MULTITEST_TEST_DATA) + "/" + name;
}

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [x] " << what << ";";
    } else {
      detail << " " << what << ";";
    }
  }
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::int64_t g_disagreements = 0;
std::int64_t g_studies = 0;

mt::PowerTable study(const std::string& file) {
  mt::SimConfig cfg = mt::parse_sim_config(mt::load_json(data(file)));
  cfg.seed = kSeed;
  cfg.workers = 0;
  auto t = mt::run_power_study(cfg);
  g_disagreements += t.holm_bonferroni_disagreements;
  ++g_studies;
  return t;
}

bool within(double v, double target, double tol) {
  return std::fabs(v - target) <= tol;
}

// 1. Holm = closed Bonferroni testing, Hommel = closed Simes testing.
void criterion_oracle_equivalence(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(kSeed);
  int holm_bad = 0, hommel_bad = 0, total = 0;
  for (int m = 2; m <= 8; ++m) {
    for (int i = 0; i < 1000; ++i) {
      const auto p = oracle::random_pvalues(gen, m);
      holm_bad += mt::reject_set(mt::adjust(p, AdjustMethod::kHolm), 0.05) !=
                  oracle::closed_testing(p, 0.05, oracle::bonferroni_local);
      hommel_bad +=
          mt::reject_set(mt::adjust(p, AdjustMethod::kHommel), 0.05) !=
          oracle::closed_testing(p, 0.05, oracle::simes_local);
      ++total;
    }
  }
  const double secs = seconds_since(t0);
  v.check(holm_bad == 0, "holm mismatches " + std::to_string(holm_bad) +
                             "/" + std::to_string(total));
  v.check(hommel_bad == 0, "hommel mismatches " +
                               std::to_string(hommel_bad) + "/" +
                               std::to_string(total));
  v.check(secs < 60.0, "runtime " + fmt(secs, 3) + "s < 60s");
}

// 2. Element-wise dominance chains.
void criterion_dominance(Verdict& v) {
  std::mt19937_64 gen(kSeed + 1);
  std::uniform_int_distribution<int> mm(1, 20);
  int violations = 0;
  const double eps = 1e-12;
  for (int i = 0; i < 10000; ++i) {
    const auto p = oracle::random_pvalues(gen, mm(gen));
    const auto a = [&](AdjustMethod m) { return mt::adjust(p, m).adjusted; };
    const auto bon = a(AdjustMethod::kBonferroni), holm = a(AdjustMethod::kHolm),
               hoch = a(AdjustMethod::kHochberg),
               hom = a(AdjustMethod::kHommel), bh = a(AdjustMethod::kBH),
               by = a(AdjustMethod::kBY);
    for (std::size_t j = 0; j < p.size(); ++j) {
      violations += bon[j] + eps < holm[j];
      violations += holm[j] + eps < hoch[j];
      violations += hoch[j] + eps < hom[j];
      violations += holm[j] + eps < bh[j];
      violations += by[j] + eps < bh[j];
    }
  }
  v.check(violations == 0,
          "violations " + std::to_string(violations) + " over 10000 vectors");
}

// 3. Independent metrics.
void criterion_table2(Verdict& v) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto t = study("table2.json");
  const double secs = seconds_since(t0);
  const struct {
    AdjustMethod m;
    double delta, target, tol;
    bool fwer;
  } cells[] = {
      {AdjustMethod::kBonferroni, 0.05, 0.303, 0.02, false},
      {AdjustMethod::kBonferroni, 0.10, 0.783, 0.02, false},
      {AdjustMethod::kBonferroni, 0.15, 0.991, 0.02, false},
      {AdjustMethod::kNone, 0.0, 0.340, 0.015, true},
      {AdjustMethod::kBH, 0.10, 0.830, 0.02, false},
  };
  for (const auto& c : cells) {
    const auto& cell = t.cell(c.m, c.delta);
    const double got = c.fwer ? cell.fwer() : cell.power();
    v.check(within(got, c.target, c.tol),
            std::string(mt::to_string(c.m)) + "@" + fmt(c.delta, 2) + " " +
                fmt(got) + " vs " + fmt(c.target, 3) + "+-" + fmt(c.tol, 3));
  }
  v.check(secs < 300.0, "runtime " + fmt(secs, 3) + "s < 300s");
}

// 4. Equicorrelated metrics, rho = 0.95.
void criterion_table3(Verdict& v) {
  const auto t = study("table3.json");
  const double bon = t.cell(AdjustMethod::kBonferroni, 0.10).power();
  const double bh = t.cell(AdjustMethod::kBH, 0.10).power();
  const double bon0 = t.cell(AdjustMethod::kBonferroni, 0.0).fwer();
  const double bh0 = t.cell(AdjustMethod::kBH, 0.0).fwer();
  v.check(within(bon, 0.266, 0.02), "bonferroni@0.10 " + fmt(bon) +
                                        " vs 0.266+-0.02");
  v.check(within(bh, 0.396, 0.02), "bh@0.10 " + fmt(bh) + " vs 0.396+-0.02");
  v.check(bon0 <= 0.05, "bonferroni fwer@0 " + fmt(bon0) + " <= 0.05");
  v.check(bh0 >= 0.02 && bh0 <= 0.05,
          "bh fwer@0 " + fmt(bh0) + " in [0.02, 0.05]");
}

// 5. Advantage over Bonferroni by number of non-nulls and correlation.
void criterion_table6(Verdict& v) {
  mt::AdvantageConfig cfg;
  cfg.seed = kSeed;
  cfg.workers = 0;
  cfg.ks = {1, 8};
  const auto rows = mt::advantage_table(cfg);
  for (const auto& r : rows) {
    const double pp = 100.0 * r.advantage;
    if (r.k == 1) {
      v.check(pp >= 0.0 && pp <= 1.0,
              "k=1 " + r.corr + " " + std::string(mt::to_string(r.method)) +
                  " +" + fmt(pp, 3) + "pp <= 1pp");
    } else if (r.k == 8 && r.method == AdjustMethod::kBH &&
               r.corr != "independent") {
      v.check(within(pp, 13.1, 2.0),
              "k=8 " + r.corr + " bh +" + fmt(pp, 3) + "pp vs 13.1+-2");
    }
  }
  const auto block = study("table_block.json");
  const double b = block.cell(AdjustMethod::kBonferroni, 0.10).power();
  v.check(within(b, 0.653, 0.02),
          "block bonferroni@0.10 " + fmt(b) + " vs 0.653+-0.02");
}

// 6. Holm rejects something exactly when Bonferroni does.
void criterion_disjunctive_identity(Verdict& v) {
  v.check(g_disagreements == 0,
          "replications where holm and bonferroni differ: " +
              std::to_string(g_disagreements) + " across " +
              std::to_string(g_studies) + " studies");
}

// 7. BH in the sparse regime.
void criterion_sparse(Verdict& v) {
  for (int m : {10, 100}) {
    const auto bh =
        mt::sparse_regime_fwer(m, 0.05, 0.95, 20000, kSeed, AdjustMethod::kBH,
                               0);
    v.check(bh.fwer() >= 0.07 && bh.fwer() <= 0.11,
            "bh m=" + std::to_string(m) + " fwer " + fmt(bh.fwer()) +
                " in [0.07, 0.11]");
    const auto bon = mt::sparse_regime_fwer(
        m, 0.05, 0.95, 20000, kSeed, AdjustMethod::kBonferroni, 0);
    const double lim = 0.05 + 3 * bon.fwer_se();
    v.check(bon.fwer() <= lim, "bonferroni m=" + std::to_string(m) + " " +
                                   fmt(bon.fwer()) + " <= " + fmt(lim));
  }
}

// 8. Sample size formula.
void criterion_sample_size(Verdict& v) {
  mt::PlanInputs p;
  p.alpha = 0.05;
  p.beta = 0.2;
  p.sigma = 1.0;
  p.delta = 0.1;
  p.success_count = 1;
  const auto n1 = mt::sample_size_success(p).per_variant;
  p.success_count = 2;
  const auto n2 = mt::sample_size_success(p).per_variant;
  v.check(n1 == 1570, "S=1 n=" + std::to_string(n1));
  v.check(n2 == 1901, "S=2 n=" + std::to_string(n2));
  double worst = 0.0;
  for (double q = 1e-10; q < 1.0; q = q < 0.01 ? q * 3 : q + 0.01) {
    worst = std::max(worst,
                     std::fabs(mt::norm_quantile(q) - oracle::norm_quantile(q)));
  }
  v.check(worst <= 1e-9, "max quantile error " + fmt(worst, 3));
}

// 9. Group-sequential boundaries.
void criterion_gst(Verdict& v) {
  const char* files[] = {"gst_obf.json", "gst_pocock.json",
                         "gst_one_sided.json", "gst_two_metric.json"};
  int mc_bad = 0, dom_bad = 0, checked = 0;
  std::uint64_t stream = 0;
  for (const char* f : files) {
    const auto doc = mt::parse_gst_document(mt::load_json(data(f)));
    const auto bounds = mt::multi_metric_sequential(
        doc.schedules, doc.alpha, doc.success_count, doc.grid);
    for (std::size_t i = 0; i < bounds.size(); ++i) {
      const auto& b = bounds[i];
      const auto mc = mt::sequential_crossing_mc(b, 100000, kSeed + stream++,
                                                 0);
      for (std::size_t k = 0; k < b.z_bounds.size(); ++k) {
        ++checked;
        const double se = std::sqrt(b.cumulative_spend[k] *
                                    (1 - b.cumulative_spend[k]) / 100000.0);
        mc_bad += std::fabs(mc.cumulative[k] - b.cumulative_spend[k]) >
                  3 * se;
      }
      const auto bot =
          mt::bonferroni_over_time(b.schedule, doc.schedules[i].spending);
      for (std::size_t k = 0; k < b.z_bounds.size(); ++k) {
        dom_bad += bot.z_bounds[k] < b.z_bounds[k];
      }
    }
    if (std::string(f) == "gst_two_metric.json") {
      const auto comp = mt::composition_fwer_mc(bounds, 0.0, 20000, kSeed, 0);
      const double lim = doc.alpha + 3 * comp.fwer_se();
      v.check(comp.fwer() <= lim, "two-metric fwer " + fmt(comp.fwer()) +
                                      " <= " + fmt(lim));
    }
  }
  v.check(mc_bad == 0, "looks outside 3 MC-SE: " + std::to_string(mc_bad) +
                           "/" + std::to_string(checked));
  v.check(dom_bad == 0,
          "bonferroni-over-time below recursion: " + std::to_string(dom_bad));
}

// 10. Closed-form unadjusted correlation against simulation.
void criterion_vr(Verdict& v) {
  std::mt19937_64 gen(kSeed + 10);
  std::uniform_real_distribution<double> g(0.2, 1.5), var(0.3, 2.0),
      rho(-0.8, 0.8);
  double worst = 0.0;
  int sign_bad = 0;
  for (int i = 0; i < 100; ++i) {
    mt::VrDgpParams p;
    p.gamma = g(gen);
    p.sigma0_sq = var(gen);
    p.sigma_eps_sq = var(gen);
    p.rho0 = rho(gen);
    p.rho_eps = rho(gen);
    mt::RngStream rng(kSeed, static_cast<std::uint64_t>(i));
    const auto sim = mt::simulate_dgp(p, 100000, rng);
    worst = std::max(worst, std::fabs(sim.raw_corr - mt::unadjusted_corr(p)));
    const bool mc_decorrelates = sim.raw_corr > sim.residual_corr;
    sign_bad += mc_decorrelates != (p.rho_eps < p.rho0);
  }
  v.check(worst <= 0.02, "max |closed - MC| " + fmt(worst, 3) + " <= 0.02");
  v.check(sign_bad == 0,
          "sign disagreements " + std::to_string(sign_bad) + "/100");
}

// 11. Replay properties on default synthetic corpora.
void criterion_replay(Verdict& v) {
  mt::CorpusConfig cfg = mt::parse_corpus_config(
      mt::load_json(data("corpus_default.json")));
  cfg.seed = kSeed;
  cfg.workers = 0;
  const auto corpus = mt::generate_corpus(cfg);

  mt::ReplayConfig so;
  so.workers = 0;
  const auto r_so = mt::replay(corpus, so);
  mt::ReplayConfig nv = so;
  nv.family_mode = mt::FamilyMode::kNaive;
  const auto r_nv = mt::replay(corpus, nv);

  const auto& bon = r_so.method(AdjustMethod::kBonferroni).outcome;
  const auto& holm = r_so.method(AdjustMethod::kHolm).outcome;
  int superset_bad = 0;
  for (std::size_t i = 0; i < bon.size(); ++i) {
    superset_bad += bon[i] != mt::ShipKind::kNoShip &&
                    holm[i] == mt::ShipKind::kNoShip;
  }
  v.check(superset_bad == 0, "(i) records shipped by bonferroni but not "
                             "holm: " + std::to_string(superset_bad));

  const auto gap = [](const mt::ReplayResult& r) {
    return 100.0 * (r.method(AdjustMethod::kHolm).ships -
                    r.method(AdjustMethod::kBonferroni).ships) /
           static_cast<double>(r.n_records);
  };
  v.check(gap(r_so) > gap(r_nv), "(ii) holm gap success_only " +
                                     fmt(gap(r_so)) + "pp > naive " +
                                     fmt(gap(r_nv)) + "pp");

  for (const auto& row : mt::vr_crossed_replay(corpus, so)) {
    if (row.method != AdjustMethod::kHolm &&
        row.method != AdjustMethod::kHommel && row.method != AdjustMethod::kBH) {
      continue;
    }
    v.check(*row.gap_delta <= 0.0,
            "(iii) rho_eps<rho0 " + std::string(mt::to_string(row.method)) +
                " delta " + fmt(*row.gap_delta, 3) + "pp (se " +
                fmt(*row.gap_delta_se, 2) + ") <= 0");
  }
  mt::CorpusConfig eq = mt::parse_corpus_config(
      mt::load_json(data("corpus_equal_corr.json")));
  eq.seed = kSeed;
  eq.workers = 0;
  for (const auto& row : mt::vr_crossed_replay(mt::generate_corpus(eq), so)) {
    if (!row.gap_delta) continue;
    const double lim = 3 * *row.gap_delta_se;
    v.check(std::fabs(*row.gap_delta) <= lim,
            "(iii) rho_eps=rho0 " + std::string(mt::to_string(row.method)) +
                " |delta| " + fmt(std::fabs(*row.gap_delta), 3) + " <= " +
                fmt(lim, 3));
  }

  const auto scores = mt::score_corpus(r_so);
  double fs_bh = 0.0, fs_bon = 0.0;
  for (const auto& s : scores) {
    if (s.method == AdjustMethod::kBH) fs_bh = s.false_ship_rate;
    if (s.method == AdjustMethod::kBonferroni) fs_bon = s.false_ship_rate;
  }
  v.check(fs_bh >= fs_bon, "(iv) false-ship bh " + fmt(100 * fs_bh) +
                               "% >= bonferroni " + fmt(100 * fs_bon) + "%");
}

// 12. Byte-identical CLI output across runs and worker counts.
std::string capture(const std::string& args, int* code) {
  const std::string cmd = std::string(MULTITEST_CLI) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    out.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

void criterion_determinism(Verdict& v) {
  const auto dir =
      std::filesystem::temp_directory_path() / "multitest_acceptance";
  std::filesystem::create_directories(dir);
  const std::string corpus = (dir / "corpus.jsonl").string();
  const std::string pfile = (dir / "p.txt").string();
  {
    FILE* f = std::fopen(pfile.c_str(), "w");
    std::fputs("0.011 0.026 0.038 0.041 0.2 0.6\n", f);
    std::fclose(f);
  }
  int code = 0;
  capture("corpus generate --n-experiments 500 --seed 3 --out " + corpus,
          &code);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"adjust", "adjust --method hommel --seed 3 --input " + pfile},
      {"decide", "decide --seed 3 " + data("decide_ship.json")},
      {"plan", "plan --seed 3 --config " + data("plan_single.json")},
      {"gst", "gst --seed 3 --check-paths 20000 " + data("gst_two_metric.json")},
      {"simulate power",
       "simulate --seed 3 --reps 2000 --config " + data("table3.json")},
      {"simulate advantage", "simulate --study advantage --seed 3 --reps 1000"},
      {"simulate sparse", "simulate --study sparse --m 10 --seed 3 --reps 4000"},
      {"vr", "vr --seed 3 --n 20000 --rho0 0.5"},
      {"corpus generate", "corpus generate --n-experiments 300 --seed 3"},
      {"replay", "replay --seed 3 --vr crossed --score " + corpus},
  };
  int bad = 0;
  std::string failed;
  for (const auto& [name, args] : commands) {
    int c1 = 0, c2 = 0, c3 = 0;
    const std::string a = capture(args + " --workers 1", &c1);
    const std::string b = capture(args + " --workers 1", &c2);
    const std::string c = capture(args + " --workers 4", &c3);
    const bool ok = c1 <= 1 && c1 == c2 && c1 == c3 && a == b && a == c &&
                    !a.empty();
    if (!ok) {
      ++bad;
      failed += " " + name;
    }
  }
  v.check(bad == 0, std::to_string(commands.size() - bad) + "/" +
                        std::to_string(commands.size()) +
                        " commands byte-identical" +
                        (bad ? " (differs:" + failed + ")" : ""));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>>
      criteria = {
          {"Oracle equivalence (holm/hommel vs closed testing)",
           criterion_oracle_equivalence},
          {"Dominance chains", criterion_dominance},
          {"Independent-metric power/FWER (rho=0)", criterion_table2},
          {"Equicorrelated power/FWER (rho=0.95)", criterion_table3},
          {"Advantage over bonferroni and block structure",
           criterion_table6},
          {"Holm/bonferroni disjunctive identity",
           criterion_disjunctive_identity},
          {"Sparse-regime BH FWER", criterion_sparse},
          {"Sample-size formula exactness", criterion_sample_size},
          {"Group-sequential correctness", criterion_gst},
          {"Variance-reduction correlation model", criterion_vr},
          {"Replay properties on synthetic corpora", criterion_replay},
          {"CLI determinism", criterion_determinism},
      };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(v);
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". "
              << criteria[i].first << " (" << fmt(seconds_since(t0), 3)
              << "s):" << v.detail.str() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed;
}
