// Copyright 2026 The skbmlfx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "skbmlfx/error.hpp"
#include "skbmlfx/harness.hpp"

using namespace skbmlfx;
namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.synth.c_total = 20;
  cfg.synth.c_seen_tx = 14;
  cfg.synth.c_seen_rx = 14;
  cfg.synth.d_v = 16;
  cfg.synth.d_s = 8;
  cfg.synth.n_per_class = 8;
  cfg.synth.m_test = 8;
  cfg.k = 4;
  cfg.skb_rx = skb_selection::RandomK{4, 0};
  cfg.cccp.restarts = 16;
  cfg.trials = 3;
  cfg.sweep_sizes = {2, 4, 6};
  return cfg;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return Errc::kInvalidArgument;
}

// Two-sided Student t tail for three degrees of freedom, closed form.
double t3_two_sided(double t) {
  const double u = t / std::sqrt(3.0);
  const double cdf = 0.5 + (u / (1.0 + u * u) + std::atan(u)) / std::numbers::pi;
  return 2.0 * (1.0 - cdf);
}

SampleMenu menu_with(int d1, int d2, int d3, int tx) {
  SampleMenu m;
  m.decisions = {d1, d2, d3, tx};
  m.tx_estimate = tx;
  m.latencies = {4.0, 2.0, 3.0, 1.0};
  return m;
}

}  // namespace

TEST_CASE("config text parses keys, comments and lists") {
  const auto cfg = parse_config(R"(
# experiment
synth.m_test = 12   # samples
synth.noise_sigma = 0.1
extractor.k = 6
extractor.shared = false
plan.tau = auto
plan.planners = cccp, level4
skb.rx = first:5
sweep.sides = rx
sweep.sizes = 1,3,5
run.trials = 7
run.seed = 99
cccp.restarts = 12
)");
  CHECK(cfg.synth.m_test == 12);
  CHECK(cfg.synth.noise_sigma == 0.1);
  CHECK(cfg.k == 6);
  CHECK_FALSE(cfg.shared_extractor);
  CHECK(cfg.tau == 0.0);
  CHECK(cfg.planners == std::vector<std::string>{"cccp", "level4"});
  CHECK(to_string(cfg.skb_rx) == "first:5");
  CHECK(cfg.sweep_sides == std::vector<SweepSide>{SweepSide::kRx});
  CHECK(cfg.sweep_sizes == std::vector<std::size_t>{1, 3, 5});
  CHECK(cfg.trials == 7);
  CHECK(cfg.base_seed == 99);
  CHECK(cfg.cccp.restarts == 12);
  CHECK(parse_config("plan.tau = 0.25").tau == 0.25);
}

TEST_CASE("config text round trip") {
  const auto cfg = small_config();
  const auto text = to_text(cfg);
  CHECK(to_text(parse_config(text)) == text);
  CHECK(to_text(load_config("default")) == to_text(ExperimentConfig{}));
}

TEST_CASE("config errors") {
  for (const char* bad : {"synth.m_test", "nope.key = 1", "run.trials = -3", "run.trials = 0", "extractor.k = 2.5",
                          "plan.planners = cccp, simplex", "plan.planners = ", "skb.tx = first:11",
                          "sweep.sizes = 0,2", "sweep.sides = up", "extractor.shared = maybe",
                          "cccp.gamma_growth = 1", "synth.c_seen_tx = 50", "extractor.lambda_tx = 0"}) {
    CAPTURE(bad);
    CHECK(code_of([&] { parse_config(bad); }) == Errc::kConfigInvalid);
  }
  CHECK(code_of([] { load_config("/nonexistent/skbmlfx.cfg"); }) == Errc::kIoFailure);
}

TEST_CASE("worker count from the environment") {
  ExperimentConfig cfg;
  cfg.workers = 3;
  ::unsetenv("SKBMLFX_WORKERS");
  CHECK(resolve_workers(cfg) == 3);
  ::setenv("SKBMLFX_WORKERS", "2", 1);
  CHECK(resolve_workers(cfg) == 2);
  ::setenv("SKBMLFX_WORKERS", "many", 1);
  CHECK_THROWS_AS(resolve_workers(cfg), Error);
  ::unsetenv("SKBMLFX_WORKERS");
}

TEST_CASE("spearman against hand values") {
  const auto r = spearman({1, 2, 3, 4, 5}, {2, 1, 4, 3, 5});
  CHECK(r.rho == doctest::Approx(0.8).epsilon(1e-12));
  const double t = 0.8 * std::sqrt(3.0 / (1.0 - 0.64));
  CHECK(r.p_value == doctest::Approx(t3_two_sided(t)).epsilon(1e-10));
  CHECK(r.n == 5);

  // Ties take average ranks: x ranks (1, 2.5, 2.5, 4).
  const auto tied = spearman({1, 2, 2, 3}, {1, 2, 3, 4});
  const double expect = 4.5 / std::sqrt(4.5 * 5.0);
  CHECK(tied.rho == doctest::Approx(expect).epsilon(1e-12));

  CHECK(spearman({1, 2, 3}, {3, 2, 1}).rho == doctest::Approx(-1.0));
  CHECK(spearman({1, 1, 1, 1}, {1, 2, 3, 4}).rho == 0.0);
  CHECK(spearman({1, 1, 1, 1}, {1, 2, 3, 4}).p_value == 1.0);
  CHECK_THROWS_AS(spearman({1, 2}, {1}), Error);
}

TEST_CASE("accuracy and default budget") {
  const std::vector<SampleMenu> menus = {menu_with(1, 1, 1, 2), menu_with(3, 3, 4, 3), menu_with(5, 5, 5, 5)};
  const std::vector<int> labels = {2, 3, 5};
  CHECK(accuracy(menus, Assignment({3, 0, 2}), labels) == 1.0);
  CHECK(accuracy(menus, Assignment({0, 2, 1}), labels) == doctest::Approx(1.0 / 3.0));
  CHECK(accuracy(menus, Assignment::uniform(3, 0), labels) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(accuracy(menus, Assignment({0, 0}), labels), Error);
  CHECK(default_tau(menus) == doctest::Approx(1.5));
}

TEST_CASE("planner names") {
  for (const char* name : {"level1", "level4", "lp_relax", "lagrangian", "cccp", "brute_force"}) {
    CHECK(is_known_planner(name));
  }
  CHECK_FALSE(is_known_planner("level5"));
  CHECK_FALSE(is_known_planner("simplex"));
}

TEST_CASE("a trial under full knowledge and shared models") {
  auto cfg = small_config();
  cfg.skb_rx = skb_selection::Full{};
  const auto rows = run_trial(cfg, 0);
  REQUIRE(rows.size() == cfg.planners.size());
  double acc1 = -1.0;
  for (const auto& row : rows) {
    CHECK(row.accuracy >= 0.0);
    CHECK(row.accuracy <= 1.0);
    if (row.planner == "level1") acc1 = row.accuracy;
  }
  for (const auto& row : rows) {
    if (row.planner == "level2" || row.planner == "level3") CHECK(row.accuracy == acc1);
  }
}

TEST_CASE("reported losses match recomputation") {
  const auto cfg = small_config();
  const auto setup = prepare_trial(cfg, 1);
  const auto seed = trial_seed(cfg, 1);
  const auto tm = build_menus(cfg, setup, cfg.skb_tx, cfg.skb_rx, seed);
  CHECK(tm.instance.m() == cfg.synth.m_test);
  CHECK(tm.instance.tau() == doctest::Approx(default_tau(tm.menus)));
  for (const auto& name : cfg.planners) {
    const auto report = run_planner(name, tm.instance, cfg, seed);
    const auto again = evaluate(tm.instance, report.assignment);
    CHECK(std::abs(report.avg_loss - again.avg_loss) <= 1e-9);
    if (!name.starts_with("level")) CHECK(report.feasible);
  }
  CHECK_THROWS_AS(run_planner("simplex", tm.instance, cfg, seed), Error);
}

TEST_CASE("tradeoff output is deterministic and worker independent") {
  auto cfg = small_config();
  cfg.workers = 1;
  const auto a = run_tradeoff(cfg);
  const auto b = run_tradeoff(cfg);
  cfg.workers = 2;
  const auto c = run_tradeoff(cfg);
  const auto csv = tradeoff_csv(a.rows, false);
  CHECK(csv == tradeoff_csv(b.rows, false));
  CHECK(csv == tradeoff_csv(c.rows, false));
  CHECK(a.summary.dump() == c.summary.dump());
  CHECK(csv.starts_with("trial,planner,avg_loss,avg_latency_s,accuracy,feasible\n"));
  CHECK(tradeoff_csv(a.rows, true).starts_with("trial,planner,avg_loss,avg_latency_s,accuracy,feasible,wall_time_s\n"));
  CHECK(a.rows.size() == cfg.trials * cfg.planners.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].trial == i / cfg.planners.size());
    CHECK(a.rows[i].planner == cfg.planners[i % cfg.planners.size()]);
  }
  CHECK(a.summary.at("planners").contains("cccp"));
  CHECK(a.summary.at("cccp_vs_fixed_levels").at("trials") == cfg.trials);
}

TEST_CASE("brute force is skipped above the cap") {
  auto cfg = small_config();
  cfg.trials = 1;
  cfg.brute_force_cap = 4;
  const auto rows = run_trial(cfg, 0);
  for (const auto& row : rows) CHECK(row.planner != "brute_force");
  CHECK(rows.size() == cfg.planners.size() - 1);
}

TEST_CASE("sweep at the maximal size equals full knowledge") {
  auto cfg = small_config();
  cfg.skb_rx = skb_selection::Full{};
  cfg.planners = {"level4", "cccp"};
  const auto full = run_tradeoff(cfg);
  for (const auto side : {SweepSide::kTx, SweepSide::kRx}) {
    const auto sweep = run_skb_sweep(cfg, side, {6});
    REQUIRE(sweep.trial_rows.size() == full.rows.size());
    for (std::size_t i = 0; i < full.rows.size(); ++i) {
      CHECK(sweep.trial_rows[i].row.accuracy == full.rows[i].accuracy);
      CHECK(sweep.trial_rows[i].row.avg_loss == full.rows[i].avg_loss);
    }
  }
}

TEST_CASE("sweep rows and csv") {
  auto cfg = small_config();
  cfg.planners = {"level2", "level4", "cccp"};
  const auto a = run_skb_sweep(cfg, SweepSide::kRx, cfg.sweep_sizes);
  const auto b = run_skb_sweep(cfg, SweepSide::kRx, cfg.sweep_sizes);
  CHECK(sweep_csv(a.rows) == sweep_csv(b.rows));
  CHECK(sweep_trials_csv(a.trial_rows) == sweep_trials_csv(b.trial_rows));
  CHECK(a.rows.size() == cfg.sweep_sizes.size() * cfg.planners.size());
  CHECK(sweep_csv(a.rows).starts_with(
      "side,size,planner,trials,mean_accuracy,mean_avg_loss,mean_avg_latency_s,feasible_fraction\n"));
  CHECK(sweep_trials_csv(a.trial_rows).starts_with("side,size,trial,planner,avg_loss,avg_latency_s,accuracy,feasible\n"));
  for (const auto& row : a.rows) {
    CHECK(row.side == SweepSide::kRx);
    CHECK(row.trials == cfg.trials);
    CHECK(row.mean_accuracy >= 0.0);
    CHECK(row.mean_accuracy <= 1.0);
  }
  CHECK(a.summary.at("accuracy_trend").contains("cccp"));
  CHECK(code_of([&] { run_skb_sweep(cfg, SweepSide::kTx, {7}); }) == Errc::kConfigInvalid);
  CHECK(code_of([&] { run_skb_sweep(cfg, SweepSide::kTx, {}); }) == Errc::kConfigInvalid);
}

TEST_CASE("result files") {
  auto cfg = small_config();
  cfg.trials = 1;
  cfg.planners = {"level4", "cccp"};
  cfg.out_dir = fs::temp_directory_path() / ("skbmlfx_harness_" + std::to_string(std::random_device{}()));
  write_tradeoff(cfg, run_tradeoff(cfg));
  write_sweeps(cfg, {run_skb_sweep(cfg, SweepSide::kTx, {2, 6})});
  for (const char* name : {"tradeoff.csv", "summary.json", "sweep_tx.csv", "sweep_tx_trials.csv", "sweep_summary.json"}) {
    CHECK(fs::exists(cfg.out_dir / name));
  }
  std::ifstream in(cfg.out_dir / "tradeoff.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "trial,planner,avg_loss,avg_latency_s,accuracy,feasible");
  fs::remove_all(cfg.out_dir);
}

TEST_CASE("selftest passes") {
  std::ostringstream out;
  CHECK(run_selftest(out));
  CHECK(out.str().find("FAIL") == std::string::npos);
}
