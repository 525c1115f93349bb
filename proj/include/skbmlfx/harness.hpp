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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "skbmlfx/channel.hpp"
#include "skbmlfx/data.hpp"
#include "skbmlfx/lossmodel.hpp"
#include "skbmlfx/planner.hpp"
#include "skbmlfx/skb.hpp"

namespace skbmlfx {

enum class SweepSide { kTx, kRx };

struct ExperimentConfig {
  SynthConfig synth;
  ChannelParams channel;
  std::size_t k = 8;
  double lambda_tx = 1.0;
  double lambda_rx = 1.0;
  // Receiver reuses the transmitter's trained extractor.
  bool shared_extractor = true;
  double tau = 0.0;  // <= 0: per trial, midway between all-level-2 and all-level-4 latency
  SkbSelection skb_tx = skb_selection::Full{};
  SkbSelection skb_rx = skb_selection::RandomK{7, 0};  // 7 of the 10 unseen classes
  std::vector<std::string> planners = {"level1", "level2",     "level3", "level4",
                                       "lp_relax", "lagrangian", "cccp",   "brute_force"};
  CccpOptions cccp;
  std::size_t brute_force_cap = 10;
  std::size_t trials = 50;
  std::uint64_t base_seed = 0;
  std::filesystem::path out_dir = "out";
  int workers = 0;  // 0: OpenMP default; SKBMLFX_WORKERS overrides
  bool record_wall_time = false;
  std::vector<SweepSide> sweep_sides = {SweepSide::kTx, SweepSide::kRx};
  std::vector<std::size_t> sweep_sizes = {2, 4, 6, 8, 10};
};

// Flat `section.key = value` lines; '#' starts a comment. Unknown keys and
// malformed values throw kConfigInvalid.
ExperimentConfig parse_config(std::string_view text);
// "default" names the built-in configuration; anything else is a file path.
ExperimentConfig load_config(const std::string& name_or_path);
void validate(const ExperimentConfig& cfg);
std::string to_text(const ExperimentConfig& cfg);

// Effective worker count: SKBMLFX_WORKERS if set, else cfg.workers.
int resolve_workers(const ExperimentConfig& cfg);

struct ExperimentRow {
  std::size_t trial = 0;
  std::string planner;
  double avg_loss = 0.0;
  double avg_latency_s = 0.0;
  double accuracy = 0.0;
  bool feasible = false;
  double wall_time_s = 0.0;
};

// Everything one trial needs before planning: the generated world, both
// parties and the menus of its test samples.
struct TrialSetup {
  GeneratedWorld world;
  std::shared_ptr<const ExtractorModel> tx_model;
  std::shared_ptr<const ExtractorModel> rx_model;
  double rate = 0.0;
};

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial);
TrialSetup prepare_trial(const ExperimentConfig& cfg, std::size_t trial);

struct TrialMenus {
  std::vector<SampleMenu> menus;
  Instance instance;
};

TrialMenus build_menus(const ExperimentConfig& cfg, const TrialSetup& setup, const SkbSelection& tx_sel,
                       const SkbSelection& rx_sel, std::uint64_t seed);

// Midpoint of the all-level-2 and all-level-4 average latencies.
double default_tau(const std::vector<SampleMenu>& menus);

// Fraction of samples whose effective decision at the assigned level is the
// true class.
double accuracy(const std::vector<SampleMenu>& menus, const Assignment& a, const std::vector<int>& labels);

PlannerReport run_planner(const std::string& name, const Instance& inst, const ExperimentConfig& cfg,
                          std::uint64_t seed);
bool is_known_planner(std::string_view name);

// One row per planner for a prepared trial.
std::vector<ExperimentRow> run_trial(const ExperimentConfig& cfg, std::size_t trial);

struct TradeoffResult {
  std::vector<ExperimentRow> rows;
  nlohmann::json summary;
};

// Trials run in parallel; rows come back ordered by (trial, planner order).
TradeoffResult run_tradeoff(const ExperimentConfig& cfg);

std::string tradeoff_csv(const std::vector<ExperimentRow>& rows, bool wall_time);

struct SweepTrialRow {
  SweepSide side = SweepSide::kTx;
  std::size_t size = 0;
  ExperimentRow row;
};

struct SweepRow {
  SweepSide side = SweepSide::kTx;
  std::size_t size = 0;
  std::string planner;
  std::size_t trials = 0;
  double mean_accuracy = 0.0;
  double mean_avg_loss = 0.0;
  double mean_avg_latency_s = 0.0;
  double feasible_fraction = 0.0;
};

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided, t approximation with n - 2 degrees of freedom
  std::size_t n = 0;
};

// Rank correlation with average ranks for ties.
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y);

struct SweepResult {
  SweepSide side = SweepSide::kTx;
  std::vector<SweepTrialRow> trial_rows;
  std::vector<SweepRow> rows;
  nlohmann::json summary;
};

// Varies one party's SKB through `sizes` (random subsets, nested across
// sizes within a trial) while the other party keeps the full SKB. Each
// trial trains once and reuses its world across sizes.
SweepResult run_skb_sweep(const ExperimentConfig& cfg, SweepSide side, const std::vector<std::size_t>& sizes);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_trials_csv(const std::vector<SweepTrialRow>& rows);

std::string_view to_string(SweepSide side);

// Writes tradeoff.csv and summary.json under cfg.out_dir.
void write_tradeoff(const ExperimentConfig& cfg, const TradeoffResult& result);
// Writes sweep_<side>.csv, sweep_<side>_trials.csv and sweep_summary.json.
void write_sweeps(const ExperimentConfig& cfg, const std::vector<SweepResult>& results);

// Quick invariant checks; prints one line per check and returns whether all
// passed.
bool run_selftest(std::ostream& out);

}  // namespace skbmlfx
