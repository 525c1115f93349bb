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

// Command-line front end: data generation, training, planning, the tradeoff
// and SKB sweep experiments, the brute-force oracle and a self test.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skbmlfx/data.hpp"
#include "skbmlfx/error.hpp"
#include "skbmlfx/extractor.hpp"
#include "skbmlfx/harness.hpp"
#include "skbmlfx/io.hpp"
#include "skbmlfx/planner.hpp"
#include "skbmlfx/random.hpp"

namespace {

using namespace skbmlfx;

struct CommonOptions {
  std::string config = "default";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> trials;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "Config file, or 'default' for the built-in one");
  cmd->add_option("--seed", opts.seed, "Base seed (overrides run.seed)");
  cmd->add_option("--out", opts.out, "Output directory (overrides run.out_dir)");
  cmd->add_option("--trials", opts.trials, "Trial count (overrides run.trials)");
}

ExperimentConfig resolve(const CommonOptions& opts) {
  auto cfg = load_config(opts.config);
  if (opts.seed) cfg.base_seed = *opts.seed;
  if (opts.out) cfg.out_dir = *opts.out;
  if (opts.trials) cfg.trials = *opts.trials;
  validate(cfg);
  return cfg;
}

int gen_data(const CommonOptions& opts) {
  const auto cfg = resolve(opts);
  SynthConfig synth = cfg.synth;
  synth.k_hint = cfg.k;
  synth.seed = cfg.base_seed;
  const auto world = generate(synth);
  io::save_prototypes(cfg.out_dir / "prototypes.csv", *world.prototypes);
  io::save_features(cfg.out_dir / "tx_train.csv", world.tx_train);
  io::save_features(cfg.out_dir / "rx_train.csv", world.rx_train);
  io::write_feature_table(cfg.out_dir / "test.csv", world.test_visual, world.test_labels, synth.d_s);
  std::cout << "wrote prototypes.csv, tx_train.csv, rx_train.csv, test.csv to " << cfg.out_dir.string() << '\n';
  return 0;
}

int train(const std::string& features, const std::string& prototypes, std::size_t k, double lambda,
          const std::string& out) {
  const auto protos = io::load_prototypes(prototypes);
  const auto set = io::load_features(features, protos);
  const auto model = train_extractor(set, k, lambda);
  io::write_text(out, io::to_json(model).dump(2) + '\n');
  std::cout << "wrote " << out << '\n';
  return 0;
}

int plan(const std::string& instance_path, const std::string& planner, std::uint64_t seed,
         const std::optional<std::string>& out) {
  const auto inst = io::load_instance(instance_path);
  ExperimentConfig cfg;
  if (!is_known_planner(planner)) throw Error(Errc::kInvalidArgument, "unknown planner '" + planner + "'");
  const auto report = run_planner(planner, inst, cfg, seed);
  const auto text = io::to_json(report).dump(2) + '\n';
  if (out) {
    io::write_text(*out, text);
  } else {
    std::cout << text;
  }
  return 0;
}

int tradeoff(const CommonOptions& opts) {
  const auto cfg = resolve(opts);
  const auto result = run_tradeoff(cfg);
  write_tradeoff(cfg, result);
  std::cout << "wrote " << (cfg.out_dir / "tradeoff.csv").string() << " and summary.json (" << result.rows.size()
            << " rows)\n";
  return 0;
}

int sweep(const CommonOptions& opts, const std::string& side, const std::vector<std::size_t>& sizes) {
  auto cfg = resolve(opts);
  if (!sizes.empty()) cfg.sweep_sizes = sizes;
  if (side == "tx") {
    cfg.sweep_sides = {SweepSide::kTx};
  } else if (side == "rx") {
    cfg.sweep_sides = {SweepSide::kRx};
  } else if (side != "both") {
    throw Error(Errc::kInvalidArgument, "--side must be tx, rx or both");
  }
  validate(cfg);
  std::vector<SweepResult> results;
  for (const auto s : cfg.sweep_sides) results.push_back(run_skb_sweep(cfg, s, cfg.sweep_sizes));
  write_sweeps(cfg, results);
  for (const auto& r : results) {
    std::cout << "wrote " << (cfg.out_dir / ("sweep_" + std::string(to_string(r.side)) + ".csv")).string() << '\n';
  }
  return 0;
}

int oracle(std::size_t m, std::size_t instances, std::uint64_t seed) {
  std::size_t matches = 0;
  std::size_t infeasible = 0;
  double worst = 1.0;
  for (std::size_t i = 0; i < instances; ++i) {
    const auto inst = random_instance(m, mix_seed(seed, i));
    CccpOptions options;
    options.seed = mix_seed(seed, 1000 + i);
    const auto c = solve_cccp(inst, options);
    const auto b = solve_brute_force(inst);
    if (!c.feasible) ++infeasible;
    if (c.avg_loss <= b.avg_loss + 1e-9 * std::max(1.0, b.avg_loss)) ++matches;
    if (b.avg_loss > 0.0) worst = std::max(worst, c.avg_loss / b.avg_loss);
  }
  std::printf("cccp matched brute force on %zu/%zu instances (rate %.3f), worst ratio %.4f, infeasible %zu\n", matches,
              instances, static_cast<double>(matches) / static_cast<double>(instances), worst, infeasible);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skbmlfx: multi-level feature extraction and transmission planning"};
  app.require_subcommand(1);

  CommonOptions gen_opts;
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic world as CSV files");
  add_common(gen_cmd, gen_opts);

  std::string features;
  std::string prototypes;
  std::size_t k = 8;
  double lambda = 1.0;
  std::string model_out = "model.json";
  auto* train_cmd = app.add_subcommand("train", "Train an extractor from a feature file");
  train_cmd->add_option("--features", features, "Feature CSV")->required();
  train_cmd->add_option("--prototypes", prototypes, "Prototype CSV")->required();
  train_cmd->add_option("--k", k, "Intermediate dimension");
  train_cmd->add_option("--lambda", lambda, "Autoencoder weight");
  train_cmd->add_option("--out", model_out, "Model JSON path");

  std::string instance;
  std::string planner = "cccp";
  std::uint64_t plan_seed = 0;
  std::optional<std::string> plan_out;
  auto* plan_cmd = app.add_subcommand("plan", "Solve a transmission-planning instance");
  plan_cmd->add_option("--instance", instance, "Instance CSV")->required();
  plan_cmd->add_option("--planner", planner, "level1..level4, lp_relax, lagrangian, cccp, brute_force");
  plan_cmd->add_option("--seed", plan_seed, "Restart seed");
  plan_cmd->add_option("--out", plan_out, "Report JSON path (stdout if omitted)");

  CommonOptions tradeoff_opts;
  auto* tradeoff_cmd = app.add_subcommand("tradeoff", "Latency/accuracy tradeoff experiment");
  add_common(tradeoff_cmd, tradeoff_opts);

  CommonOptions sweep_opts;
  std::string side = "both";
  std::vector<std::size_t> sizes;
  auto* sweep_cmd = app.add_subcommand("sweep", "SKB size sweep");
  add_common(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--side", side, "tx, rx or both");
  sweep_cmd->add_option("--sizes", sizes, "SKB sizes")->delimiter(',');

  std::size_t oracle_m = 8;
  std::size_t oracle_instances = 100;
  std::uint64_t oracle_seed = 0;
  auto* oracle_cmd = app.add_subcommand("oracle", "Compare CCCP with brute force on random instances");
  oracle_cmd->add_option("--m", oracle_m, "Samples per instance")->check(CLI::Range(1, 12));
  oracle_cmd->add_option("--instances", oracle_instances, "Instance count")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--seed", oracle_seed, "Base seed");

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*gen_cmd) return gen_data(gen_opts);
    if (*train_cmd) return train(features, prototypes, k, lambda, model_out);
    if (*plan_cmd) return plan(instance, planner, plan_seed, plan_out);
    if (*tradeoff_cmd) return tradeoff(tradeoff_opts);
    if (*sweep_cmd) return sweep(sweep_opts, side, sizes);
    if (*oracle_cmd) return oracle(oracle_m, oracle_instances, oracle_seed);
    if (*selftest_cmd) return skbmlfx::run_selftest(std::cout) ? 0 : 2;
  } catch (const skbmlfx::Error& e) {
    std::cerr << "error [" << skbmlfx::to_string(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
