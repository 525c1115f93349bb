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

#include "skbmlfx/harness.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <omp.h>

#include <boost/math/distributions/students_t.hpp>

#include "skbmlfx/error.hpp"
#include "skbmlfx/io.hpp"
#include "skbmlfx/kernels.hpp"
#include "skbmlfx/linalg.hpp"
#include "skbmlfx/random.hpp"

namespace skbmlfx {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto token = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!token.empty()) out.push_back(token);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::kConfigInvalid, std::string(key) + ": cannot parse '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw Error(Errc::kConfigInvalid, std::string(key) + ": expected true or false");
}

SweepSide parse_side(std::string_view text) {
  if (text == "tx") return SweepSide::kTx;
  if (text == "rx") return SweepSide::kRx;
  throw Error(Errc::kConfigInvalid, "sweep side must be tx or rx, got '" + std::string(text) + "'");
}

const std::vector<std::string>& known_planners() {
  static const std::vector<std::string> names = {"level1",   "level2",     "level3", "level4",
                                                 "lp_relax", "lagrangian", "cccp",   "brute_force"};
  return names;
}

// Reseeds random SKB selections so every trial draws its own subset.
SkbSelection per_trial(const SkbSelection& sel, std::uint64_t seed) {
  if (const auto* r = std::get_if<skb_selection::RandomK>(&sel)) {
    return skb_selection::RandomK{r->k, mix_seed(seed, r->seed)};
  }
  return sel;
}

std::string fmt(double x) { return io::format_double(x); }

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

// Runs body(trial) for every trial on `workers` threads. Results land in
// per-trial slots; the first failing trial (by index) is reported along
// with how many leading trials completed.
template <typename Result, typename Body>
std::vector<std::optional<Result>> parallel_trials(std::size_t trials, int workers, Body body,
                                                   std::exception_ptr& failure, std::size_t& failed_at) {
  std::vector<std::optional<Result>> slots(trials);
  std::vector<std::exception_ptr> errors(trials);
  const auto n = static_cast<std::int64_t>(trials);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t t = 0; t < n; ++t) {
    try {
      slots[static_cast<std::size_t>(t)] = body(static_cast<std::size_t>(t));
    } catch (...) {
      errors[static_cast<std::size_t>(t)] = std::current_exception();
    }
  }
  failed_at = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    if (errors[t]) {
      failure = errors[t];
      failed_at = t;
      break;
    }
  }
  return slots;
}

}  // namespace

std::string_view to_string(SweepSide side) { return side == SweepSide::kTx ? "tx" : "rx"; }

bool is_known_planner(std::string_view name) {
  const auto& names = known_planners();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::kConfigInvalid, "line " + std::to_string(line_no) + ": expected 'section.key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    if (key == "synth.c_total") cfg.synth.c_total = parse_value<std::size_t>(key, value);
    else if (key == "synth.c_seen_tx") cfg.synth.c_seen_tx = parse_value<std::size_t>(key, value);
    else if (key == "synth.c_seen_rx") cfg.synth.c_seen_rx = parse_value<std::size_t>(key, value);
    else if (key == "synth.d_v") cfg.synth.d_v = parse_value<std::size_t>(key, value);
    else if (key == "synth.d_s") cfg.synth.d_s = parse_value<std::size_t>(key, value);
    else if (key == "synth.n_per_class") cfg.synth.n_per_class = parse_value<std::size_t>(key, value);
    else if (key == "synth.m_test") cfg.synth.m_test = parse_value<std::size_t>(key, value);
    else if (key == "synth.noise_sigma") cfg.synth.noise_sigma = parse_value<double>(key, value);
    else if (key == "channel.beta0_db") cfg.channel.beta0_db = parse_value<double>(key, value);
    else if (key == "channel.d0_m") cfg.channel.d0_m = parse_value<double>(key, value);
    else if (key == "channel.d_m") cfg.channel.d_m = parse_value<double>(key, value);
    else if (key == "channel.zeta") cfg.channel.zeta = parse_value<double>(key, value);
    else if (key == "channel.bandwidth_hz") cfg.channel.bandwidth_hz = parse_value<double>(key, value);
    else if (key == "channel.noise_dbm_per_hz") cfg.channel.noise_dbm_per_hz = parse_value<double>(key, value);
    else if (key == "channel.power_dbm") cfg.channel.power_dbm = parse_value<double>(key, value);
    else if (key == "channel.q_bits") cfg.channel.q_bits = parse_value<std::size_t>(key, value);
    else if (key == "extractor.k") cfg.k = parse_value<std::size_t>(key, value);
    else if (key == "extractor.lambda_tx") cfg.lambda_tx = parse_value<double>(key, value);
    else if (key == "extractor.lambda_rx") cfg.lambda_rx = parse_value<double>(key, value);
    else if (key == "extractor.shared") cfg.shared_extractor = parse_bool(key, value);
    else if (key == "plan.tau") cfg.tau = value == "auto" ? 0.0 : parse_value<double>(key, value);
    else if (key == "plan.planners") {
      cfg.planners.clear();
      for (const auto name : split_list(value)) cfg.planners.emplace_back(name);
    } else if (key == "plan.brute_force_cap") cfg.brute_force_cap = parse_value<std::size_t>(key, value);
    else if (key == "cccp.gamma0") cfg.cccp.gamma0 = parse_value<double>(key, value);
    else if (key == "cccp.gamma_growth") cfg.cccp.gamma_growth = parse_value<double>(key, value);
    else if (key == "cccp.gamma_octaves") cfg.cccp.gamma_octaves = parse_value<int>(key, value);
    else if (key == "cccp.restarts") cfg.cccp.restarts = parse_value<int>(key, value);
    else if (key == "cccp.tol") cfg.cccp.tol = parse_value<double>(key, value);
    else if (key == "cccp.max_iters") cfg.cccp.max_iters = parse_value<int>(key, value);
    else if (key == "cccp.max_escalations") cfg.cccp.max_escalations = parse_value<int>(key, value);
    else if (key == "skb.tx") cfg.skb_tx = parse_skb_selection(value);
    else if (key == "skb.rx") cfg.skb_rx = parse_skb_selection(value);
    else if (key == "sweep.sides") {
      cfg.sweep_sides.clear();
      for (const auto side : split_list(value)) cfg.sweep_sides.push_back(parse_side(side));
    } else if (key == "sweep.sizes") {
      cfg.sweep_sizes.clear();
      for (const auto size : split_list(value)) cfg.sweep_sizes.push_back(parse_value<std::size_t>(key, size));
    } else if (key == "run.trials") cfg.trials = parse_value<std::size_t>(key, value);
    else if (key == "run.seed") cfg.base_seed = parse_value<std::uint64_t>(key, value);
    else if (key == "run.out_dir") cfg.out_dir = std::string(value);
    else if (key == "run.workers") cfg.workers = parse_value<int>(key, value);
    else if (key == "run.record_wall_time") cfg.record_wall_time = parse_bool(key, value);
    else throw Error(Errc::kConfigInvalid, "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& name_or_path) {
  if (name_or_path == "default") {
    ExperimentConfig cfg;
    validate(cfg);
    return cfg;
  }
  std::ifstream in(name_or_path);
  if (!in) throw Error(Errc::kIoFailure, "cannot open config " + name_or_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

void validate(const ExperimentConfig& cfg) {
  SynthConfig synth = cfg.synth;
  synth.k_hint = cfg.k;
  validate(synth);
  if (cfg.planners.empty()) throw Error(Errc::kConfigInvalid, "planners must not be empty");
  for (const auto& name : cfg.planners) {
    if (!is_known_planner(name)) throw Error(Errc::kConfigInvalid, "unknown planner '" + name + "'");
  }
  if (cfg.trials < 1) throw Error(Errc::kConfigInvalid, "trials must be at least 1");
  if (!(cfg.lambda_tx > 0.0) || !(cfg.lambda_rx > 0.0)) throw Error(Errc::kConfigInvalid, "lambda must be positive");
  if (!std::isfinite(cfg.tau)) throw Error(Errc::kConfigInvalid, "tau must be finite");
  if (cfg.cccp.restarts < 1 || cfg.cccp.gamma_growth <= 1.0 || cfg.cccp.gamma_octaves < 1) {
    throw Error(Errc::kConfigInvalid, "cccp needs restarts >= 1, gamma_growth > 1, gamma_octaves >= 1");
  }
  const std::size_t unseen = cfg.synth.c_total - std::max(cfg.synth.c_seen_tx, cfg.synth.c_seen_rx);
  for (const std::size_t size : cfg.sweep_sizes) {
    if (size < 1 || size > unseen) {
      throw Error(Errc::kConfigInvalid, "sweep sizes must lie in [1, " + std::to_string(unseen) + "]");
    }
  }
  for (const auto* sel : {&cfg.skb_tx, &cfg.skb_rx}) {
    std::size_t size = 0;
    if (const auto* f = std::get_if<skb_selection::FirstK>(sel)) size = f->k;
    if (const auto* r = std::get_if<skb_selection::RandomK>(sel)) size = r->k;
    if (size > unseen) {
      throw Error(Errc::kConfigInvalid, "skb size exceeds the " + std::to_string(unseen) + " test classes");
    }
  }
  if (cfg.workers < 0) throw Error(Errc::kConfigInvalid, "workers must be non-negative");
}

std::string to_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  auto line = [&](std::string_view key, const std::string& value) { out << key << " = " << value << '\n'; };
  line("synth.c_total", std::to_string(cfg.synth.c_total));
  line("synth.c_seen_tx", std::to_string(cfg.synth.c_seen_tx));
  line("synth.c_seen_rx", std::to_string(cfg.synth.c_seen_rx));
  line("synth.d_v", std::to_string(cfg.synth.d_v));
  line("synth.d_s", std::to_string(cfg.synth.d_s));
  line("synth.n_per_class", std::to_string(cfg.synth.n_per_class));
  line("synth.m_test", std::to_string(cfg.synth.m_test));
  line("synth.noise_sigma", fmt(cfg.synth.noise_sigma));
  line("channel.beta0_db", fmt(cfg.channel.beta0_db));
  line("channel.d0_m", fmt(cfg.channel.d0_m));
  line("channel.d_m", fmt(cfg.channel.d_m));
  line("channel.zeta", fmt(cfg.channel.zeta));
  line("channel.bandwidth_hz", fmt(cfg.channel.bandwidth_hz));
  line("channel.noise_dbm_per_hz", fmt(cfg.channel.noise_dbm_per_hz));
  line("channel.power_dbm", fmt(cfg.channel.power_dbm));
  line("channel.q_bits", std::to_string(cfg.channel.q_bits));
  line("extractor.k", std::to_string(cfg.k));
  line("extractor.lambda_tx", fmt(cfg.lambda_tx));
  line("extractor.lambda_rx", fmt(cfg.lambda_rx));
  line("extractor.shared", cfg.shared_extractor ? "true" : "false");
  line("plan.tau", cfg.tau > 0.0 ? fmt(cfg.tau) : "auto");
  std::string planners;
  for (const auto& p : cfg.planners) planners += (planners.empty() ? "" : ",") + p;
  line("plan.planners", planners);
  line("plan.brute_force_cap", std::to_string(cfg.brute_force_cap));
  line("cccp.gamma0", fmt(cfg.cccp.gamma0));
  line("cccp.gamma_growth", fmt(cfg.cccp.gamma_growth));
  line("cccp.gamma_octaves", std::to_string(cfg.cccp.gamma_octaves));
  line("cccp.restarts", std::to_string(cfg.cccp.restarts));
  line("cccp.tol", fmt(cfg.cccp.tol));
  line("cccp.max_iters", std::to_string(cfg.cccp.max_iters));
  line("cccp.max_escalations", std::to_string(cfg.cccp.max_escalations));
  line("skb.tx", to_string(cfg.skb_tx));
  line("skb.rx", to_string(cfg.skb_rx));
  std::string sides;
  for (const auto s : cfg.sweep_sides) sides += (sides.empty() ? "" : ",") + std::string(to_string(s));
  line("sweep.sides", sides);
  std::string sizes;
  for (const auto s : cfg.sweep_sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(s);
  line("sweep.sizes", sizes);
  line("run.trials", std::to_string(cfg.trials));
  line("run.seed", std::to_string(cfg.base_seed));
  line("run.out_dir", cfg.out_dir.string());
  line("run.workers", std::to_string(cfg.workers));
  line("run.record_wall_time", cfg.record_wall_time ? "true" : "false");
  return out.str();
}

int resolve_workers(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("SKBMLFX_WORKERS"); env != nullptr && *env != '\0') {
    const int workers = parse_value<int>("SKBMLFX_WORKERS", env);
    if (workers < 0) throw Error(Errc::kConfigInvalid, "SKBMLFX_WORKERS must be non-negative");
    return workers;
  }
  return cfg.workers;
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial) { return mix_seed(cfg.base_seed, trial); }

TrialSetup prepare_trial(const ExperimentConfig& cfg, std::size_t trial) {
  SynthConfig synth = cfg.synth;
  synth.k_hint = cfg.k;
  synth.seed = trial_seed(cfg, trial);
  TrialSetup setup{generate(synth), nullptr, nullptr, achievable_rate(cfg.channel)};
  setup.tx_model = std::make_shared<const ExtractorModel>(train_extractor(setup.world.tx_train, cfg.k, cfg.lambda_tx));
  setup.rx_model = cfg.shared_extractor
                       ? setup.tx_model
                       : std::make_shared<const ExtractorModel>(train_extractor(setup.world.rx_train, cfg.k, cfg.lambda_rx));
  return setup;
}

double default_tau(const std::vector<SampleMenu>& menus) {
  double level2 = 0.0;
  double level4 = 0.0;
  for (const auto& menu : menus) {
    level2 += menu.latencies[1];
    level4 += menu.latencies[3];
  }
  const auto m = static_cast<double>(menus.size());
  return 0.5 * (level2 / m + level4 / m);
}

TrialMenus build_menus(const ExperimentConfig& cfg, const TrialSetup& setup, const SkbSelection& tx_sel,
                       const SkbSelection& rx_sel, std::uint64_t seed) {
  const auto& universe = setup.world.test_prototypes;
  PartyContext tx{setup.tx_model, build_skb(universe, per_trial(tx_sel, mix_seed(seed, 11)))};
  PartyContext rx{setup.rx_model, build_skb(universe, per_trial(rx_sel, mix_seed(seed, 12)))};
  auto menus = compute_menus(setup.world.test_visual, tx, rx, cfg.channel, setup.rate);

  const std::size_t m = menus.size();
  Matrix losses(m, kLevels);
  Matrix latencies(m, kLevels);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t l = 0; l < kLevels; ++l) {
      losses(r, l) = menus[r].losses[l];
      latencies(r, l) = menus[r].latencies[l];
    }
  }
  const double tau = cfg.tau > 0.0 ? cfg.tau : default_tau(menus);
  return {std::move(menus), Instance(std::move(losses), std::move(latencies), tau)};
}

double accuracy(const std::vector<SampleMenu>& menus, const Assignment& a, const std::vector<int>& labels) {
  if (menus.size() != a.m() || labels.size() != a.m()) {
    throw Error(Errc::kDimensionMismatch, "menus, assignment and labels must cover the same samples");
  }
  std::size_t correct = 0;
  for (std::size_t r = 0; r < menus.size(); ++r) {
    if (effective_decision(menus[r], static_cast<int>(a.level_index(r)) + 1) == labels[r]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(menus.size());
}

PlannerReport run_planner(const std::string& name, const Instance& inst, const ExperimentConfig& cfg,
                          std::uint64_t seed) {
  if (name.size() == 6 && name.starts_with("level") && name[5] >= '1' && name[5] <= '4') {
    return solve_fixed_level(inst, name[5] - '0');
  }
  if (name == "lp_relax") return solve_linear_relaxation(inst);
  if (name == "lagrangian") return solve_lagrangian(inst);
  if (name == "brute_force") return solve_brute_force(inst);
  if (name == "cccp") {
    CccpOptions options = cfg.cccp;
    options.seed = mix_seed(seed, 7);
    return solve_cccp(inst, options);
  }
  throw Error(Errc::kConfigInvalid, "unknown planner '" + name + "'");
}

namespace {

std::vector<ExperimentRow> plan_all(const ExperimentConfig& cfg, const TrialMenus& tm, const std::vector<int>& labels,
                                    std::size_t trial, std::uint64_t seed) {
  std::vector<ExperimentRow> rows;
  for (const auto& name : cfg.planners) {
    if (name == "brute_force" && tm.instance.m() > std::min(cfg.brute_force_cap, kBruteForceMaxRows)) continue;
    const auto start = std::chrono::steady_clock::now();
    const auto report = run_planner(name, tm.instance, cfg, seed);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back({trial, name, report.avg_loss, report.avg_latency, accuracy(tm.menus, report.assignment, labels),
                    report.feasible, elapsed});
  }
  return rows;
}

}  // namespace

std::vector<ExperimentRow> run_trial(const ExperimentConfig& cfg, std::size_t trial) {
  const auto setup = prepare_trial(cfg, trial);
  const auto seed = trial_seed(cfg, trial);
  const auto tm = build_menus(cfg, setup, cfg.skb_tx, cfg.skb_rx, seed);
  return plan_all(cfg, tm, setup.world.test_labels, trial, seed);
}

namespace {

nlohmann::json planner_summary(const std::vector<ExperimentRow>& rows, const std::vector<std::string>& planners) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& name : planners) {
    std::vector<double> acc;
    std::vector<double> loss;
    std::vector<double> lat;
    std::size_t feasible = 0;
    for (const auto& row : rows) {
      if (row.planner != name) continue;
      acc.push_back(row.accuracy);
      loss.push_back(row.avg_loss);
      lat.push_back(row.avg_latency_s);
      feasible += row.feasible ? 1 : 0;
    }
    if (acc.empty()) continue;
    out[name] = {{"trials", acc.size()},
                 {"mean_accuracy", mean(acc)},
                 {"mean_avg_loss", mean(loss)},
                 {"mean_avg_latency_s", mean(lat)},
                 {"feasible_fraction", static_cast<double>(feasible) / static_cast<double>(acc.size())}};
  }
  return out;
}

// Trials where cccp is no slower than any fixed level and within two
// accuracy points of the most accurate fixed level.
nlohmann::json dominance_summary(const std::vector<ExperimentRow>& rows, std::size_t trials) {
  std::size_t counted = 0;
  std::size_t dominated = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::optional<ExperimentRow> cccp;
    std::vector<ExperimentRow> fixed;
    for (const auto& row : rows) {
      if (row.trial != t) continue;
      if (row.planner == "cccp") cccp = row;
      if (row.planner.starts_with("level")) fixed.push_back(row);
    }
    if (!cccp || fixed.empty()) continue;
    ++counted;
    bool faster = true;
    double best_acc = 0.0;
    for (const auto& f : fixed) {
      faster = faster && within_budget(cccp->avg_latency_s, f.avg_latency_s);
      best_acc = std::max(best_acc, f.accuracy);
    }
    if (faster && cccp->accuracy >= best_acc - 0.02) ++dominated;
  }
  return {{"trials", counted}, {"cccp_dominates_fixed", dominated}};
}

}  // namespace

TradeoffResult run_tradeoff(const ExperimentConfig& cfg) {
  validate(cfg);
  std::exception_ptr failure;
  std::size_t failed_at = 0;
  auto slots = parallel_trials<std::vector<ExperimentRow>>(
      cfg.trials, resolve_workers(cfg), [&](std::size_t t) { return run_trial(cfg, t); }, failure, failed_at);
  TradeoffResult result;
  for (std::size_t t = 0; t < failed_at; ++t) {
    result.rows.insert(result.rows.end(), slots[t]->begin(), slots[t]->end());
  }
  if (failure) {
    // Flush the completed prefix before propagating.
    auto partial = cfg;
    write_tradeoff(partial, result);
    std::rethrow_exception(failure);
  }
  result.summary = {{"experiment", "tradeoff"},
                    {"trials", cfg.trials},
                    {"base_seed", cfg.base_seed},
                    {"m_test", cfg.synth.m_test},
                    {"planners", planner_summary(result.rows, cfg.planners)},
                    {"cccp_vs_fixed_levels", dominance_summary(result.rows, cfg.trials)}};
  return result;
}

std::string tradeoff_csv(const std::vector<ExperimentRow>& rows, bool wall_time) {
  std::string out = "trial,planner,avg_loss,avg_latency_s,accuracy,feasible";
  if (wall_time) out += ",wall_time_s";
  out += '\n';
  for (const auto& row : rows) {
    out += std::to_string(row.trial) + ',' + row.planner + ',' + fmt(row.avg_loss) + ',' + fmt(row.avg_latency_s) +
           ',' + fmt(row.accuracy) + ',' + (row.feasible ? "1" : "0");
    if (wall_time) out += ',' + fmt(row.wall_time_s);
    out += '\n';
  }
  return out;
}

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(Errc::kDimensionMismatch, "spearman needs paired samples");
  SpearmanResult result;
  result.n = x.size();
  if (result.n < 3) return result;
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < result.n; ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return result;
  result.rho = sxy / std::sqrt(sxx * syy);
  const double dof = static_cast<double>(result.n) - 2.0;
  if (std::abs(result.rho) >= 1.0) {
    result.p_value = 0.0;
    return result;
  }
  const double t = result.rho * std::sqrt(dof / (1.0 - result.rho * result.rho));
  const boost::math::students_t dist(dof);
  result.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return result;
}

SweepResult run_skb_sweep(const ExperimentConfig& cfg, SweepSide side, const std::vector<std::size_t>& sizes) {
  validate(cfg);
  if (sizes.empty()) throw Error(Errc::kConfigInvalid, "sweep needs at least one size");
  const std::size_t unseen = cfg.synth.c_total - std::max(cfg.synth.c_seen_tx, cfg.synth.c_seen_rx);
  for (const std::size_t size : sizes) {
    if (size < 1 || size > unseen) throw Error(Errc::kConfigInvalid, "sweep size outside [1, unseen classes]");
  }

  auto body = [&](std::size_t t) {
    const auto setup = prepare_trial(cfg, t);
    const auto seed = trial_seed(cfg, t);
    std::vector<SweepTrialRow> rows;
    for (const std::size_t size : sizes) {
      // Same shuffle seed for every size, so the subsets are nested.
      const SkbSelection varied = skb_selection::RandomK{size, 0};
      const SkbSelection full = skb_selection::Full{};
      const auto tm = side == SweepSide::kTx ? build_menus(cfg, setup, varied, full, seed)
                                             : build_menus(cfg, setup, full, varied, seed);
      for (auto& row : plan_all(cfg, tm, setup.world.test_labels, t, seed)) rows.push_back({side, size, std::move(row)});
    }
    return rows;
  };
  std::exception_ptr failure;
  std::size_t failed_at = 0;
  auto slots = parallel_trials<std::vector<SweepTrialRow>>(cfg.trials, resolve_workers(cfg), body, failure, failed_at);

  SweepResult result;
  result.side = side;
  for (std::size_t t = 0; t < failed_at; ++t) {
    result.trial_rows.insert(result.trial_rows.end(), slots[t]->begin(), slots[t]->end());
  }
  if (failure) {
    write_sweeps(cfg, {result});
    std::rethrow_exception(failure);
  }

  nlohmann::json trends = nlohmann::json::object();
  for (const std::size_t size : sizes) {
    for (const auto& name : cfg.planners) {
      SweepRow agg{side, size, name};
      for (const auto& tr : result.trial_rows) {
        if (tr.size != size || tr.row.planner != name) continue;
        ++agg.trials;
        agg.mean_accuracy += tr.row.accuracy;
        agg.mean_avg_loss += tr.row.avg_loss;
        agg.mean_avg_latency_s += tr.row.avg_latency_s;
        agg.feasible_fraction += tr.row.feasible ? 1.0 : 0.0;
      }
      if (agg.trials == 0) continue;
      const auto n = static_cast<double>(agg.trials);
      agg.mean_accuracy /= n;
      agg.mean_avg_loss /= n;
      agg.mean_avg_latency_s /= n;
      agg.feasible_fraction /= n;
      result.rows.push_back(agg);
    }
  }
  for (const auto& name : cfg.planners) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& tr : result.trial_rows) {
      if (tr.row.planner != name) continue;
      x.push_back(static_cast<double>(tr.size));
      y.push_back(tr.row.accuracy);
    }
    if (x.empty()) continue;
    const auto s = spearman(x, y);
    trends[name] = {{"spearman_rho", s.rho}, {"p_value", s.p_value}, {"n", s.n}};
  }
  result.summary = {{"side", std::string(to_string(side))},
                    {"trials", cfg.trials},
                    {"sizes", sizes},
                    {"base_seed", cfg.base_seed},
                    {"accuracy_trend", trends}};
  return result;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "side,size,planner,trials,mean_accuracy,mean_avg_loss,mean_avg_latency_s,feasible_fraction\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.side)) + ',' + std::to_string(r.size) + ',' + r.planner + ',' +
           std::to_string(r.trials) + ',' + fmt(r.mean_accuracy) + ',' + fmt(r.mean_avg_loss) + ',' +
           fmt(r.mean_avg_latency_s) + ',' + fmt(r.feasible_fraction) + '\n';
  }
  return out;
}

std::string sweep_trials_csv(const std::vector<SweepTrialRow>& rows) {
  std::string out = "side,size,trial,planner,avg_loss,avg_latency_s,accuracy,feasible\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.side)) + ',' + std::to_string(r.size) + ',' + std::to_string(r.row.trial) + ',' +
           r.row.planner + ',' + fmt(r.row.avg_loss) + ',' + fmt(r.row.avg_latency_s) + ',' + fmt(r.row.accuracy) +
           ',' + (r.row.feasible ? "1" : "0") + '\n';
  }
  return out;
}

void write_tradeoff(const ExperimentConfig& cfg, const TradeoffResult& result) {
  io::write_text(cfg.out_dir / "tradeoff.csv", tradeoff_csv(result.rows, cfg.record_wall_time));
  if (!result.summary.is_null()) io::write_text(cfg.out_dir / "summary.json", result.summary.dump(2) + '\n');
}

void write_sweeps(const ExperimentConfig& cfg, const std::vector<SweepResult>& results) {
  nlohmann::json summary = nlohmann::json::object();
  for (const auto& r : results) {
    const std::string side(to_string(r.side));
    io::write_text(cfg.out_dir / ("sweep_" + side + ".csv"), sweep_csv(r.rows));
    io::write_text(cfg.out_dir / ("sweep_" + side + "_trials.csv"), sweep_trials_csv(r.trial_rows));
    if (!r.summary.is_null()) summary[side] = r.summary;
  }
  io::write_text(cfg.out_dir / "sweep_summary.json", summary.dump(2) + '\n');
}

bool run_selftest(std::ostream& out) {
  bool all = true;
  auto check = [&](const std::string& name, auto&& fn) {
    bool ok = false;
    std::string detail;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      detail = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "ok   " : "FAIL ") << name << detail << '\n';
    all = all && ok;
  };

  check("eigh_sym reconstructs a symmetric matrix", [] {
    const Matrix a{{4.0, 1.0, 0.5}, {1.0, 3.0, 0.2}, {0.5, 0.2, 1.0}};
    const auto e = eigh_sym(a);
    const Matrix rebuilt = kernels::matmul_nt(kernels::matmul(e.vectors, Matrix::diagonal(e.values)), e.vectors);
    return frobenius_norm(rebuilt - a) <= 1e-10 * frobenius_norm(a);
  });
  check("pinv satisfies A A+ A = A", [] {
    const Matrix a{{1.0, 2.0}, {2.0, 4.0}, {0.0, 1.0}};
    const Matrix p = pinv(a);
    return frobenius_norm(kernels::matmul(kernels::matmul(a, p), a) - a) <= 1e-10 * frobenius_norm(a);
  });
  check("sylvester_spd residual", [] {
    const Matrix a{{2.0, 0.3}, {0.3, 1.0}};
    const Matrix b{{1.5, 0.0, 0.1}, {0.0, 2.0, 0.0}, {0.1, 0.0, 0.7}};
    const Matrix c{{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
    const Matrix x = sylvester_spd(a, b, c);
    return frobenius_norm(kernels::matmul(a, x) + kernels::matmul(x, b) - c) <= 1e-10 * frobenius_norm(c);
  });
  check("channel path loss at 500 m is 8e-9", [] {
    return std::abs(path_loss(ChannelParams{}) - 8e-9) <= 1e-3 * 8e-9;
  });
  check("serial and parallel matmul agree bitwise", [] {
    Matrix a(40, 30);
    Matrix b(30, 20);
    for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] = std::sin(static_cast<double>(i));
    for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] = std::cos(static_cast<double>(i));
    return kernels::matmul(a, b) == kernels::serial::matmul(a, b);
  });
  check("cccp matches brute force on small instances", [] {
    int matches = 0;
    for (std::uint64_t i = 0; i < 10; ++i) {
      const auto inst = random_instance(6, mix_seed(9, i));
      const auto c = solve_cccp(inst);
      const auto b = solve_brute_force(inst);
      if (!c.feasible) return false;
      if (c.avg_loss <= b.avg_loss + 1e-9) ++matches;
    }
    return matches >= 9;
  });
  check("lp bound below brute force", [] {
    for (std::uint64_t i = 0; i < 10; ++i) {
      const auto inst = random_instance(5, mix_seed(17, i));
      const double lp = solve_lp_mck(inst, inst.losses()).objective / static_cast<double>(inst.m());
      if (lp > solve_brute_force(inst).avg_loss + 1e-9) return false;
    }
    return true;
  });
  check("one tradeoff trial yields bounded accuracies", [] {
    ExperimentConfig cfg;
    cfg.trials = 1;
    cfg.synth.m_test = 8;
    cfg.cccp.restarts = 16;
    for (const auto& row : run_trial(cfg, 0)) {
      if (row.accuracy < 0.0 || row.accuracy > 1.0) return false;
    }
    return true;
  });
  return all;
}

}  // namespace skbmlfx
