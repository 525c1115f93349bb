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

#include "skbmlfx/planner.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include "skbmlfx/error.hpp"
#include "skbmlfx/random.hpp"

namespace skbmlfx {

namespace {

constexpr double kSnap = 1e-12;

void require_guard(const Instance& inst) {
  if (!inst.guard_satisfied()) {
    throw Error(Errc::kInfeasible, "even the lowest-latency level of every sample exceeds the budget");
  }
}

double latency_sum(const Instance& inst, const std::vector<std::uint8_t>& levels) {
  double sum = 0.0;
  for (std::size_t r = 0; r < levels.size(); ++r) sum += inst.latencies()(r, levels[r]);
  return sum;
}

bool levels_within_budget(const Instance& inst, const std::vector<std::uint8_t>& levels) {
  return within_budget(latency_sum(inst, levels) / static_cast<double>(inst.m()), inst.tau());
}

// Lowest-latency level of a row; ties prefer lower loss, then lower index.
std::uint8_t fastest_level(const Instance& inst, std::size_t row) {
  std::uint8_t best = 0;
  for (std::uint8_t l = 1; l < kLevels; ++l) {
    const double t = inst.latencies()(row, l);
    const double tb = inst.latencies()(row, best);
    if (t < tb || (t == tb && inst.losses()(row, l) < inst.losses()(row, best))) best = l;
  }
  return best;
}

// Among levels whose loss equals the chosen one exactly, take the fastest.
void prefer_lower_latency_ties(const Instance& inst, std::vector<std::uint8_t>& levels) {
  for (std::size_t r = 0; r < levels.size(); ++r) {
    const double loss = inst.losses()(r, levels[r]);
    for (std::uint8_t l = 0; l < kLevels; ++l) {
      if (inst.losses()(r, l) == loss && inst.latencies()(r, l) < inst.latencies()(r, levels[r])) levels[r] = l;
    }
  }
}

// Rounds a CCCP limit point. Argmax per row; if that breaks the budget, each
// fractional row falls back to the faster of the levels it spreads over,
// which is the feasible end of the LP edge the vertex sits on.
std::vector<std::uint8_t> round_to_feasible(const Instance& inst, const FractionalPoint& x, double tol) {
  auto levels = x.round().levels();
  prefer_lower_latency_ties(inst, levels);
  if (levels_within_budget(inst, levels)) return levels;
  for (std::size_t r = 0; r < levels.size(); ++r) {
    for (std::uint8_t l = 0; l < kLevels; ++l) {
      if (x.x()(r, l) > tol && inst.latencies()(r, l) < inst.latencies()(r, levels[r])) levels[r] = l;
    }
  }
  return levels;
}

bool better_report(const PlannerReport& a, const PlannerReport& b) {
  if (a.avg_loss != b.avg_loss) return a.avg_loss < b.avg_loss;
  return a.avg_latency < b.avg_latency;
}

struct HullPoint {
  double t;
  double c;
  std::uint8_t level;
};

// Lower convex hull of a row's (T, c) options, returned from the cheapest
// (lowest T among equal cost) towards the fastest option.
std::vector<HullPoint> row_chain(const Instance& inst, const Matrix& costs, std::size_t row) {
  std::vector<HullPoint> pts;
  for (std::uint8_t l = 0; l < kLevels; ++l) pts.push_back({inst.latencies()(row, l), costs(row, l), l});
  std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.c != b.c) return a.c < b.c;
    return a.level < b.level;
  });
  std::vector<HullPoint> hull;
  for (const auto& p : pts) {
    if (!hull.empty() && hull.back().t == p.t) continue;
    while (hull.size() >= 2) {
      const auto& o = hull[hull.size() - 2];
      const auto& a = hull.back();
      const double cross = (a.t - o.t) * (p.c - o.c) - (a.c - o.c) * (p.t - o.t);
      if (cross > 0.0) break;
      hull.pop_back();
    }
    hull.push_back(p);
  }
  std::size_t cheapest = 0;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    if (hull[i].c < hull[cheapest].c) cheapest = i;
  }
  std::vector<HullPoint> chain(hull.begin(), hull.begin() + static_cast<std::ptrdiff_t>(cheapest) + 1);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

// Euclidean projection of y onto the probability simplex.
std::array<double, kLevels> project_simplex(const std::array<double, kLevels>& y) {
  std::array<double, kLevels> u = y;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < kLevels; ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) theta = candidate;
  }
  std::array<double, kLevels> x{};
  for (std::size_t j = 0; j < kLevels; ++j) x[j] = std::max(y[j] - theta, 0.0);
  return x;
}

Matrix min_norm_point(const Instance& inst, double mu) {
  const double scale = mu / (2.0 * static_cast<double>(inst.m()));
  Matrix x(inst.m(), kLevels);
  for (std::size_t r = 0; r < inst.m(); ++r) {
    std::array<double, kLevels> y{};
    for (std::size_t l = 0; l < kLevels; ++l) y[l] = -scale * inst.latencies()(r, l);
    const auto p = project_simplex(y);
    for (std::size_t l = 0; l < kLevels; ++l) x(r, l) = p[l];
  }
  return x;
}

double average_latency(const Instance& inst, const Matrix& x) {
  double sum = 0.0;
  for (std::size_t r = 0; r < inst.m(); ++r) {
    for (std::size_t l = 0; l < kLevels; ++l) sum += x(r, l) * inst.latencies()(r, l);
  }
  return sum / static_cast<double>(inst.m());
}

PlannerReport named(PlannerReport report, std::string name) {
  report.planner = std::move(name);
  return report;
}

}  // namespace

bool within_budget(double avg_latency, double tau) {
  return avg_latency <= tau + 1e-9 * std::max(1.0, std::abs(tau));
}

Instance::Instance(Matrix losses, Matrix latencies, double tau)
    : losses_(std::move(losses)), latencies_(std::move(latencies)), tau_(tau) {
  if (losses_.cols() != kLevels || latencies_.cols() != kLevels || losses_.rows() != latencies_.rows()) {
    throw Error(Errc::kDimensionMismatch, "instance needs M x 4 loss and latency matrices");
  }
  require_finite(losses_, "losses");
  require_finite(latencies_, "latencies");
  for (double l : losses_.data()) {
    if (l < 0.0) throw Error(Errc::kInvalidArgument, "losses must be non-negative");
  }
  for (double t : latencies_.data()) {
    if (!(t > 0.0)) throw Error(Errc::kInvalidArgument, "latencies must be positive");
  }
  if (!std::isfinite(tau_) || tau_ < 0.0) throw Error(Errc::kInvalidArgument, "tau must be finite and non-negative");
}

double Instance::min_average_latency() const {
  double sum = 0.0;
  for (std::size_t r = 0; r < m(); ++r) {
    const auto row = latencies_.row(r);
    sum += *std::min_element(row.begin(), row.end());
  }
  return sum / static_cast<double>(m());
}

Assignment::Assignment(std::vector<std::uint8_t> levels) : levels_(std::move(levels)) {
  for (auto l : levels_) {
    if (l >= kLevels) throw Error(Errc::kMalformedAssignment, "level index out of range");
  }
}

Assignment Assignment::uniform(std::size_t m, std::size_t level_index) {
  return Assignment(std::vector<std::uint8_t>(m, static_cast<std::uint8_t>(level_index)));
}

Assignment Assignment::from_matrix(const Matrix& x) {
  if (x.cols() != kLevels) throw Error(Errc::kMalformedAssignment, "assignment needs 4 columns");
  std::vector<std::uint8_t> levels(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    int ones = 0;
    for (std::size_t l = 0; l < kLevels; ++l) {
      if (x(r, l) == 1.0) {
        ++ones;
        levels[r] = static_cast<std::uint8_t>(l);
      } else if (x(r, l) != 0.0) {
        throw Error(Errc::kMalformedAssignment, "assignment entries must be 0 or 1");
      }
    }
    if (ones != 1) throw Error(Errc::kMalformedAssignment, "each row must select exactly one level");
  }
  return Assignment(std::move(levels));
}

Matrix Assignment::to_matrix() const {
  Matrix x(levels_.size(), kLevels);
  for (std::size_t r = 0; r < levels_.size(); ++r) x(r, levels_[r]) = 1.0;
  return x;
}

FractionalPoint::FractionalPoint(Matrix x) : x_(std::move(x)) {
  if (x_.cols() != kLevels) throw Error(Errc::kDimensionMismatch, "fractional point needs 4 columns");
  for (std::size_t r = 0; r < x_.rows(); ++r) {
    double sum = 0.0;
    for (std::size_t l = 0; l < kLevels; ++l) {
      const double v = x_(r, l);
      if (v < -1e-12 || v > 1.0 + 1e-12) throw Error(Errc::kInvalidArgument, "fractional entries must lie in [0, 1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error(Errc::kInvalidArgument, "fractional rows must sum to 1");
  }
}

FractionalPoint FractionalPoint::from_assignment(const Assignment& a) { return FractionalPoint(a.to_matrix()); }

bool FractionalPoint::is_binary(double tol) const {
  return std::all_of(x_.data().begin(), x_.data().end(),
                     [tol](double v) { return std::abs(v) <= tol || std::abs(v - 1.0) <= tol; });
}

Assignment FractionalPoint::round() const {
  std::vector<std::uint8_t> levels(x_.rows());
  for (std::size_t r = 0; r < x_.rows(); ++r) {
    std::uint8_t best = 0;
    for (std::uint8_t l = 1; l < kLevels; ++l) {
      if (x_(r, l) > x_(r, best)) best = l;
    }
    levels[r] = best;
  }
  return Assignment(std::move(levels));
}

PlannerReport evaluate(const Instance& inst, const Assignment& a) {
  if (a.m() != inst.m()) throw Error(Errc::kMalformedAssignment, "assignment covers a different number of samples");
  double loss = 0.0;
  double lat = 0.0;
  for (std::size_t r = 0; r < a.m(); ++r) {
    loss += inst.losses()(r, a.level_index(r));
    lat += inst.latencies()(r, a.level_index(r));
  }
  PlannerReport report;
  report.assignment = a;
  report.avg_loss = loss / static_cast<double>(inst.m());
  report.avg_latency = lat / static_cast<double>(inst.m());
  report.feasible = within_budget(report.avg_latency, inst.tau());
  return report;
}

LpSolution solve_lp_mck(const Instance& inst, const Matrix& costs) {
  if (costs.rows() != inst.m() || costs.cols() != kLevels) {
    throw Error(Errc::kDimensionMismatch, "cost matrix must be M x 4");
  }
  require_finite(costs, "costs");
  require_guard(inst);

  const std::size_t m = inst.m();
  const double budget = inst.tau() * static_cast<double>(m);

  struct Step {
    double slope;
    double saving;
    std::size_t row;
    std::size_t index;
  };
  std::vector<std::vector<HullPoint>> chains(m);
  std::vector<Step> steps;
  double usage = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    chains[r] = row_chain(inst, costs, r);
    usage += chains[r].front().t;
    for (std::size_t j = 0; j + 1 < chains[r].size(); ++j) {
      const auto& from = chains[r][j];
      const auto& to = chains[r][j + 1];
      const double saving = from.t - to.t;
      steps.push_back({(to.c - from.c) / saving, saving, r, j});
    }
  }
  std::sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) {
    if (a.slope != b.slope) return a.slope < b.slope;
    if (a.row != b.row) return a.row < b.row;
    return a.index < b.index;
  });

  std::vector<std::size_t> position(m, 0);
  std::optional<std::pair<std::size_t, double>> fractional;  // (row, weight on the next hull point)
  double multiplier = 0.0;
  for (const auto& step : steps) {
    if (usage <= budget) break;
    const double excess = usage - budget;
    multiplier = step.slope * static_cast<double>(m);
    double theta = step.saving <= excess ? 1.0 : excess / step.saving;
    if (theta > 1.0 - kSnap) theta = 1.0;
    if (theta < kSnap) break;
    if (theta == 1.0) {
      position[step.row] = step.index + 1;
      usage -= step.saving;
    } else {
      fractional = {step.row, theta};
      usage -= theta * step.saving;
      break;
    }
  }

  Matrix x(m, kLevels);
  for (std::size_t r = 0; r < m; ++r) x(r, chains[r][position[r]].level) = 1.0;
  if (fractional) {
    const auto [row, theta] = *fractional;
    const auto& from = chains[row][position[row]];
    const auto& to = chains[row][position[row] + 1];
    x(row, from.level) = 1.0 - theta;
    x(row, to.level) = theta;
  }
  double objective = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t l = 0; l < kLevels; ++l) objective += costs(r, l) * x(r, l);
  }
  return {FractionalPoint(std::move(x)), objective, multiplier};
}

double default_gamma0(const Instance& inst) {
  double spread = 0.0;
  for (std::size_t r = 0; r < inst.m(); ++r) {
    const auto row = inst.losses().row(r);
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    spread += *hi - *lo;
  }
  spread /= static_cast<double>(inst.m());
  return spread > 0.0 ? 0.1 * spread : 1e-3;
}

double penalized_objective(const Instance& inst, const Matrix& x, double gamma) {
  double value = 0.0;
  for (std::size_t r = 0; r < inst.m(); ++r) {
    for (std::size_t l = 0; l < kLevels; ++l) {
      const double v = x(r, l);
      value += v * inst.losses()(r, l) + gamma * v * (1.0 - v);
    }
  }
  return value;
}

CccpDescent cccp_descent(const Instance& inst, const FractionalPoint& x0, double gamma, double tol, int max_iters) {
  if (x0.m() != inst.m()) throw Error(Errc::kDimensionMismatch, "starting point covers a different M");
  CccpDescent out{x0, 0, {penalized_objective(inst, x0.x(), gamma)}};
  Matrix costs(inst.m(), kLevels);
  for (int it = 0; it < max_iters; ++it) {
    for (std::size_t r = 0; r < inst.m(); ++r) {
      for (std::size_t l = 0; l < kLevels; ++l) {
        costs(r, l) = inst.losses()(r, l) + gamma * (1.0 - 2.0 * out.x.x()(r, l));
      }
    }
    auto next = solve_lp_mck(inst, costs).x;
    ++out.iterations;
    out.objectives.push_back(penalized_objective(inst, next.x(), gamma));
    double change = 0.0;
    for (std::size_t i = 0; i < next.x().size(); ++i) {
      change = std::max(change, std::abs(next.x().data()[i] - out.x.x().data()[i]));
    }
    out.x = std::move(next);
    if (change <= tol) break;
  }
  return out;
}

Assignment random_feasible_vertex(const Instance& inst, std::uint64_t seed) {
  require_guard(inst);
  const std::size_t m = inst.m();
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> fastest(m);
  double reserve = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    fastest[r] = inst.latencies()(r, fastest_level(inst, r));
    reserve += fastest[r];
  }
  const double budget = inst.tau() * static_cast<double>(m);
  double used = 0.0;
  std::vector<std::uint8_t> levels(m, 0);
  for (const std::size_t r : order) {
    reserve -= fastest[r];
    std::vector<std::uint8_t> allowed;
    for (std::uint8_t l = 0; l < kLevels; ++l) {
      if (used + inst.latencies()(r, l) + reserve <= budget) allowed.push_back(l);
    }
    if (allowed.empty()) allowed.push_back(fastest_level(inst, r));
    std::uniform_int_distribution<std::size_t> pick(0, allowed.size() - 1);
    levels[r] = allowed[pick(rng)];
    used += inst.latencies()(r, levels[r]);
  }
  return Assignment(std::move(levels));
}

PlannerReport solve_cccp(const Instance& inst, const CccpOptions& options) {
  require_guard(inst);
  if (options.gamma_growth <= 1.0) throw Error(Errc::kInvalidArgument, "gamma_growth must exceed 1");
  if (options.restarts < 1) throw Error(Errc::kInvalidArgument, "at least one restart required");
  if (options.gamma_octaves < 1) throw Error(Errc::kInvalidArgument, "gamma_octaves must be positive");
  const double gamma0 = options.gamma0 > 0.0 ? options.gamma0 : default_gamma0(inst);

  std::optional<PlannerReport> best;
  int iterations = 0;
  for (int restart = 0; restart < options.restarts; ++restart) {
    FractionalPoint x = restart == 0
                            ? solve_lp_mck(inst, inst.losses()).x
                            : FractionalPoint::from_assignment(random_feasible_vertex(
                                  inst, mix_seed(options.seed, static_cast<std::uint64_t>(restart))));
    const int octave = restart % options.gamma_octaves;
    double gamma = gamma0 * std::exp2(octave - 0.5 * (options.gamma_octaves - 1));
    bool binary = false;
    for (int escalation = 0;; ++escalation) {
      auto descent = cccp_descent(inst, x, gamma, options.tol, options.max_iters);
      iterations += descent.iterations;
      x = std::move(descent.x);
      binary = x.is_binary(options.tol);
      if (binary || escalation >= options.max_escalations) break;
      gamma *= options.gamma_growth;
    }
    auto levels = round_to_feasible(inst, x, options.tol);
    const bool repaired = repair_to_budget(inst, levels);
    auto report = evaluate(inst, Assignment(std::move(levels)));
    report.gamma_final = gamma;
    report.converged = binary;
    report.repaired = repaired;
    if (!best || better_report(report, *best)) best = std::move(report);
  }
  best->iterations = iterations;
  best->restarts_used = options.restarts;
  return named(std::move(*best), "cccp");
}

FractionalPoint max_penalty_point(const Instance& inst) {
  require_guard(inst);
  Matrix uniform(inst.m(), kLevels, std::vector<double>(inst.m() * kLevels, 0.25));
  if (average_latency(inst, uniform) <= inst.tau()) {
    return FractionalPoint(std::move(uniform));
  }
  // The minimiser of sum ||x_m||^2 + mu (budget) is the simplex projection
  // of -mu T_m / (2M); its latency falls monotonically in mu.
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 2000 && average_latency(inst, min_norm_point(inst, hi)) > inst.tau(); ++i) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (average_latency(inst, min_norm_point(inst, mid)) > inst.tau()) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return FractionalPoint(min_norm_point(inst, hi));
}

double penalty_lower_bound(const Instance& inst, const FractionalPoint& x0) {
  if (x0.m() != inst.m()) throw Error(Errc::kDimensionMismatch, "starting point covers a different M");
  if (!within_budget(average_latency(inst, x0.x()), inst.tau())) {
    throw Error(Errc::kInfeasible, "starting point violates the latency budget");
  }
  double start_loss = 0.0;
  for (std::size_t r = 0; r < inst.m(); ++r) {
    for (std::size_t l = 0; l < kLevels; ++l) start_loss += x0.x()(r, l) * inst.losses()(r, l);
  }
  const double relaxed = solve_lp_mck(inst, inst.losses()).objective;
  const auto peak = max_penalty_point(inst);
  double denominator = 0.0;
  for (const double v : peak.x().data()) denominator += v * (1.0 - v);
  if (denominator <= 1e-12) throw Error(Errc::kDegenerateDenominator, "feasible set admits no fractional point");
  return std::max(0.0, start_loss - relaxed) / denominator;
}

PlannerReport solve_fixed_level(const Instance& inst, int level) {
  if (level < 1 || level > static_cast<int>(kLevels)) throw Error(Errc::kInvalidArgument, "level must be 1-4");
  auto report = evaluate(inst, Assignment::uniform(inst.m(), static_cast<std::size_t>(level - 1)));
  return named(std::move(report), "level" + std::to_string(level));
}

bool repair_to_budget(const Instance& inst, std::vector<std::uint8_t>& levels) {
  bool moved = false;
  while (!levels_within_budget(inst, levels)) {
    std::optional<std::size_t> pick;
    double pick_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < levels.size(); ++r) {
      const std::uint8_t target = fastest_level(inst, r);
      const double saved = inst.latencies()(r, levels[r]) - inst.latencies()(r, target);
      if (!(saved > 0.0)) continue;
      const double ratio = (inst.losses()(r, target) - inst.losses()(r, levels[r])) / saved;
      if (!pick || ratio < pick_ratio) {
        pick = r;
        pick_ratio = ratio;
      }
    }
    if (!pick) break;
    levels[*pick] = fastest_level(inst, *pick);
    moved = true;
  }
  return moved;
}

PlannerReport solve_linear_relaxation(const Instance& inst) {
  const auto lp = solve_lp_mck(inst, inst.losses());
  auto levels = lp.x.round().levels();
  const bool repaired = repair_to_budget(inst, levels);
  auto report = evaluate(inst, Assignment(std::move(levels)));
  report.repaired = repaired;
  report.iterations = 1;
  return named(std::move(report), "lp_relax");
}

Assignment lagrangian_pick(const Instance& inst, double mu) {
  const double scale = mu / static_cast<double>(inst.m());
  std::vector<std::uint8_t> levels(inst.m());
  for (std::size_t r = 0; r < inst.m(); ++r) {
    std::uint8_t best = 0;
    double best_value = inst.losses()(r, 0) + scale * inst.latencies()(r, 0);
    for (std::uint8_t l = 1; l < kLevels; ++l) {
      const double value = inst.losses()(r, l) + scale * inst.latencies()(r, l);
      if (value < best_value || (value == best_value && inst.latencies()(r, l) < inst.latencies()(r, best))) {
        best = l;
        best_value = value;
      }
    }
    levels[r] = best;
  }
  return Assignment(std::move(levels));
}

PlannerReport solve_lagrangian(const Instance& inst, double bisect_tol, int max_steps) {
  require_guard(inst);
  int steps = 1;
  auto best = evaluate(inst, lagrangian_pick(inst, 0.0));
  if (!best.feasible) {
    double lo = 0.0;
    double hi = 1.0;
    best = evaluate(inst, lagrangian_pick(inst, hi));
    while (!best.feasible) {
      if (hi > 1e300) throw Error(Errc::kInfeasible, "no multiplier reaches the budget");
      lo = hi;
      hi *= 2.0;
      best = evaluate(inst, lagrangian_pick(inst, hi));
      ++steps;
    }
    for (int i = 0; i < max_steps && hi - lo > bisect_tol * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      auto candidate = evaluate(inst, lagrangian_pick(inst, mid));
      ++steps;
      if (candidate.feasible) {
        hi = mid;
        if (better_report(candidate, best)) best = std::move(candidate);
      } else {
        lo = mid;
      }
    }
  }
  best.iterations = steps;
  return named(std::move(best), "lagrangian");
}

PlannerReport solve_brute_force(const Instance& inst) {
  const std::size_t m = inst.m();
  if (m > kBruteForceMaxRows) throw Error(Errc::kTooLarge, "brute force is capped at 12 samples");
  require_guard(inst);

  const auto& L = inst.losses();
  const auto& T = inst.latencies();
  std::vector<double> suffix_fast(m + 1, 0.0);
  std::vector<double> suffix_cheap(m + 1, 0.0);
  for (std::size_t r = m; r-- > 0;) {
    const auto lrow = L.row(r);
    const auto trow = T.row(r);
    suffix_fast[r] = suffix_fast[r + 1] + *std::min_element(trow.begin(), trow.end());
    suffix_cheap[r] = suffix_cheap[r + 1] + *std::min_element(lrow.begin(), lrow.end());
  }

  const double md = static_cast<double>(m);
  std::vector<std::uint8_t> current(m, 0);
  std::vector<std::uint8_t> best_levels;
  double best_loss = std::numeric_limits<double>::infinity();

  // Depth-first in lexicographic order; a strict improvement test keeps the
  // lexicographically smallest optimum.
  auto search = [&](auto&& self, std::size_t row, double loss, double lat) -> void {
    if (row == m) {
      if (within_budget(lat / md, inst.tau()) && loss < best_loss) {
        best_loss = loss;
        best_levels = current;
      }
      return;
    }
    for (std::uint8_t l = 0; l < kLevels; ++l) {
      const double lat_next = lat + T(row, l);
      if (!within_budget((lat_next + suffix_fast[row + 1]) / md, inst.tau())) continue;
      const double loss_next = loss + L(row, l);
      if (loss_next + suffix_cheap[row + 1] > best_loss + 1e-12 * (1.0 + best_loss)) continue;
      current[row] = l;
      self(self, row + 1, loss_next, lat_next);
    }
  };
  search(search, 0, 0.0, 0.0);
  if (best_levels.empty()) throw Error(Errc::kInfeasible, "no assignment meets the budget");
  auto report = evaluate(inst, Assignment(std::move(best_levels)));
  report.iterations = 1;
  return named(std::move(report), "brute_force");
}

Instance random_instance(std::size_t m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> loss(0.0, 1.0);
  std::uniform_real_distribution<double> lat(0.1, 1.0);
  std::uniform_real_distribution<double> where(0.2, 0.8);
  Matrix L(m, kLevels);
  Matrix T(m, kLevels);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t l = 0; l < kLevels; ++l) {
      L(r, l) = loss(rng);
      T(r, l) = lat(rng);
    }
  }
  const Instance loose(L, T, 1e300);
  const double floor = loose.min_average_latency();
  const double top = evaluate(loose, lagrangian_pick(loose, 0.0)).avg_latency;
  const double tau = floor + where(rng) * std::max(0.0, top - floor);
  return Instance(std::move(L), std::move(T), tau);
}

}  // namespace skbmlfx
