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
#include <string>
#include <vector>

#include "skbmlfx/matrix.hpp"

namespace skbmlfx {

inline constexpr std::size_t kLevels = 4;

// Average-latency comparisons allow 1e-9 slack, relative once tau exceeds 1.
bool within_budget(double avg_latency, double tau);

// Multi-choice knapsack instance: M samples, each choosing one of four
// levels with loss L and latency T, under average latency budget tau.
class Instance {
 public:
  Instance(Matrix losses, Matrix latencies, double tau);

  std::size_t m() const noexcept { return losses_.rows(); }
  const Matrix& losses() const noexcept { return losses_; }
  const Matrix& latencies() const noexcept { return latencies_; }
  double tau() const noexcept { return tau_; }

  // (1/M) sum_m min_l T_{m,l}; solvers other than the fixed-level baseline
  // need it to be within tau.
  double min_average_latency() const;
  bool guard_satisfied() const { return within_budget(min_average_latency(), tau_); }

 private:
  Matrix losses_;
  Matrix latencies_;
  double tau_;
};

// One level per sample, stored as 0-based level indices.
class Assignment {
 public:
  explicit Assignment(std::vector<std::uint8_t> levels);
  static Assignment uniform(std::size_t m, std::size_t level_index);
  // Accepts an M x 4 0/1 matrix with exactly one 1 per row.
  static Assignment from_matrix(const Matrix& x);

  std::size_t m() const noexcept { return levels_.size(); }
  std::size_t level_index(std::size_t row) const { return levels_[row]; }
  const std::vector<std::uint8_t>& levels() const noexcept { return levels_; }
  Matrix to_matrix() const;

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<std::uint8_t> levels_;
};

// Relaxed point: entries in [0, 1], rows summing to one.
class FractionalPoint {
 public:
  explicit FractionalPoint(Matrix x);
  static FractionalPoint from_assignment(const Assignment& a);

  const Matrix& x() const noexcept { return x_; }
  std::size_t m() const noexcept { return x_.rows(); }
  bool is_binary(double tol = 1e-9) const;
  // Per-row argmax, ties to the lower level.
  Assignment round() const;

 private:
  Matrix x_;
};

struct PlannerReport {
  std::string planner;
  Assignment assignment{std::vector<std::uint8_t>{}};
  double avg_loss = 0.0;
  double avg_latency = 0.0;
  bool feasible = false;
  int iterations = 0;
  int restarts_used = 0;
  double gamma_final = 0.0;
  bool repaired = false;   // budget repair rewrote the rounded point
  bool converged = true;   // false when gamma escalation hit its cap
};

// Average loss and latency of an assignment, with the budget check.
PlannerReport evaluate(const Instance& inst, const Assignment& a);

struct LpSolution {
  FractionalPoint x;
  double objective;   // sum_{m,l} c_{m,l} x_{m,l}
  double multiplier;  // budget multiplier mu at the optimum
};

// min sum c x  s.t. (1/M) sum T x <= tau, rows on the simplex. Each row's
// options are reduced to the lower convex hull of (T, c); starting from the
// cheapest-cost vertex of every row, latency is bought back greedily in
// order of cost per unit of latency saved, which is the parametric sweep of
// the budget multiplier. The result is a vertex with at most one fractional
// row, split between two adjacent hull levels.
LpSolution solve_lp_mck(const Instance& inst, const Matrix& costs);

struct CccpOptions {
  double gamma0 = 0.0;  // <= 0 selects default_gamma0(inst)
  double gamma_growth = 2.0;
  int restarts = 512;
  // Restart r starts at gamma0 * 2^((r mod gamma_octaves) - (gamma_octaves - 1) / 2),
  // so successive restarts probe penalty weights an octave apart.
  int gamma_octaves = 5;
  double tol = 1e-9;
  int max_iters = 200;
  std::uint64_t seed = 0;
  int max_escalations = 20;
};

// Initial penalty weight scaled to the instance: a tenth of the mean per-row
// loss spread (max_l L - min_l L), or 1e-3 when every row is flat.
double default_gamma0(const Instance& inst);

// Penalised objective sum x L + gamma sum x (1 - x).
double penalized_objective(const Instance& inst, const Matrix& x, double gamma);

struct CccpDescent {
  FractionalPoint x;
  int iterations = 0;
  std::vector<double> objectives;  // penalised objective after each LP step, starting at x0
};

// CCCP iterations at fixed gamma: x <- argmin_LP (L + gamma (1 - 2 x)).
CccpDescent cccp_descent(const Instance& inst, const FractionalPoint& x0, double gamma, double tol, int max_iters);

// Full CCCP planner: restart 0 starts from the LP relaxation, later restarts
// from seeded random feasible vertices. Each restart escalates gamma until
// the limit point is binary. A limit stuck on a fractional vertex is rounded
// by argmax and, if that breaks the budget, its fractional row takes the
// faster of its two levels. The best binary point by average loss is
// returned (equal losses prefer lower latency).
PlannerReport solve_cccp(const Instance& inst, const CccpOptions& options = {});

// Random vertex keeping the budget satisfiable row by row.
Assignment random_feasible_vertex(const Instance& inst, std::uint64_t seed);

// Point maximising sum x (1 - x) over the relaxed feasible set.
FractionalPoint max_penalty_point(const Instance& inst);

// Exact-penalty threshold estimate (sum x0 L - LP optimum) / max sum x (1 - x).
double penalty_lower_bound(const Instance& inst, const FractionalPoint& x0);

PlannerReport solve_fixed_level(const Instance& inst, int level);
PlannerReport solve_linear_relaxation(const Instance& inst);
PlannerReport solve_lagrangian(const Instance& inst, double bisect_tol = 1e-12, int max_steps = 200);
PlannerReport solve_brute_force(const Instance& inst);

// Per-row pick of the Lagrangian relaxation at multiplier mu.
Assignment lagrangian_pick(const Instance& inst, double mu);

// Moves rows to their lowest-latency level, cheapest loss increase per unit
// of latency saved first, until the budget holds. Returns whether any row
// moved.
bool repair_to_budget(const Instance& inst, std::vector<std::uint8_t>& levels);

inline constexpr std::size_t kBruteForceMaxRows = 12;

// Seeded instance with L ~ U[0, 1], T ~ U[0.1, 1] and a budget that binds:
// tau lies between the latency floor and the latency of the per-row loss
// minimisers.
Instance random_instance(std::size_t m, std::uint64_t seed);

}  // namespace skbmlfx
