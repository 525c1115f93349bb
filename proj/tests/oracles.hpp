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

// Independent reference computations for the test suites. Nothing here
// calls the library routine it is meant to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "skbmlfx/matrix.hpp"
#include "skbmlfx/planner.hpp"

namespace oracle {

using skbmlfx::Matrix;

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Matrix m(rows, cols);
  for (double& x : m.data()) x = gauss(rng);
  return m;
}

inline Matrix naive_mul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

inline Matrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  const Matrix g = random_matrix(n, n, rng);
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) s(i, j) = 0.5 * (g(i, j) + g(j, i));
  }
  return s;
}

// G G^T + shift I.
inline Matrix random_spd(std::size_t n, std::mt19937_64& rng, double shift = 0.1) {
  const Matrix g = random_matrix(n, n, rng);
  Matrix s = naive_mul(g, skbmlfx::transpose(g));
  for (std::size_t i = 0; i < n; ++i) s(i, i) += shift;
  return s;
}

// Rows orthonormal, via modified Gram-Schmidt on Gaussian rows.
inline Matrix random_orthonormal_rows(std::size_t k, std::size_t n, std::mt19937_64& rng) {
  Matrix q = random_matrix(k, n, rng);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double d = 0.0;
      for (std::size_t c = 0; c < n; ++c) d += q(i, c) * q(j, c);
      for (std::size_t c = 0; c < n; ++c) q(i, c) -= d * q(j, c);
    }
    double norm = 0.0;
    for (std::size_t c = 0; c < n; ++c) norm += q(i, c) * q(i, c);
    norm = std::sqrt(norm);
    for (std::size_t c = 0; c < n; ++c) q(i, c) /= norm;
  }
  return q;
}

// Dense Gaussian elimination with partial pivoting; a is n x n.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
    x[i] = s / a[i * n + i];
  }
  return x;
}

// a X + X b = c through the Kronecker system (I (x) a + b^T (x) I) vec(X) = vec(c),
// vec stacking columns.
inline Matrix kronecker_sylvester(const Matrix& a, const Matrix& b, const Matrix& c) {
  const std::size_t p = a.rows();
  const std::size_t q = b.rows();
  const std::size_t n = p * q;
  std::vector<double> k(n * n, 0.0);
  std::vector<double> rhs(n);
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      const std::size_t row = j * p + i;
      rhs[row] = c(i, j);
      for (std::size_t t = 0; t < p; ++t) k[row * n + j * p + t] += a(i, t);
      for (std::size_t t = 0; t < q; ++t) k[row * n + t * p + i] += b(t, j);
    }
  }
  const auto x = solve_dense(std::move(k), std::move(rhs), n);
  Matrix out(p, q);
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t i = 0; i < p; ++i) out(i, j) = x[j * p + i];
  }
  return out;
}

// Optimum of the relaxed multi-choice knapsack by enumerating the vertices
// of {rows on the simplex, (1/M) sum T x <= tau}: every feasible binary
// point, plus every point where one row splits between two levels so the
// budget holds with equality.
inline double lp_by_vertices(const skbmlfx::Instance& inst, const Matrix& costs) {
  const std::size_t m = inst.m();
  const double budget = inst.tau() * static_cast<double>(m);
  std::size_t total = 1;
  for (std::size_t r = 0; r < m; ++r) total *= 4;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> lv(m);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double t = 0.0;
    double cost = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      lv[r] = c % 4;
      c /= 4;
      t += inst.latencies()(r, lv[r]);
      cost += costs(r, lv[r]);
    }
    if (t <= budget * (1.0 + 1e-12)) best = std::min(best, cost);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t alt = 0; alt < 4; ++alt) {
        if (alt == lv[r]) continue;
        const double t_here = inst.latencies()(r, lv[r]);
        const double t_alt = inst.latencies()(r, alt);
        if (t_here == t_alt) continue;
        // Weight theta on alt meets the budget with equality.
        const double theta = (budget - t) / (t_alt - t_here);
        if (theta <= 0.0 || theta >= 1.0) continue;
        best = std::min(best, cost + theta * (costs(r, alt) - costs(r, lv[r])));
      }
    }
  }
  return best;
}

// Exhaustive integer optimum of the average loss, independent of the
// library's pruned search.
inline double brute_force_loss(const skbmlfx::Instance& inst) {
  const std::size_t m = inst.m();
  std::size_t total = 1;
  for (std::size_t r = 0; r < m; ++r) total *= 4;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    double t = 0.0;
    double l = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      t += inst.latencies()(r, c % 4);
      l += inst.losses()(r, c % 4);
      c /= 4;
    }
    if (skbmlfx::within_budget(t / static_cast<double>(m), inst.tau())) best = std::min(best, l / static_cast<double>(m));
  }
  return best;
}

}  // namespace oracle
