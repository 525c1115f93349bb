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

#include "skbmlfx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "skbmlfx/error.hpp"
#include "skbmlfx/kernels.hpp"

namespace skbmlfx {

namespace tol = linalg_tolerances;

namespace {

void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols()) throw Error(Errc::kDimensionMismatch, std::string(what) + " must be square");
}

void require_symmetric(const Matrix& a, const char* what) {
  require_square(a, what);
  double asym = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double d = a(i, j) - a(j, i);
      asym += 2.0 * d * d;
    }
  }
  if (std::sqrt(asym) > tol::kSymmetry * frobenius_norm(a)) {
    throw Error(Errc::kNotSymmetric, std::string(what) + " is not symmetric");
  }
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(s);
}

// Rotation (c, s) that annihilates the (p, q) entry given the diagonal pair;
// the smaller root of t^2 + 2 theta t - 1 = 0 keeps |angle| <= pi/4.
struct Rotation {
  double c;
  double s;
};

Rotation jacobi_rotation(double app, double aqq, double apq) {
  const double theta = (aqq - app) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  return {c, t * c};
}

// Flip v so that its largest-magnitude entry is non-negative. Entries within
// a relative 1e-10 of the maximum count as tied; the lowest index wins.
void canonicalize_sign(Matrix& vectors, std::size_t col) {
  const std::size_t n = vectors.rows();
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(vectors(i, col)));
  if (peak == 0.0) return;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(vectors(i, col)) >= peak * (1.0 - 1e-10)) {
      if (vectors(i, col) < 0.0) {
        for (std::size_t r = 0; r < n; ++r) vectors(r, col) = -vectors(r, col);
      }
      return;
    }
  }
}

// One-sided (Hestenes) Jacobi SVD of a tall matrix stored by columns:
// cols[j] is column j of W (m x n, m >= n). On return cols[j] = sigma_j u_j
// and right holds V with W = U Sigma V^T.
void hestenes_svd(std::vector<Vector>& cols, std::vector<Vector>& right) {
  const std::size_t n = cols.size();
  right.assign(n, Vector(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) right[j][j] = 1.0;

  constexpr double kOrthogonality = 1e-15;
  for (int sweep = 0; sweep < tol::kJacobiMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Vector& wi = cols[i];
        Vector& wj = cols[j];
        const double alpha = dot(wi, wi);
        const double beta = dot(wj, wj);
        const double gamma = dot(wi, wj);
        if (gamma == 0.0 || std::abs(gamma) <= kOrthogonality * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < wi.size(); ++k) {
          const double x = wi[k];
          const double y = wj[k];
          wi[k] = c * x - s * y;
          wj[k] = s * x + c * y;
        }
        Vector& vi = right[i];
        Vector& vj = right[j];
        for (std::size_t k = 0; k < n; ++k) {
          const double x = vi[k];
          const double y = vj[k];
          vi[k] = c * x - s * y;
          vj[k] = s * x + c * y;
        }
      }
    }
    if (!rotated) return;
  }
}

}  // namespace

EigenDecomposition eigh_sym(const Matrix& input) {
  require_finite(input, "eigh_sym input");
  require_symmetric(input, "eigh_sym input");
  const std::size_t n = input.rows();

  Matrix a = input;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = m;
      a(j, i) = m;
    }
  }
  Matrix v = Matrix::identity(n);
  const double norm = frobenius_norm(a);

  for (int sweep = 0; sweep < tol::kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tol::kJacobiOffDiagonal * norm) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const auto [c, s] = jacobi_rotation(a(p, p), a(q, q), apq);
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out{Vector(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    canonicalize_sign(out.vectors, j);
  }
  return out;
}

Matrix pinv(const Matrix& a) {
  require_finite(a, "pinv input");
  const bool tall = a.rows() >= a.cols();
  const Matrix w = tall ? a : transpose(a);  // m x n, m >= n
  const std::size_t m = w.rows();
  const std::size_t n = w.cols();

  std::vector<Vector> cols(n);
  for (std::size_t j = 0; j < n; ++j) cols[j] = w.col(j);
  std::vector<Vector> right;
  hestenes_svd(cols, right);

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(dot(cols[j], cols[j]));
  const double sigma_max = sigma.empty() ? 0.0 : *std::max_element(sigma.begin(), sigma.end());

  // w^+ = V Sigma^+ U^T, with U sigma = cols, so w^+ = sum_j v_j cols_j^T / sigma_j^2.
  Matrix wp(n, m);
  for (std::size_t j = 0; j < n; ++j) {
    if (sigma_max == 0.0 || sigma[j] < tol::kRank * sigma_max) continue;
    const double inv2 = 1.0 / (sigma[j] * sigma[j]);
    for (std::size_t r = 0; r < n; ++r) {
      const double vr = right[j][r] * inv2;
      if (vr == 0.0) continue;
      auto row = wp.row(r);
      for (std::size_t c = 0; c < m; ++c) row[c] += vr * cols[j][c];
    }
  }
  return tall ? wp : transpose(wp);
}

Matrix row_space_projection(const Matrix& v) {
  Matrix h = kernels::matmul(pinv(v), v);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = i + 1; j < h.cols(); ++j) {
      const double m = 0.5 * (h(i, j) + h(j, i));
      h(i, j) = m;
      h(j, i) = m;
    }
  }
  return h;
}

Matrix sylvester_spd(const Matrix& a, const Matrix& b, const Matrix& c) {
  require_finite(a, "sylvester a");
  require_finite(b, "sylvester b");
  require_finite(c, "sylvester c");
  require_symmetric(a, "sylvester a");
  require_symmetric(b, "sylvester b");
  if (c.rows() != a.rows() || c.cols() != b.rows()) {
    throw Error(Errc::kDimensionMismatch, "sylvester: c must be rows(a) x rows(b)");
  }
  const auto ea = eigh_sym(a);
  const auto eb = eigh_sym(b);
  const double eps = tol::kSingularPencil * (frobenius_norm(a) + frobenius_norm(b));

  Matrix y = kernels::matmul(kernels::matmul_tn(ea.vectors, c), eb.vectors);
  for (std::size_t i = 0; i < y.rows(); ++i) {
    for (std::size_t j = 0; j < y.cols(); ++j) {
      const double denom = ea.values[i] + eb.values[j];
      if (denom <= eps) throw Error(Errc::kSingularPencil, "coefficient spectra share a null direction");
      y(i, j) /= denom;
    }
  }
  return kernels::matmul_nt(kernels::matmul(ea.vectors, y), eb.vectors);
}

}  // namespace skbmlfx
