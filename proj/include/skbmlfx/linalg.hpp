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

#include "skbmlfx/matrix.hpp"

namespace skbmlfx {

struct EigenDecomposition {
  Vector values;   // non-increasing
  Matrix vectors;  // column j pairs with values[j]
};

// Cyclic Jacobi eigensolver for symmetric matrices. Each eigenvector is
// signed so that its largest-magnitude entry (lowest index among ties) is
// non-negative.
EigenDecomposition eigh_sym(const Matrix& a);

// Moore-Penrose pseudo-inverse; singular values below 1e-10 * sigma_max are
// treated as zero.
Matrix pinv(const Matrix& a);

// Orthogonal projector onto the row space of v: pinv(v) * v.
Matrix row_space_projection(const Matrix& v);

// Solves a X + X b = c for symmetric positive semidefinite a (p x p) and
// b (q x q) through the eigenbases of both coefficients.
Matrix sylvester_spd(const Matrix& a, const Matrix& b, const Matrix& c);

namespace linalg_tolerances {
inline constexpr double kSymmetry = 1e-10;
inline constexpr double kJacobiOffDiagonal = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kRank = 1e-10;
inline constexpr double kSingularPencil = 1e-12;
}  // namespace linalg_tolerances

}  // namespace skbmlfx
