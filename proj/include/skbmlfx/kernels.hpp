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

// Dense products used by training and evaluation. The default namespace
// holds the OpenMP versions; kernels::serial keeps the plain loops as the
// reference. Both compute each output entry with the same summation order,
// so results are bit-identical regardless of thread count.
namespace skbmlfx::kernels {

Matrix matmul(const Matrix& a, const Matrix& b);     // a b
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a^T b
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a b^T

// Upper bound on OpenMP threads; 0 leaves the runtime default.
void set_worker_count(int workers);
int worker_count();

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);

}  // namespace serial

}  // namespace skbmlfx::kernels
