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

#include "skbmlfx/kernels.hpp"

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "skbmlfx/error.hpp"

namespace skbmlfx::kernels {

namespace {

// Below this many multiply-adds the fork/join overhead dominates.
constexpr std::int64_t kParallelThreshold = 1 << 15;

bool worth_parallel(std::size_t m, std::size_t n, std::size_t k) {
  return static_cast<std::int64_t>(m) * static_cast<std::int64_t>(n) * static_cast<std::int64_t>(k) >=
         kParallelThreshold;
}

}  // namespace

void set_worker_count(int workers) {
#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif
}

int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::kDimensionMismatch, "matmul: inner dimensions differ");
  const auto m = static_cast<std::int64_t>(a.rows());
  const std::size_t n = b.cols();
  const std::size_t inner = a.cols();
  Matrix c(a.rows(), n);
#pragma omp parallel for schedule(static) if (worth_parallel(a.rows(), n, inner))
  for (std::int64_t i = 0; i < m; ++i) {
    auto ci = c.row(static_cast<std::size_t>(i));
    const auto ai = a.row(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < inner; ++k) {
      const double aik = ai[k];
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw Error(Errc::kDimensionMismatch, "matmul_tn: row counts differ");
  const auto m = static_cast<std::int64_t>(a.cols());
  const std::size_t n = b.cols();
  const std::size_t inner = a.rows();
  Matrix c(a.cols(), n);
#pragma omp parallel for schedule(static) if (worth_parallel(a.cols(), n, inner))
  for (std::int64_t i = 0; i < m; ++i) {
    auto ci = c.row(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < inner; ++k) {
      const double aki = a(k, static_cast<std::size_t>(i));
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < n; ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw Error(Errc::kDimensionMismatch, "matmul_nt: column counts differ");
  const auto m = static_cast<std::int64_t>(a.rows());
  const std::size_t n = b.rows();
  const std::size_t inner = a.cols();
  Matrix c(a.rows(), n);
#pragma omp parallel for schedule(static) if (worth_parallel(a.rows(), n, inner))
  for (std::int64_t i = 0; i < m; ++i) {
    const auto ai = a.row(static_cast<std::size_t>(i));
    auto ci = c.row(static_cast<std::size_t>(i));
    for (std::size_t j = 0; j < n; ++j) {
      const auto bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < inner; ++k) s += ai[k] * bj[k];
      ci[j] = s;
    }
  }
  return c;
}

}  // namespace skbmlfx::kernels
