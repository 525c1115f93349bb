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

#include "skbmlfx/extractor.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "skbmlfx/error.hpp"
#include "skbmlfx/kernels.hpp"
#include "skbmlfx/linalg.hpp"

namespace skbmlfx {

SemanticPrototypes::SemanticPrototypes(std::vector<int> class_ids, Matrix vectors)
    : class_ids_(std::move(class_ids)), vectors_(std::move(vectors)) {
  if (class_ids_.size() != vectors_.cols()) {
    throw Error(Errc::kDimensionMismatch, "one prototype column per class id expected");
  }
  if (std::set<int>(class_ids_.begin(), class_ids_.end()).size() != class_ids_.size()) {
    throw Error(Errc::kDuplicateIds, "prototype class ids must be unique");
  }
  require_finite(vectors_, "prototypes");
  columns_.reserve(class_ids_.size());
  for (std::size_t c = 0; c < class_ids_.size(); ++c) columns_.push_back(vectors_.col(c));
}

std::optional<std::size_t> SemanticPrototypes::index_of(int class_id) const {
  const auto it = std::find(class_ids_.begin(), class_ids_.end(), class_id);
  if (it == class_ids_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - class_ids_.begin());
}

std::span<const double> SemanticPrototypes::vector_of(int class_id) const {
  const auto idx = index_of(class_id);
  if (!idx) throw Error(Errc::kUnknownClass, "class " + std::to_string(class_id) + " has no prototype");
  return columns_[*idx];
}

TrainingSet::TrainingSet(Matrix visual, std::vector<int> labels, const SemanticPrototypes& prototypes)
    : visual_(std::move(visual)), labels_(std::move(labels)), semantic_(prototypes.dim(), visual_.cols()) {
  if (labels_.size() != visual_.cols()) {
    throw Error(Errc::kDimensionMismatch, "one label per visual column expected");
  }
  require_finite(visual_, "visual features");
  for (std::size_t n = 0; n < labels_.size(); ++n) {
    const auto s = prototypes.vector_of(labels_[n]);
    for (std::size_t r = 0; r < s.size(); ++r) semantic_(r, n) = s[r];
  }
}

IntermediateMap train_intermediate(const TrainingSet& train, std::size_t k) {
  const Matrix& v = train.visual();
  const Matrix& s = train.semantic();
  if (k < 1 || k > std::min(train.visual_dim(), train.semantic_dim()) || train.samples() < k) {
    throw Error(Errc::kDimensionMismatch, "k must satisfy 1 <= k <= min(d_v, d_s) and k <= N");
  }

  const Matrix h = row_space_projection(v);
  Matrix m = kernels::matmul_nt(kernels::matmul(s, h), s);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = avg;
      m(j, i) = avg;
    }
  }
  const auto eig = eigh_sym(m);

  Matrix w_s(k, s.rows());
  double objective = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < s.rows(); ++c) w_s(r, c) = eig.vectors(c, r);
    objective += eig.values[r];
  }
  Matrix f = kernels::matmul(w_s, s);
  Matrix w_v = kernels::matmul(f, pinv(v));
  return {std::move(w_s), std::move(w_v), std::move(f), objective};
}

Matrix train_autoencoder(const Matrix& x, const Matrix& f, double lambda) {
  if (x.cols() != f.cols()) throw Error(Errc::kDimensionMismatch, "autoencoder: sample counts differ");
  if (!(lambda > 0.0)) throw Error(Errc::kInvalidArgument, "autoencoder: lambda must be positive");
  const Matrix ff = kernels::matmul_nt(f, f);
  const Matrix xx = lambda * kernels::matmul_nt(x, x);
  const Matrix rhs = (1.0 + lambda) * kernels::matmul_nt(f, x);
  return sylvester_spd(ff, xx, rhs);
}

Matrix train_visual_ae(const Matrix& v, const Matrix& f, double lambda) { return train_autoencoder(v, f, lambda); }

Matrix train_semantic_ae(const Matrix& s, const Matrix& f, double lambda) { return train_autoencoder(s, f, lambda); }

ExtractorModel train_extractor(const TrainingSet& train, std::size_t k, double lambda) {
  auto inter = train_intermediate(train, k);
  ExtractorModel model{
      .w_s = std::move(inter.w_s),
      .w_v = std::move(inter.w_v),
      .p_v = train_visual_ae(train.visual(), inter.f, lambda),
      .p_s = train_semantic_ae(train.semantic(), inter.f, lambda),
      .k = k,
      .d_v = train.visual_dim(),
      .d_s = train.semantic_dim(),
      .lambda = lambda,
  };
  return model;
}

Vector extract(const ExtractorModel& model, std::span<const double> v, int level) {
  if (v.size() != model.d_v) throw Error(Errc::kDimensionMismatch, "extract: visual feature length");
  switch (level) {
    case 1: return Vector(v.begin(), v.end());
    case 2: return matvec(model.p_v, v);
    case 3: return matvec_transposed(model.p_s, matvec(model.p_v, v));
    default: throw Error(Errc::kInvalidArgument, "extract: level must be 1, 2 or 3");
  }
}

Classification classify(std::span<const double> s, const SemanticPrototypes& prototypes,
                        std::span<const int> allowed) {
  if (allowed.empty()) throw Error(Errc::kEmptyAllowedSet, "classify: no candidate classes");
  if (s.size() != prototypes.dim()) throw Error(Errc::kDimensionMismatch, "classify: semantic length");
  Classification best{-1, std::numeric_limits<double>::infinity()};
  for (const int c : allowed) {
    const double d = squared_distance(prototypes.vector_of(c), s);
    if (d < best.loss || (d == best.loss && c < best.class_id)) best = {c, d};
  }
  return best;
}

}  // namespace skbmlfx
