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
#include <optional>
#include <span>
#include <vector>

#include "skbmlfx/matrix.hpp"

namespace skbmlfx {

// Per-class semantic vectors; column c of vectors() belongs to class_ids()[c].
class SemanticPrototypes {
 public:
  SemanticPrototypes(std::vector<int> class_ids, Matrix vectors);

  const std::vector<int>& class_ids() const noexcept { return class_ids_; }
  const Matrix& vectors() const noexcept { return vectors_; }
  std::size_t dim() const noexcept { return vectors_.rows(); }
  std::size_t count() const noexcept { return class_ids_.size(); }

  std::optional<std::size_t> index_of(int class_id) const;
  bool contains(int class_id) const { return index_of(class_id).has_value(); }
  // Throws kUnknownClass for ids outside the set.
  std::span<const double> vector_of(int class_id) const;
  std::span<const double> column(std::size_t index) const { return columns_[index]; }

 private:
  std::vector<int> class_ids_;
  Matrix vectors_;
  std::vector<Vector> columns_;
};

// (V, C, S): visual features, labels, and the label prototypes stacked as
// the semantic matrix.
class TrainingSet {
 public:
  TrainingSet(Matrix visual, std::vector<int> labels, const SemanticPrototypes& prototypes);

  const Matrix& visual() const noexcept { return visual_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  const Matrix& semantic() const noexcept { return semantic_; }
  std::size_t samples() const noexcept { return labels_.size(); }
  std::size_t visual_dim() const noexcept { return visual_.rows(); }
  std::size_t semantic_dim() const noexcept { return semantic_.rows(); }

 private:
  Matrix visual_;
  std::vector<int> labels_;
  Matrix semantic_;
};

struct ExtractorModel {
  Matrix w_s;  // k x d_s, orthonormal rows
  Matrix w_v;  // k x d_v
  Matrix p_v;  // k x d_v, visual encoder
  Matrix p_s;  // k x d_s, semantic encoder (decoder is its transpose)
  std::size_t k = 0;
  std::size_t d_v = 0;
  std::size_t d_s = 0;
  double lambda = 1.0;

  bool operator==(const ExtractorModel&) const = default;
};

struct IntermediateMap {
  Matrix w_s;
  Matrix w_v;
  Matrix f;
  double objective = 0.0;  // trace(w_s S H S^T w_s^T)
};

// Shared k-dimensional space for visual and semantic features: W_s holds
// the top-k eigenvectors of S H S^T with H the row-space projector of V,
// W_v = W_s S pinv(V) is the least-squares visual map and F = W_s S.
IntermediateMap train_intermediate(const TrainingSet& train, std::size_t k);

// Linear autoencoder tied to the intermediate code F: solves
//   F F^T P + lambda P X X^T = (1 + lambda) F X^T
// for P (k x rows(X)).
Matrix train_autoencoder(const Matrix& x, const Matrix& f, double lambda);
Matrix train_visual_ae(const Matrix& v, const Matrix& f, double lambda);
Matrix train_semantic_ae(const Matrix& s, const Matrix& f, double lambda);

ExtractorModel train_extractor(const TrainingSet& train, std::size_t k, double lambda);

// Level 1 returns v, level 2 the intermediate code P_v v, level 3 the
// semantic estimate P_s^T P_v v.
Vector extract(const ExtractorModel& model, std::span<const double> v, int level);

struct Classification {
  int class_id = -1;
  double loss = 0.0;  // squared distance to the chosen prototype
};

// Nearest prototype among `allowed`; ties go to the lowest class id.
Classification classify(std::span<const double> s, const SemanticPrototypes& prototypes,
                        std::span<const int> allowed);

}  // namespace skbmlfx
