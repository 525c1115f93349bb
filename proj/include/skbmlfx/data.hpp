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
#include <memory>
#include <vector>

#include "skbmlfx/extractor.hpp"

namespace skbmlfx {

// Synthetic zero-shot world. Classes 0..c_total-1 are split so that the
// transmitter trains on the first c_seen_tx classes, the receiver on the
// last c_seen_rx classes of the first max(c_seen_tx, c_seen_rx), and every
// remaining class is unseen and used only for test samples.
struct SynthConfig {
  std::size_t c_total = 50;
  std::size_t c_seen_tx = 40;
  std::size_t c_seen_rx = 40;
  std::size_t d_v = 64;
  std::size_t d_s = 16;
  std::size_t k_hint = 8;
  std::size_t n_per_class = 40;
  std::size_t m_test = 64;
  double noise_sigma = 0.05;
  std::uint64_t seed = 0;
};

struct GeneratedWorld {
  std::shared_ptr<const SemanticPrototypes> prototypes;       // every class
  std::shared_ptr<const SemanticPrototypes> test_prototypes;  // unseen classes only
  TrainingSet tx_train;
  TrainingSet rx_train;
  Matrix test_visual;  // d_v x m_test
  std::vector<int> test_labels;
  Matrix ground_truth_map;  // d_v x d_s
};

void validate(const SynthConfig& cfg);

// Unit-norm prototypes at least 0.1 apart, a Gaussian map G scaled by
// 1/sqrt(d_s), and samples v = G s_c + noise_sigma * N(0, I).
GeneratedWorld generate(const SynthConfig& cfg);

inline constexpr double kMinPrototypeDistance = 0.1;

}  // namespace skbmlfx
