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

#include "skbmlfx/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "skbmlfx/error.hpp"
#include "skbmlfx/random.hpp"

namespace skbmlfx {

namespace {

constexpr int kRejectionAttempts = 10000;

Matrix sample_prototypes(const SynthConfig& cfg, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> accepted;
  for (std::size_t c = 0; c < cfg.c_total; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < kRejectionAttempts && !placed; ++attempt) {
      Vector s(cfg.d_s);
      for (double& x : s) x = gauss(rng);
      const double norm = std::sqrt(dot(s, s));
      if (norm == 0.0) continue;
      for (double& x : s) x /= norm;
      const bool far = std::all_of(accepted.begin(), accepted.end(), [&](const Vector& other) {
        return std::sqrt(squared_distance(s, other)) >= kMinPrototypeDistance;
      });
      if (far) {
        accepted.push_back(std::move(s));
        placed = true;
      }
    }
    if (!placed) throw Error(Errc::kRejectionExhausted, "could not place distinct prototypes");
  }
  Matrix out(cfg.d_s, cfg.c_total);
  for (std::size_t c = 0; c < cfg.c_total; ++c) {
    for (std::size_t r = 0; r < cfg.d_s; ++r) out(r, c) = accepted[c][r];
  }
  return out;
}

void draw_visual(const Matrix& g, std::span<const double> s, double sigma, std::mt19937_64& rng,
                 std::normal_distribution<double>& gauss, Matrix& out, std::size_t col) {
  const Vector clean = matvec(g, s);
  for (std::size_t r = 0; r < clean.size(); ++r) out(r, col) = clean[r] + sigma * gauss(rng);
}

TrainingSet draw_training(const SynthConfig& cfg, const Matrix& g, const SemanticPrototypes& protos,
                          std::size_t first_class, std::size_t class_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = class_count * cfg.n_per_class;
  Matrix visual(cfg.d_v, n);
  std::vector<int> labels(n);
  std::size_t col = 0;
  for (std::size_t c = first_class; c < first_class + class_count; ++c) {
    for (std::size_t i = 0; i < cfg.n_per_class; ++i, ++col) {
      labels[col] = static_cast<int>(c);
      draw_visual(g, protos.column(c), cfg.noise_sigma, rng, gauss, visual, col);
    }
  }
  return TrainingSet(std::move(visual), std::move(labels), protos);
}

}  // namespace

void validate(const SynthConfig& cfg) {
  const std::size_t pool = std::max(cfg.c_seen_tx, cfg.c_seen_rx);
  if (cfg.c_seen_tx == 0 || cfg.c_seen_rx == 0) throw Error(Errc::kConfigInvalid, "each party needs seen classes");
  if (pool >= cfg.c_total) throw Error(Errc::kConfigInvalid, "no unseen classes left for zero-shot testing");
  if (cfg.d_v == 0 || cfg.d_s == 0) throw Error(Errc::kConfigInvalid, "feature dimensions must be positive");
  if (cfg.k_hint == 0 || cfg.k_hint > std::min(cfg.d_v, cfg.d_s)) {
    throw Error(Errc::kConfigInvalid, "k must lie in [1, min(d_v, d_s)]");
  }
  if (cfg.n_per_class == 0 || cfg.m_test == 0) throw Error(Errc::kConfigInvalid, "sample counts must be positive");
  if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma)) {
    throw Error(Errc::kConfigInvalid, "noise_sigma must be a finite non-negative value");
  }
}

GeneratedWorld generate(const SynthConfig& cfg) {
  validate(cfg);
  std::mt19937_64 proto_rng(mix_seed(cfg.seed, 1));
  std::vector<int> ids(cfg.c_total);
  std::iota(ids.begin(), ids.end(), 0);
  auto prototypes = std::make_shared<const SemanticPrototypes>(ids, sample_prototypes(cfg, proto_rng));

  std::mt19937_64 map_rng(mix_seed(cfg.seed, 2));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(cfg.d_v, cfg.d_s);
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.d_s));
  for (double& x : g.data()) x = scale * gauss(map_rng);

  const std::size_t pool = std::max(cfg.c_seen_tx, cfg.c_seen_rx);
  auto tx_train = draw_training(cfg, g, *prototypes, 0, cfg.c_seen_tx, mix_seed(cfg.seed, 3));
  auto rx_train = draw_training(cfg, g, *prototypes, pool - cfg.c_seen_rx, cfg.c_seen_rx, mix_seed(cfg.seed, 4));

  std::vector<int> unseen(ids.begin() + static_cast<std::ptrdiff_t>(pool), ids.end());
  Matrix unseen_vectors(cfg.d_s, unseen.size());
  for (std::size_t c = 0; c < unseen.size(); ++c) {
    const auto s = prototypes->column(static_cast<std::size_t>(unseen[c]));
    for (std::size_t r = 0; r < cfg.d_s; ++r) unseen_vectors(r, c) = s[r];
  }
  auto test_prototypes = std::make_shared<const SemanticPrototypes>(unseen, std::move(unseen_vectors));

  std::mt19937_64 test_rng(mix_seed(cfg.seed, 5));
  std::uniform_int_distribution<std::size_t> pick(0, unseen.size() - 1);
  std::normal_distribution<double> test_gauss(0.0, 1.0);
  Matrix test_visual(cfg.d_v, cfg.m_test);
  std::vector<int> test_labels(cfg.m_test);
  for (std::size_t m = 0; m < cfg.m_test; ++m) {
    const int c = unseen[pick(test_rng)];
    test_labels[m] = c;
    draw_visual(g, prototypes->column(static_cast<std::size_t>(c)), cfg.noise_sigma, test_rng, test_gauss, test_visual,
                m);
  }

  return GeneratedWorld{std::move(prototypes), std::move(test_prototypes), std::move(tx_train),
                        std::move(rx_train),   std::move(test_visual),     std::move(test_labels),
                        std::move(g)};
}

}  // namespace skbmlfx
