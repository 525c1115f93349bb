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

// Serial reference vs OpenMP kernels: dense products and per-sample menus.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "skbmlfx/channel.hpp"
#include "skbmlfx/data.hpp"
#include "skbmlfx/kernels.hpp"
#include "skbmlfx/lossmodel.hpp"

namespace {

using namespace skbmlfx;

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Matrix m(rows, cols);
  for (double& x : m.data()) x = gauss(rng);
  return m;
}

void BM_MatmulSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, n, 1);
  const Matrix b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

void BM_MatmulParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, n, 1);
  const Matrix b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::matmul(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

struct MenuFixture {
  GeneratedWorld world;
  PartyContext tx;
  PartyContext rx;
  ChannelParams channel;
  double rate;

  static MenuFixture make(std::size_t m_test) {
    SynthConfig cfg;
    cfg.m_test = m_test;
    auto world = generate(cfg);
    auto model = std::make_shared<const ExtractorModel>(train_extractor(world.tx_train, cfg.k_hint, 1.0));
    PartyContext tx{model, build_skb(world.test_prototypes, skb_selection::Full{})};
    PartyContext rx{model, build_skb(world.test_prototypes, skb_selection::Full{})};
    ChannelParams channel;
    const double rate = achievable_rate(channel);
    return {std::move(world), std::move(tx), std::move(rx), channel, rate};
  }
};

void BM_MenusSerial(benchmark::State& state) {
  const auto f = MenuFixture::make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_menus_serial(f.world.test_visual, f.tx, f.rx, f.channel, f.rate));
}

void BM_MenusParallel(benchmark::State& state) {
  const auto f = MenuFixture::make(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(compute_menus(f.world.test_visual, f.tx, f.rx, f.channel, f.rate));
}

}  // namespace

BENCHMARK(BM_MatmulSerial)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_MatmulParallel)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_MenusSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_MenusParallel)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
