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

#include <memory>

#include "doctest.h"
#include "skbmlfx/data.hpp"
#include "skbmlfx/error.hpp"
#include "skbmlfx/extractor.hpp"
#include "skbmlfx/kernels.hpp"
#include "skbmlfx/lossmodel.hpp"

using namespace skbmlfx;

namespace {

struct Fixture {
  GeneratedWorld world;
  std::shared_ptr<const ExtractorModel> tx_model;
  std::shared_ptr<const ExtractorModel> rx_model;
  double rate;
};

Fixture make_fixture(std::uint64_t seed) {
  SynthConfig cfg;
  cfg.c_total = 20;
  cfg.c_seen_tx = 12;
  cfg.c_seen_rx = 12;
  cfg.d_v = 24;
  cfg.d_s = 10;
  cfg.n_per_class = 10;
  cfg.m_test = 16;
  cfg.seed = seed;
  auto world = generate(cfg);
  auto tx = std::make_shared<const ExtractorModel>(train_extractor(world.tx_train, 4, 1.0));
  auto rx = std::make_shared<const ExtractorModel>(train_extractor(world.rx_train, 4, 1.0));
  return {std::move(world), tx, rx, achievable_rate(ChannelParams{})};
}

PartyContext party(const Fixture& f, std::shared_ptr<const ExtractorModel> model, const SkbSelection& sel) {
  return {std::move(model), build_skb(f.world.test_prototypes, sel)};
}

// d_v = d_s = k = 2, identity encoders and decoders.
std::shared_ptr<const ExtractorModel> perfect_model() {
  const Matrix i2 = Matrix::identity(2);
  return std::make_shared<const ExtractorModel>(ExtractorModel{i2, i2, i2, i2, 2, 2, 2, 1.0});
}

}  // namespace

TEST_CASE("symmetric parties collapse levels 1-3") {
  const auto f = make_fixture(1);
  const auto ctx = party(f, f.tx_model, skb_selection::Full{});
  const ChannelParams ch;
  for (std::size_t m = 0; m < f.world.test_visual.cols(); ++m) {
    const auto menu = compute_menu(f.world.test_visual.col(m), ctx, ctx, ch, f.rate);
    CHECK(std::abs(menu.losses[0] - menu.losses[1]) <= 1e-12 * std::max(1.0, menu.losses[0]));
    CHECK(std::abs(menu.losses[1] - menu.losses[2]) <= 1e-12 * std::max(1.0, menu.losses[1]));
    CHECK(std::abs(menu.losses[3] - menu.losses[2]) <= 1e-12 * std::max(1.0, menu.losses[2]));
    CHECK(menu.decisions[0] == menu.decisions[1]);
    CHECK(menu.decisions[1] == menu.decisions[2]);
    CHECK(menu.decisions[2] == menu.decisions[3]);
    CHECK(menu.rx_hit == 1);
    CHECK(menu.latencies[3] == latency(1, ch, f.rate));
  }
}

TEST_CASE("latency ratios follow payload sizes") {
  const auto f = make_fixture(2);
  const auto tx = party(f, f.tx_model, skb_selection::Full{});
  const auto rx = party(f, f.rx_model, skb_selection::FirstK{3});
  const ChannelParams ch;
  const double q_over_r = static_cast<double>(ch.q_bits) / f.rate;
  for (std::size_t m = 0; m < f.world.test_visual.cols(); ++m) {
    const auto menu = compute_menu(f.world.test_visual.col(m), tx, rx, ch, f.rate);
    CHECK(menu.latencies[0] == latency(24, ch, f.rate));
    CHECK(menu.latencies[1] == latency(4, ch, f.rate));
    CHECK(menu.latencies[2] == latency(10, ch, f.rate));
    CHECK(menu.latencies[0] / menu.latencies[1] == doctest::Approx(24.0 / 4.0).epsilon(1e-14));
    CHECK(menu.latencies[2] / menu.latencies[1] == doctest::Approx(10.0 / 4.0).epsilon(1e-14));
    CHECK(menu.rx_hit == indicator(rx.skb, menu.tx_estimate));
    if (menu.rx_hit == 1) {
      CHECK(menu.latencies[3] == doctest::Approx(q_over_r).epsilon(1e-14));
    } else {
      CHECK(menu.latencies[3] == menu.latencies[2]);
    }
    for (const double l : menu.losses) CHECK(l >= 0.0);
    for (const double t : menu.latencies) CHECK(t > 0.0);
    for (int lv = 1; lv <= 3; ++lv) CHECK(rx.skb.contains(menu.decisions[lv - 1]));
    CHECK(effective_decision(menu, 4) == menu.tx_estimate);
  }
}

TEST_CASE("losses agree with recomputation on either side") {
  const auto f = make_fixture(3);
  const auto tx = party(f, f.tx_model, skb_selection::FirstK{6});
  const auto rx = party(f, f.rx_model, skb_selection::RandomK{5, 4});
  const ChannelParams ch;
  for (std::size_t m = 0; m < f.world.test_visual.cols(); ++m) {
    const Vector v = f.world.test_visual.col(m);
    const auto menu = compute_menu(v, tx, rx, ch, f.rate);
    const Vector code = matvec(f.tx_model->p_v, v);
    const auto l2 = classify(matvec_transposed(f.rx_model->p_s, code), *f.world.test_prototypes, rx.skb.class_ids());
    CHECK(menu.losses[1] == doctest::Approx(l2.loss).epsilon(1e-12));
    CHECK(menu.decisions[1] == l2.class_id);
    const Vector s_tx = extract(*f.tx_model, v, 3);
    const auto l3 = classify(s_tx, *f.world.test_prototypes, rx.skb.class_ids());
    CHECK(menu.losses[2] == doctest::Approx(l3.loss).epsilon(1e-12));
    const auto l4 = classify(s_tx, *f.world.test_prototypes, tx.skb.class_ids());
    CHECK(menu.tx_estimate == l4.class_id);
    CHECK(menu.losses[3] == doctest::Approx(l4.loss).epsilon(1e-12));
    const auto l1 = classify(extract(*f.rx_model, v, 3), *f.world.test_prototypes, rx.skb.class_ids());
    CHECK(menu.losses[0] == doctest::Approx(l1.loss).epsilon(1e-12));
  }
}

TEST_CASE("orthogonal two-class hand case") {
  auto protos = std::make_shared<const SemanticPrototypes>(std::vector<int>{1, 2}, Matrix::identity(2));
  const auto model = perfect_model();
  const PartyContext tx{model, build_skb(protos, skb_selection::Full{})};
  const PartyContext rx{model, build_skb(protos, skb_selection::Explicit{{2}})};
  ChannelParams ch;
  ch.q_bits = 2;
  const auto menu = compute_menu(Vector{1.0, 0.0}, tx, rx, ch, 8.0);
  CHECK(menu.losses[0] == doctest::Approx(2.0));
  CHECK(menu.decisions[0] == 2);
  CHECK(menu.losses[3] == 0.0);
  CHECK(menu.tx_estimate == 1);
  CHECK(menu.rx_hit == 0);
  CHECK(menu.latencies[3] == latency(2, ch, 8.0));
  CHECK(effective_decision(menu, 4) == 1);
  CHECK(effective_decision(menu, 1) == 2);
  // Receiver stores the transmitter's class: a single element goes out.
  const PartyContext rx_full{model, build_skb(protos, skb_selection::Full{})};
  const auto hit = compute_menu(Vector{1.0, 0.0}, tx, rx_full, ch, 8.0);
  CHECK(hit.rx_hit == 1);
  CHECK(hit.latencies[3] == 0.25);
  CHECK(effective_decision(hit, 1) == 1);
  CHECK_THROWS_AS(effective_decision(hit, 0), Error);
  CHECK_THROWS_AS(effective_decision(hit, 5), Error);
}

TEST_CASE("menu preconditions") {
  const auto f = make_fixture(4);
  const auto ctx = party(f, f.tx_model, skb_selection::Full{});
  CHECK_THROWS_AS(compute_menu(Vector(3, 0.0), ctx, ctx, ChannelParams{}, f.rate), Error);
  CHECK_THROWS_AS(compute_menu(f.world.test_visual.col(0), ctx, ctx, ChannelParams{}, 0.0), Error);
  const PartyContext no_model{nullptr, ctx.skb};
  CHECK_THROWS_AS(compute_menu(f.world.test_visual.col(0), no_model, ctx, ChannelParams{}, f.rate), Error);
}

TEST_CASE("parallel menus equal the serial reference") {
  const auto f = make_fixture(5);
  const auto tx = party(f, f.tx_model, skb_selection::Full{});
  const auto rx = party(f, f.rx_model, skb_selection::FirstK{4});
  const auto serial = compute_menus_serial(f.world.test_visual, tx, rx, ChannelParams{}, f.rate);
  for (const int workers : {1, 2, 4}) {
    kernels::set_worker_count(workers);
    const auto par = compute_menus(f.world.test_visual, tx, rx, ChannelParams{}, f.rate);
    REQUIRE(par.size() == serial.size());
    for (std::size_t m = 0; m < par.size(); ++m) {
      CHECK(par[m].losses == serial[m].losses);
      CHECK(par[m].latencies == serial[m].latencies);
      CHECK(par[m].decisions == serial[m].decisions);
    }
  }
}
