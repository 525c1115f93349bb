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

#include "skbmlfx/lossmodel.hpp"

#include <cstdint>

#include "skbmlfx/error.hpp"

namespace skbmlfx {

namespace {

void check_context(const PartyContext& party, std::size_t d_v, const char* who) {
  if (!party.model) throw Error(Errc::kInvalidArgument, std::string(who) + " has no model");
  const auto& m = *party.model;
  if (m.d_v != d_v) throw Error(Errc::kDimensionMismatch, std::string(who) + " model expects another d_v");
  if (m.d_s != party.skb.prototypes().dim()) {
    throw Error(Errc::kDimensionMismatch, std::string(who) + " model d_s differs from prototype dimension");
  }
  if (party.skb.size() == 0) throw Error(Errc::kEmptySkb, std::string(who) + " skb is empty");
}

}  // namespace

SampleMenu compute_menu(std::span<const double> v, const PartyContext& tx, const PartyContext& rx,
                        const ChannelParams& channel, double rate) {
  check_context(tx, v.size(), "transmitter");
  check_context(rx, v.size(), "receiver");
  const ExtractorModel& tm = *tx.model;
  const ExtractorModel& rm = *rx.model;
  if (tm.d_s != rm.d_s) throw Error(Errc::kDimensionMismatch, "parties disagree on d_s");
  const auto& rx_protos = rx.skb.prototypes();
  const auto& tx_protos = tx.skb.prototypes();

  const Vector tx_code = matvec(tm.p_v, v);
  const Vector rx_code = matvec(rm.p_v, v);
  const Vector s_level1 = matvec_transposed(rm.p_s, rx_code);
  const Vector s_level2 = matvec_transposed(rm.p_s, tx_code);
  const Vector s_tx = matvec_transposed(tm.p_s, tx_code);

  SampleMenu menu;
  const auto l1 = classify(s_level1, rx_protos, rx.skb.class_ids());
  const auto l2 = classify(s_level2, rx_protos, rx.skb.class_ids());
  const auto l3 = classify(s_tx, rx_protos, rx.skb.class_ids());
  const auto l4 = classify(s_tx, tx_protos, tx.skb.class_ids());

  menu.tx_estimate = l4.class_id;
  menu.rx_hit = indicator(rx.skb, l4.class_id);
  menu.losses = {l1.loss, l2.loss, l3.loss, l4.loss};
  menu.decisions = {l1.class_id, l2.class_id, l3.class_id, l4.class_id};
  const std::size_t level4_elements = menu.rx_hit ? 1 : tm.d_s;
  menu.latencies = {latency(tm.d_v, channel, rate), latency(tm.k, channel, rate), latency(tm.d_s, channel, rate),
                    latency(level4_elements, channel, rate)};
  return menu;
}

std::vector<SampleMenu> compute_menus(const Matrix& samples, const PartyContext& tx, const PartyContext& rx,
                                      const ChannelParams& channel, double rate) {
  const auto count = static_cast<std::int64_t>(samples.cols());
  std::vector<SampleMenu> menus(samples.cols());
  // Exceptions must not cross the OpenMP region; the first one is rethrown.
  std::exception_ptr failure;
#pragma omp parallel for schedule(static)
  for (std::int64_t m = 0; m < count; ++m) {
    try {
      const Vector v = samples.col(static_cast<std::size_t>(m));
      menus[static_cast<std::size_t>(m)] = compute_menu(v, tx, rx, channel, rate);
    } catch (...) {
#pragma omp critical(skbmlfx_menu_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return menus;
}

std::vector<SampleMenu> compute_menus_serial(const Matrix& samples, const PartyContext& tx, const PartyContext& rx,
                                             const ChannelParams& channel, double rate) {
  std::vector<SampleMenu> menus;
  menus.reserve(samples.cols());
  for (std::size_t m = 0; m < samples.cols(); ++m) {
    menus.push_back(compute_menu(samples.col(m), tx, rx, channel, rate));
  }
  return menus;
}

int effective_decision(const SampleMenu& menu, int level) {
  if (level < 1 || level > kLevelCount) throw Error(Errc::kInvalidArgument, "level must be 1-4");
  return menu.decisions[static_cast<std::size_t>(level - 1)];
}

}  // namespace skbmlfx
