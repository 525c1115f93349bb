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

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "skbmlfx/channel.hpp"
#include "skbmlfx/extractor.hpp"
#include "skbmlfx/skb.hpp"

namespace skbmlfx {

inline constexpr int kLevelCount = 4;

// One party's trained extractor and knowledge base.
struct PartyContext {
  std::shared_ptr<const ExtractorModel> model;
  Skb skb;
};

// Per-sample menu over the four transmission levels (index 0 = level 1).
struct SampleMenu {
  std::array<double, kLevelCount> losses{};
  std::array<double, kLevelCount> latencies{};
  std::array<int, kLevelCount> decisions{};
  int tx_estimate = -1;
  int rx_hit = 0;
};

// Level 1 sends v and the receiver runs its own encoder and decoder; level 2
// sends the transmitter's code P_tv v for the receiver's decoder; level 3
// sends the transmitter's semantic estimate; level 4 sends the transmitter's
// class decision, as an index when the receiver stores that class and as the
// prototype otherwise. Levels 1-3 are decided against the receiver's SKB,
// level 4 against the transmitter's.
SampleMenu compute_menu(std::span<const double> v, const PartyContext& tx, const PartyContext& rx,
                        const ChannelParams& channel, double rate);

// Menus for every column of `samples` (d_v x M). The default version splits
// columns across OpenMP threads; the serial one is the reference.
std::vector<SampleMenu> compute_menus(const Matrix& samples, const PartyContext& tx, const PartyContext& rx,
                                      const ChannelParams& channel, double rate);
std::vector<SampleMenu> compute_menus_serial(const Matrix& samples, const PartyContext& tx, const PartyContext& rx,
                                             const ChannelParams& channel, double rate);

// Class the receiver ends up with when the sample is sent at `level` (1-4).
// Level 4 yields the transmitter's estimate whether it arrives as an index
// or as a prototype.
int effective_decision(const SampleMenu& menu, int level);

}  // namespace skbmlfx
