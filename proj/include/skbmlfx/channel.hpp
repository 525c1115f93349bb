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

namespace skbmlfx {

// Scalar link budget. Defaults reproduce the reference deployment: -30 dB
// at 10 m, 500 m link, exponent 3, 1 MHz, -174 dBm/Hz, 10 dBm.
struct ChannelParams {
  double beta0_db = -30.0;
  double d0_m = 10.0;
  double d_m = 500.0;
  double zeta = 3.0;
  double bandwidth_hz = 1e6;
  double noise_dbm_per_hz = -174.0;
  double power_dbm = 10.0;
  std::size_t q_bits = 32;  // bits per transmitted element
};

double dbm_to_watts(double dbm);

// Linear power gain beta0 (d / d0)^-zeta.
double path_loss(const ChannelParams& params);

// B log2(1 + p g / (B N0)) in bits per second.
double achievable_rate(const ChannelParams& params);

// Seconds to send `elements` values of q_bits each at `rate`.
double latency(std::size_t elements, const ChannelParams& params, double rate);

}  // namespace skbmlfx
