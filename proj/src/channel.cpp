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

#include "skbmlfx/channel.hpp"

#include <cmath>

#include "skbmlfx/error.hpp"

namespace skbmlfx {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double path_loss(const ChannelParams& params) {
  if (!(params.d0_m > 0.0) || !(params.d_m > 0.0)) {
    throw Error(Errc::kNonPositiveDistance, "path loss needs positive distances");
  }
  return std::pow(10.0, params.beta0_db / 10.0) * std::pow(params.d_m / params.d0_m, -params.zeta);
}

double achievable_rate(const ChannelParams& params) {
  if (!(params.bandwidth_hz > 0.0)) throw Error(Errc::kInvalidArgument, "bandwidth must be positive");
  const double noise_w = dbm_to_watts(params.noise_dbm_per_hz) * params.bandwidth_hz;
  const double snr = dbm_to_watts(params.power_dbm) * path_loss(params) / noise_w;
  return params.bandwidth_hz * std::log2(1.0 + snr);
}

double latency(std::size_t elements, const ChannelParams& params, double rate) {
  if (!(rate > 0.0)) throw Error(Errc::kZeroRate, "latency needs a positive rate");
  return static_cast<double>(elements) * static_cast<double>(params.q_bits) / rate;
}

}  // namespace skbmlfx
