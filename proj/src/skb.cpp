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

#include "skbmlfx/skb.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <random>

#include "skbmlfx/error.hpp"

namespace skbmlfx {

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(Errc::kConfigInvalid, "bad " + std::string(what) + " in skb selection: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Skb::Skb(std::shared_ptr<const SemanticPrototypes> prototypes, std::vector<int> class_ids)
    : prototypes_(std::move(prototypes)), class_ids_(std::move(class_ids)) {
  if (!prototypes_) throw Error(Errc::kInvalidArgument, "skb without prototypes");
  if (class_ids_.empty()) throw Error(Errc::kEmptySkb, "skb must hold at least one class");
  std::sort(class_ids_.begin(), class_ids_.end());
  if (std::adjacent_find(class_ids_.begin(), class_ids_.end()) != class_ids_.end()) {
    throw Error(Errc::kDuplicateIds, "skb class ids must be unique");
  }
  for (const int c : class_ids_) {
    if (!prototypes_->contains(c)) throw Error(Errc::kUnknownClass, "skb class " + std::to_string(c) + " has no prototype");
  }
}

bool Skb::contains(int class_id) const {
  return std::binary_search(class_ids_.begin(), class_ids_.end(), class_id);
}

int indicator(const Skb& skb, int class_id) {
  if (!skb.prototypes().contains(class_id)) {
    throw Error(Errc::kUnknownClass, "class " + std::to_string(class_id) + " is not a known class");
  }
  return skb.contains(class_id) ? 1 : 0;
}

Skb build_skb(std::shared_ptr<const SemanticPrototypes> prototypes, const SkbSelection& selection) {
  if (!prototypes) throw Error(Errc::kInvalidArgument, "skb without prototypes");
  const auto& all = prototypes->class_ids();
  auto check_size = [&](std::size_t k) {
    if (k > all.size()) throw Error(Errc::kSizeExceedsPrototypes, "skb larger than the prototype set");
  };
  std::vector<int> ids = std::visit(
      [&](const auto& sel) -> std::vector<int> {
        using T = std::decay_t<decltype(sel)>;
        if constexpr (std::is_same_v<T, skb_selection::Full>) {
          return all;
        } else if constexpr (std::is_same_v<T, skb_selection::FirstK>) {
          check_size(sel.k);
          return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(sel.k)};
        } else if constexpr (std::is_same_v<T, skb_selection::RandomK>) {
          check_size(sel.k);
          std::vector<int> pool = all;
          std::mt19937_64 rng(sel.seed);
          std::shuffle(pool.begin(), pool.end(), rng);
          pool.resize(sel.k);
          return pool;
        } else {
          return sel.ids;
        }
      },
      selection);
  return Skb(std::move(prototypes), std::move(ids));
}

SkbSelection parse_skb_selection(std::string_view text) {
  if (text == "full") return skb_selection::Full{};
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw Error(Errc::kConfigInvalid, "unknown skb selection '" + std::string(text) + "'");
  const auto kind = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  if (kind == "first") return skb_selection::FirstK{parse_number<std::size_t>(rest, "size")};
  if (kind == "random") {
    const auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) throw Error(Errc::kConfigInvalid, "random selection needs <k>:<seed>");
    return skb_selection::RandomK{parse_number<std::size_t>(rest.substr(0, c2), "size"),
                                  parse_number<std::uint64_t>(rest.substr(c2 + 1), "seed")};
  }
  if (kind == "ids") {
    skb_selection::Explicit sel;
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto comma = rest.find(',', start);
      const auto token = rest.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      sel.ids.push_back(parse_number<int>(token, "class id"));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return sel;
  }
  throw Error(Errc::kConfigInvalid, "unknown skb selection '" + std::string(text) + "'");
}

std::string to_string(const SkbSelection& selection) {
  return std::visit(
      [](const auto& sel) -> std::string {
        using T = std::decay_t<decltype(sel)>;
        if constexpr (std::is_same_v<T, skb_selection::Full>) {
          return "full";
        } else if constexpr (std::is_same_v<T, skb_selection::FirstK>) {
          return "first:" + std::to_string(sel.k);
        } else if constexpr (std::is_same_v<T, skb_selection::RandomK>) {
          return "random:" + std::to_string(sel.k) + ":" + std::to_string(sel.seed);
        } else {
          std::string out = "ids:";
          for (std::size_t i = 0; i < sel.ids.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(sel.ids[i]);
          }
          return out;
        }
      },
      selection);
}

}  // namespace skbmlfx
