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
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skbmlfx/extractor.hpp"

namespace skbmlfx {

// A party's semantic knowledge base: the subset of classes whose prototypes
// it stores.
class Skb {
 public:
  Skb(std::shared_ptr<const SemanticPrototypes> prototypes, std::vector<int> class_ids);

  const std::vector<int>& class_ids() const noexcept { return class_ids_; }  // ascending
  const SemanticPrototypes& prototypes() const noexcept { return *prototypes_; }
  const std::shared_ptr<const SemanticPrototypes>& prototypes_ptr() const noexcept { return prototypes_; }
  std::size_t size() const noexcept { return class_ids_.size(); }
  bool contains(int class_id) const;

 private:
  std::shared_ptr<const SemanticPrototypes> prototypes_;
  std::vector<int> class_ids_;
};

// t_c / r_c: 1 iff the class is stored. Throws kUnknownClass for ids that
// are not global classes.
int indicator(const Skb& skb, int class_id);

namespace skb_selection {
struct Full {};
struct FirstK {
  std::size_t k;
};
struct RandomK {
  std::size_t k;
  std::uint64_t seed;
};
struct Explicit {
  std::vector<int> ids;
};
}  // namespace skb_selection

using SkbSelection =
    std::variant<skb_selection::Full, skb_selection::FirstK, skb_selection::RandomK, skb_selection::Explicit>;

Skb build_skb(std::shared_ptr<const SemanticPrototypes> prototypes, const SkbSelection& selection);

// Config syntax: full | first:<k> | random:<k>:<seed> | ids:<id>,<id>,...
SkbSelection parse_skb_selection(std::string_view text);
std::string to_string(const SkbSelection& selection);

}  // namespace skbmlfx
