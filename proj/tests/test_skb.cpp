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

#include <algorithm>
#include <memory>

#include "doctest.h"
#include "skbmlfx/error.hpp"
#include "skbmlfx/skb.hpp"

using namespace skbmlfx;

namespace {

std::shared_ptr<const SemanticPrototypes> four_classes() {
  return std::make_shared<const SemanticPrototypes>(
      std::vector<int>{5, 7, 9, 11}, Matrix{{1.0, 0.0, 0.0, 1.0}, {0.0, 1.0, 0.0, 1.0}});
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::kInvalidArgument;  // any code not under test; caller expects something else
}

}  // namespace

TEST_CASE("first_k takes the prefix of the prototype order") {
  const auto skb = build_skb(four_classes(), skb_selection::FirstK{3});
  CHECK(skb.class_ids() == std::vector<int>{5, 7, 9});
  CHECK(indicator(skb, 5) == 1);
  CHECK(indicator(skb, 11) == 0);
}

TEST_CASE("first_k is nested in k") {
  const auto protos = four_classes();
  for (std::size_t a = 1; a <= 4; ++a) {
    for (std::size_t b = a; b <= 4; ++b) {
      const auto sa = build_skb(protos, skb_selection::FirstK{a}).class_ids();
      const auto sb = build_skb(protos, skb_selection::FirstK{b}).class_ids();
      CHECK(std::includes(sb.begin(), sb.end(), sa.begin(), sa.end()));
    }
  }
}

TEST_CASE("random_k is seeded and sized") {
  const auto protos = four_classes();
  const auto a = build_skb(protos, skb_selection::RandomK{2, 7});
  const auto b = build_skb(protos, skb_selection::RandomK{2, 7});
  CHECK(a.class_ids() == b.class_ids());
  CHECK(a.size() == 2);
  CHECK(std::is_sorted(a.class_ids().begin(), a.class_ids().end()));
  for (const int c : a.class_ids()) CHECK(protos->contains(c));
  // Same seed, growing k: nested.
  const auto c = build_skb(protos, skb_selection::RandomK{3, 7});
  CHECK(std::includes(c.class_ids().begin(), c.class_ids().end(), a.class_ids().begin(), a.class_ids().end()));
}

TEST_CASE("explicit ids are stored as a sorted set") {
  const auto skb = build_skb(four_classes(), skb_selection::Explicit{{9, 5}});
  CHECK(skb.class_ids() == std::vector<int>{5, 9});
  CHECK(skb.contains(9));
  CHECK_FALSE(skb.contains(7));
}

TEST_CASE("full skb indicates every class") {
  const auto protos = four_classes();
  const auto skb = build_skb(protos, skb_selection::Full{});
  CHECK(skb.size() == 4);
  for (const int c : protos->class_ids()) CHECK(indicator(skb, c) == 1);
}

TEST_CASE("indicator matches prototype lookup through the skb") {
  const auto protos = four_classes();
  const auto skb = build_skb(protos, skb_selection::Explicit{{7, 11}});
  for (const int c : protos->class_ids()) {
    const bool stored = std::find(skb.class_ids().begin(), skb.class_ids().end(), c) != skb.class_ids().end();
    CHECK(indicator(skb, c) == (stored ? 1 : 0));
  }
}

TEST_CASE("skb errors") {
  const auto protos = four_classes();
  CHECK(code_of([&] { build_skb(protos, skb_selection::FirstK{5}); }) == Errc::kSizeExceedsPrototypes);
  CHECK(code_of([&] { build_skb(protos, skb_selection::RandomK{9, 1}); }) == Errc::kSizeExceedsPrototypes);
  CHECK(code_of([&] { build_skb(protos, skb_selection::Explicit{{5, 5}}); }) == Errc::kDuplicateIds);
  CHECK(code_of([&] { build_skb(protos, skb_selection::Explicit{{6}}); }) == Errc::kUnknownClass);
  CHECK(code_of([&] { build_skb(protos, skb_selection::Explicit{{}}); }) == Errc::kEmptySkb);
  const auto skb = build_skb(protos, skb_selection::Full{});
  CHECK(code_of([&] { indicator(skb, 42); }) == Errc::kUnknownClass);
}

TEST_CASE("selection text round trip") {
  for (const char* text : {"full", "first:3", "random:4:17", "ids:3,1,2"}) {
    CHECK(to_string(parse_skb_selection(text)) == text);
  }
  const auto sel = parse_skb_selection("random:4:17");
  REQUIRE(std::holds_alternative<skb_selection::RandomK>(sel));
  CHECK(std::get<skb_selection::RandomK>(sel).k == 4);
  CHECK(std::get<skb_selection::RandomK>(sel).seed == 17);
  for (const char* bad : {"", "half", "first:", "first:x", "random:3", "ids:1,,2", "first:-1"}) {
    CHECK(code_of([&] { parse_skb_selection(bad); }) == Errc::kConfigInvalid);
  }
}
