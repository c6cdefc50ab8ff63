// Copyright 2026 The collsim Authors.
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

#include <doctest.h>

#include <algorithm>
#include <set>
#include <utility>

#include "collsim/error.hpp"
#include "collsim/machine.hpp"

using namespace collsim;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected collsim::Error");
  return ErrorCode::InvalidParams;
}

}  // namespace

TEST_CASE("build_machine validates the shape") {
  const auto hydra = build_machine(36, 32, 2, Placement::Block);
  CHECK(hydra.size() == 1152);
  CHECK(build_machine(1, 1, 1).size() == 1);
  CHECK(code_of([] { build_machine(2, 2, 3); }) == ErrorCode::InvalidShape);
  CHECK(code_of([] { build_machine(0, 2, 1); }) == ErrorCode::InvalidShape);
  CHECK(code_of([] { build_machine(2, 0, 1); }) == ErrorCode::InvalidShape);
  CHECK(code_of([] { build_machine(2, 2, 0); }) == ErrorCode::InvalidShape);
}

TEST_CASE("node_of and local_index") {
  const auto block = build_machine(2, 2, 1, Placement::Block);
  const auto rr = build_machine(2, 2, 1, Placement::RoundRobin);
  CHECK(block.node_of(2) == 1);
  CHECK(rr.node_of(2) == 0);
  CHECK(build_machine(1, 4, 1).node_of(3) == 0);
  CHECK(block.local_index(3) == 1);
  CHECK(build_machine(3, 2, 1, Placement::RoundRobin).local_index(4) == 1);
  CHECK(build_machine(1, 1, 1).local_index(0) == 0);
  CHECK(code_of([&] { block.node_of(4); }) == ErrorCode::RankOutOfRange);
  CHECK(code_of([&] { block.local_index(-1); }) == ErrorCode::RankOutOfRange);
}

TEST_CASE("lane_group") {
  using V = std::vector<Rank>;
  CHECK(build_machine(2, 2, 1).lane_group(1) == V{1, 3});
  CHECK(build_machine(3, 2, 1).lane_group(0) == V{0, 2, 4});

  // Invert the round-robin placement by enumeration.
  const auto rr = build_machine(2, 2, 1, Placement::RoundRobin);
  std::vector<std::pair<NodeId, Rank>> hits;
  for (Rank r = 0; r < rr.size(); ++r) {
    if (rr.local_index(r) == 1) hits.emplace_back(rr.node_of(r), r);
  }
  std::sort(hits.begin(), hits.end());
  V expected;
  for (auto [node, r] : hits) expected.push_back(r);
  CHECK(expected == V{2, 3});
  CHECK(rr.lane_group(1) == expected);

  CHECK(code_of([&] { rr.lane_group(2); }) == ErrorCode::IndexOutOfRange);
}

TEST_CASE("placement is a bijection and lane groups partition the ranks") {
  for (auto placement : {Placement::Block, Placement::RoundRobin}) {
    for (std::int32_t N = 1; N <= 8; ++N) {
      for (std::int32_t n = 1; n <= 8; ++n) {
        const auto m = build_machine(N, n, 1, placement);
        std::set<std::pair<NodeId, LocalIndex>> seen;
        for (Rank r = 0; r < m.size(); ++r) {
          const auto node = m.node_of(r);
          const auto local = m.local_index(r);
          REQUIRE(node >= 0);
          REQUIRE(node < N);
          REQUIRE(local >= 0);
          REQUIRE(local < n);
          REQUIRE(m.rank_at(node, local) == r);
          seen.emplace(node, local);
        }
        CHECK(seen.size() == static_cast<std::size_t>(m.size()));

        std::vector<int> hit(static_cast<std::size_t>(m.size()));
        for (LocalIndex j = 0; j < n; ++j) {
          const auto group = m.lane_group(j);
          REQUIRE(group.size() == static_cast<std::size_t>(N));
          for (std::size_t v = 0; v < group.size(); ++v) {
            CHECK(m.node_of(group[v]) == static_cast<NodeId>(v));
            ++hit[static_cast<std::size_t>(group[v])];
          }
        }
        CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
      }
    }
  }
}
