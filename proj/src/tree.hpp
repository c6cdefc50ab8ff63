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

#pragma once

#include <cstdint>
#include <vector>

namespace collsim::detail {

/// One send of the divide-and-conquer recursion, in positions.
struct TreeSend {
  std::int32_t from = 0;
  std::int32_t to = 0;
  std::int32_t lo = 0;  // subrange served by `to`: [lo, hi)
  std::int32_t hi = 0;
  std::int32_t port = 0;  // index among the sender's children this round
};

/// Sends of the (k+1)-way divide-and-conquer tree over positions
/// [0, count), grouped by round.
std::vector<std::vector<TreeSend>> tree_rounds(std::int32_t count, std::int32_t k,
                                               std::int32_t root);

}  // namespace collsim::detail
