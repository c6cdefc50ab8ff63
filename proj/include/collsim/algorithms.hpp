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
#include <span>
#include <string_view>
#include <vector>

#include "collsim/chunk.hpp"
#include "collsim/machine.hpp"
#include "collsim/schedule.hpp"

namespace collsim {

/// Half-open rank interval [begin, end).
struct Subrange {
  Rank begin = 0;
  Rank end = 0;

  std::int32_t size() const noexcept { return end - begin; }
  bool contains(Rank r) const noexcept { return begin <= r && r < end; }

  friend bool operator==(const Subrange&, const Subrange&) = default;
};

/// Contiguous cover of a rank interval. Sizes differ by at most one and
/// larger parts come first.
struct RangeSplit {
  std::vector<Subrange> subranges;
};

RangeSplit split_range(Rank begin, Rank end, std::int32_t parts);

/// What a collective moves. For Scatter and Alltoall, `c` is the block
/// size per destination rank; for Bcast it is the whole payload.
struct CollectiveParams {
  OpKind op = OpKind::Bcast;
  Rank root = 0;
  Elements c = 1;
  std::int32_t k = 1;
};

enum class Algorithm { KPorted, KLane, FullLane };

std::string_view to_string(Algorithm algo);

/// c-element block that `src` holds for `dst` in scatter/alltoall layouts.
Chunk block_of(Rank src, Rank dst, Elements c);

// k-ported divide and conquer over ranks [0, p).
Schedule kported_bcast(std::int32_t p, std::int32_t k, Rank root, Elements c);
Schedule kported_scatter(std::int32_t p, std::int32_t k, Rank root, Elements c);
// Round-robin exchange in ceil((p-1)/k) rounds; the self block never moves.
Schedule kported_alltoall(std::int32_t p, std::int32_t k, Elements c);

// Node-local building blocks over an explicit rank list. Positions index
// into `ranks`; per-position payloads may be empty, in which case no event
// carries them.

/// Binomial tree broadcast of `payload` from ranks[root_pos].
Schedule local_bcast(std::span<const Rank> ranks, std::size_t root_pos, const ChunkSet& payload);
/// Binomial tree scatter; blocks[i] ends up at ranks[i].
Schedule local_scatter(std::span<const Rank> ranks, std::size_t root_pos,
                       std::span<const ChunkSet> blocks);
/// Doubling allgather in ceil(log2 |ranks|) rounds, one send and one receive
/// per rank and round.
Schedule local_allgather(std::span<const Rank> ranks, std::span<const ChunkSet> held);
/// Round-robin alltoall; blocks[i][j] moves from ranks[i] to ranks[j].
Schedule local_alltoall(std::span<const Rank> ranks,
                        const std::vector<std::vector<ChunkSet>>& blocks);

// Full-lane algorithms: node-local split, n concurrent sub-collectives over
// the lane groups, node-local completion.
Schedule fulllane_bcast(const MachineShape& m, Rank root, Elements c);
Schedule fulllane_scatter(const MachineShape& m, Rank root, Elements c);
Schedule fulllane_alltoall(const MachineShape& m, Elements c);

// Adapted k-lane algorithms: the k-ported recursion runs over node ids with
// k local roots per node acting as the ports.
Schedule klane_bcast(const MachineShape& m, std::int32_t k, Rank root, Elements c,
                     bool full_node_bcast = false);
Schedule klane_scatter(const MachineShape& m, std::int32_t k, Rank root, Elements c);
Schedule klane_alltoall(const MachineShape& m, Elements c);

struct GenerateOptions {
  bool full_node_bcast = false;
};

/// Dispatches to the generator for (algo, params.op). k-ported algorithms use
/// params.k as the port count over m.size() ranks; lane algorithms use
/// params.k as the lane count where it matters.
Schedule generate(Algorithm algo, const CollectiveParams& params, const MachineShape& m,
                  GenerateOptions options = {});

}  // namespace collsim
