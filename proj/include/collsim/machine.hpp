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
#include <string_view>
#include <vector>

namespace collsim {

using Rank = std::int32_t;
using NodeId = std::int32_t;
using LocalIndex = std::int32_t;

enum class Placement {
  Block,       // consecutive ranks share a node
  RoundRobin,  // rank r lives on node r mod N
};

std::string_view to_string(Placement placement);

/// Cluster of N nodes with n processors each and k off-node lanes per node.
///
/// Immutable after construction. All generators address ranks through
/// node_of / local_index / rank_at so they stay placement-agnostic.
class MachineShape {
 public:
  MachineShape(std::int32_t nodes, std::int32_t per_node, std::int32_t lanes,
               Placement placement = Placement::Block);

  std::int32_t nodes() const noexcept { return nodes_; }
  std::int32_t per_node() const noexcept { return per_node_; }
  std::int32_t lanes() const noexcept { return lanes_; }
  Placement placement() const noexcept { return placement_; }
  std::int32_t size() const noexcept { return nodes_ * per_node_; }

  NodeId node_of(Rank r) const;
  LocalIndex local_index(Rank r) const;
  /// Inverse of (node_of, local_index).
  Rank rank_at(NodeId node, LocalIndex local) const;

  /// Ranks with local index j, ordered by node id.
  std::vector<Rank> lane_group(LocalIndex j) const;
  /// Ranks of one node, ordered by local index.
  std::vector<Rank> node_ranks(NodeId node) const;

  /// Copy of this shape with a different lane count.
  MachineShape with_lanes(std::int32_t lanes) const;

  friend bool operator==(const MachineShape&, const MachineShape&) = default;

 private:
  void check_rank(Rank r) const;

  std::int32_t nodes_;
  std::int32_t per_node_;
  std::int32_t lanes_;
  Placement placement_;
};

MachineShape build_machine(std::int32_t nodes, std::int32_t per_node, std::int32_t lanes,
                           Placement placement = Placement::Block);

inline NodeId node_of(const MachineShape& m, Rank r) { return m.node_of(r); }
inline LocalIndex local_index(const MachineShape& m, Rank r) { return m.local_index(r); }
inline std::vector<Rank> lane_group(const MachineShape& m, LocalIndex j) { return m.lane_group(j); }

}  // namespace collsim
