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

#include "collsim/machine.hpp"

#include <string>

#include "collsim/error.hpp"

namespace collsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidShape: return "InvalidShape";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::MissingData: return "MissingData";
  }
  return "Unknown";
}

std::string_view to_string(Placement placement) {
  return placement == Placement::Block ? "block" : "rr";
}

MachineShape::MachineShape(std::int32_t nodes, std::int32_t per_node, std::int32_t lanes,
                           Placement placement)
    : nodes_(nodes), per_node_(per_node), lanes_(lanes), placement_(placement) {
  if (nodes < 1 || per_node < 1 || lanes < 1) {
    throw Error(ErrorCode::InvalidShape, "counts must be positive (N=" + std::to_string(nodes) +
                                             ", n=" + std::to_string(per_node) +
                                             ", k=" + std::to_string(lanes) + ")");
  }
  if (lanes > per_node) {
    throw Error(ErrorCode::InvalidShape, "k=" + std::to_string(lanes) +
                                             " exceeds n=" + std::to_string(per_node));
  }
  if (static_cast<std::int64_t>(nodes) * per_node > INT32_MAX) {
    throw Error(ErrorCode::InvalidShape, "too many ranks");
  }
}

void MachineShape::check_rank(Rank r) const {
  if (r < 0 || r >= size()) {
    throw Error(ErrorCode::RankOutOfRange,
                "rank " + std::to_string(r) + " not in [0, " + std::to_string(size()) + ")");
  }
}

NodeId MachineShape::node_of(Rank r) const {
  check_rank(r);
  return placement_ == Placement::Block ? r / per_node_ : r % nodes_;
}

LocalIndex MachineShape::local_index(Rank r) const {
  check_rank(r);
  return placement_ == Placement::Block ? r % per_node_ : r / nodes_;
}

Rank MachineShape::rank_at(NodeId node, LocalIndex local) const {
  if (node < 0 || node >= nodes_) {
    throw Error(ErrorCode::IndexOutOfRange, "node " + std::to_string(node));
  }
  if (local < 0 || local >= per_node_) {
    throw Error(ErrorCode::IndexOutOfRange, "local index " + std::to_string(local));
  }
  return placement_ == Placement::Block ? node * per_node_ + local : local * nodes_ + node;
}

std::vector<Rank> MachineShape::lane_group(LocalIndex j) const {
  if (j < 0 || j >= per_node_) {
    throw Error(ErrorCode::IndexOutOfRange, "local index " + std::to_string(j));
  }
  std::vector<Rank> group;
  group.reserve(static_cast<std::size_t>(nodes_));
  for (NodeId v = 0; v < nodes_; ++v) group.push_back(rank_at(v, j));
  return group;
}

std::vector<Rank> MachineShape::node_ranks(NodeId node) const {
  if (node < 0 || node >= nodes_) {
    throw Error(ErrorCode::IndexOutOfRange, "node " + std::to_string(node));
  }
  std::vector<Rank> ranks;
  ranks.reserve(static_cast<std::size_t>(per_node_));
  for (LocalIndex j = 0; j < per_node_; ++j) ranks.push_back(rank_at(node, j));
  return ranks;
}

MachineShape MachineShape::with_lanes(std::int32_t lanes) const {
  return MachineShape(nodes_, per_node_, lanes, placement_);
}

MachineShape build_machine(std::int32_t nodes, std::int32_t per_node, std::int32_t lanes,
                           Placement placement) {
  return MachineShape(nodes, per_node, lanes, placement);
}

}  // namespace collsim
