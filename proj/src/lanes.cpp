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

#include <algorithm>
#include <string>

#include "collsim/algorithms.hpp"
#include "collsim/error.hpp"
#include "tree.hpp"

namespace collsim {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParams, what);
}

void check_count(Elements c) { require(c >= 1, "c must be positive"); }

void check_root(const MachineShape& m, Rank root) {
  require(root >= 0 && root < m.size(), "root " + std::to_string(root) + " outside [0, " +
                                            std::to_string(m.size()) + ")");
}

ScheduleMeta meta_for(std::string algorithm, OpKind op, const MachineShape& m, std::int32_t k,
                      Elements c, std::optional<Rank> root) {
  ScheduleMeta meta;
  meta.algorithm = std::move(algorithm);
  meta.op = op;
  meta.p = m.size();
  meta.nodes = m.nodes();
  meta.per_node = m.per_node();
  meta.k = k;
  meta.c = c;
  meta.root = root;
  return meta;
}

Schedule tagged(Schedule s, Phase phase) {
  tag_phase(s, phase);
  return s;
}

Schedule finish(Schedule s, ScheduleMeta meta) {
  normalize(s);
  s.meta = std::move(meta);
  return s;
}

ChunkSet single(const Chunk& c) {
  ChunkSet set;
  set.insert(c);
  return set;
}

// Near-equal split of [0, c) into n intervals, larger ones at lower
// indices. Indices past c get nothing.
std::vector<ChunkSet> split_payload(Rank origin, Elements c, std::int32_t n) {
  std::vector<ChunkSet> parts(static_cast<std::size_t>(n));
  const Elements count = std::min<Elements>(n, c);
  const Elements base = c / count;
  const Elements extra = c % count;
  Elements at = 0;
  for (Elements i = 0; i < count; ++i) {
    const Elements next = at + base + (i < extra ? 1 : 0);
    parts[static_cast<std::size_t>(i)].insert(Chunk{origin, at, next});
    at = next;
  }
  return parts;
}

}  // namespace

Schedule fulllane_bcast(const MachineShape& m, Rank root, Elements c) {
  check_count(c);
  check_root(m, root);
  const NodeId root_node = m.node_of(root);
  const auto intervals = split_payload(root, c, m.per_node());

  Schedule s = tagged(local_scatter(m.node_ranks(root_node),
                                    static_cast<std::size_t>(m.local_index(root)), intervals),
                      Phase::NodeSplit);

  std::vector<Schedule> lanes;
  for (LocalIndex j = 0; j < m.per_node(); ++j) {
    const auto& part = intervals[static_cast<std::size_t>(j)];
    if (part.empty()) continue;
    lanes.push_back(local_bcast(m.lane_group(j), static_cast<std::size_t>(root_node), part));
  }
  append(s, tagged(merge_parallel(std::move(lanes)), Phase::Lanes));

  // Off the root node each rank holds its own interval. On the root node the
  // root holds everything and scatter relays keep their subtree's intervals.
  std::vector<ChunkSet> root_node_held(static_cast<std::size_t>(m.per_node()));
  root_node_held[static_cast<std::size_t>(m.local_index(root))] = single(make_chunk(root, 0, c));
  for (const auto& round : s.rounds) {
    for (const auto& e : round.events) {
      if (m.node_of(e.dst) != root_node) continue;
      root_node_held[static_cast<std::size_t>(m.local_index(e.dst))].insert(e.payload);
    }
  }

  std::vector<Schedule> nodes;
  for (NodeId v = 0; v < m.nodes(); ++v) {
    nodes.push_back(local_allgather(m.node_ranks(v), v == root_node ? root_node_held : intervals));
  }
  append(s, tagged(merge_parallel(std::move(nodes)), Phase::Final));
  return finish(std::move(s), meta_for("fulllane", OpKind::Bcast, m, m.lanes(), c, root));
}

Schedule fulllane_scatter(const MachineShape& m, Rank root, Elements c) {
  check_count(c);
  check_root(m, root);
  const NodeId root_node = m.node_of(root);

  // Local index j of the root node receives every block for lane group j.
  std::vector<ChunkSet> per_lane(static_cast<std::size_t>(m.per_node()));
  for (LocalIndex j = 0; j < m.per_node(); ++j) {
    for (Rank r : m.lane_group(j)) per_lane[static_cast<std::size_t>(j)].insert(block_of(root, r, c));
  }
  Schedule s = tagged(local_scatter(m.node_ranks(root_node),
                                    static_cast<std::size_t>(m.local_index(root)), per_lane),
                      Phase::NodeSplit);

  std::vector<Schedule> lanes;
  for (LocalIndex j = 0; j < m.per_node(); ++j) {
    const auto group = m.lane_group(j);
    std::vector<ChunkSet> blocks;
    blocks.reserve(group.size());
    for (Rank r : group) blocks.push_back(single(block_of(root, r, c)));
    lanes.push_back(local_scatter(group, static_cast<std::size_t>(root_node), blocks));
  }
  append(s, tagged(merge_parallel(std::move(lanes)), Phase::Lanes));
  return finish(std::move(s), meta_for("fulllane", OpKind::Scatter, m, m.lanes(), c, root));
}

Schedule fulllane_alltoall(const MachineShape& m, Elements c) {
  check_count(c);
  const auto n = static_cast<std::size_t>(m.per_node());
  const auto N = static_cast<std::size_t>(m.nodes());

  // Combine on the node: local index b collects everything its node-mates
  // hold for destinations with local index b, on any node.
  std::vector<Schedule> nodes;
  for (NodeId v = 0; v < m.nodes(); ++v) {
    std::vector<std::vector<ChunkSet>> blocks(n, std::vector<ChunkSet>(n));
    for (LocalIndex a = 0; a < m.per_node(); ++a) {
      for (LocalIndex b = 0; b < m.per_node(); ++b) {
        if (a == b) continue;
        auto& cell = blocks[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        for (NodeId w = 0; w < m.nodes(); ++w) cell.insert(block_of(m.rank_at(v, a), m.rank_at(w, b), c));
      }
    }
    nodes.push_back(local_alltoall(m.node_ranks(v), blocks));
  }
  Schedule s = tagged(merge_parallel(std::move(nodes)), Phase::NodeSplit);

  // Exchange the combined per-node blocks within every lane group.
  std::vector<Schedule> lanes;
  for (LocalIndex b = 0; b < m.per_node(); ++b) {
    std::vector<std::vector<ChunkSet>> blocks(N, std::vector<ChunkSet>(N));
    for (NodeId v = 0; v < m.nodes(); ++v) {
      for (NodeId w = 0; w < m.nodes(); ++w) {
        if (v == w) continue;
        auto& cell = blocks[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)];
        for (LocalIndex a = 0; a < m.per_node(); ++a) cell.insert(block_of(m.rank_at(v, a), m.rank_at(w, b), c));
      }
    }
    lanes.push_back(local_alltoall(m.lane_group(b), blocks));
  }
  append(s, tagged(merge_parallel(std::move(lanes)), Phase::Lanes));
  return finish(std::move(s), meta_for("fulllane", OpKind::Alltoall, m, m.lanes(), c, std::nullopt));
}

namespace {

void check_lanes(const MachineShape& m, std::int32_t k) {
  require(k >= 1 && k <= m.per_node(),
          "k=" + std::to_string(k) + " must lie in [1, n=" + std::to_string(m.per_node()) + "]");
}

// Node-level plan shared by the adapted bcast and scatter: the k-ported
// recursion over node ids, plus per-node local roots and final shares.
struct NodePlan {
  const MachineShape& m;
  std::int32_t k;
  NodeId root_node;
  LocalIndex root_local;
  std::vector<std::vector<detail::TreeSend>> rounds;
  std::vector<std::int32_t> reached;  // inter round of first receipt, -1 for the root node

  NodePlan(const MachineShape& shape, std::int32_t lanes, Rank root)
      : m(shape),
        k(lanes),
        root_node(shape.node_of(root)),
        root_local(shape.local_index(root)),
        rounds(detail::tree_rounds(shape.nodes(), lanes, shape.node_of(root))),
        reached(static_cast<std::size_t>(shape.nodes()), -1) {
    for (std::size_t t = 0; t < rounds.size(); ++t) {
      for (const auto& send : rounds[t]) reached[static_cast<std::size_t>(send.to)] = static_cast<std::int32_t>(t);
    }
  }

  LocalIndex receiver(NodeId v) const { return v == root_node ? root_local : 0; }

  // Receiver first, then the lowest other local indices.
  std::vector<LocalIndex> local_roots(NodeId v) const {
    std::vector<LocalIndex> roots{receiver(v)};
    for (LocalIndex j = 0; j < m.per_node() && static_cast<std::int32_t>(roots.size()) < k; ++j) {
      if (j != receiver(v)) roots.push_back(j);
    }
    return roots;
  }

  // Every local index in receiver-first order; used for whole-node relays.
  std::vector<LocalIndex> all_locals(NodeId v) const {
    std::vector<LocalIndex> locals{receiver(v)};
    for (LocalIndex j = 0; j < m.per_node(); ++j) {
      if (j != receiver(v)) locals.push_back(j);
    }
    return locals;
  }

  // Contiguous shares of the non-root local indices, one per local root.
  std::vector<std::vector<LocalIndex>> shares(NodeId v) const {
    const auto roots = local_roots(v);
    std::vector<LocalIndex> rest;
    for (LocalIndex j = 0; j < m.per_node(); ++j) {
      if (std::find(roots.begin(), roots.end(), j) == roots.end()) rest.push_back(j);
    }
    std::vector<std::vector<LocalIndex>> out(roots.size());
    if (rest.empty()) return out;
    const auto split = split_range(0, static_cast<Rank>(rest.size()), static_cast<std::int32_t>(roots.size()));
    for (std::size_t i = 0; i < split.subranges.size(); ++i) {
      for (auto at = split.subranges[i].begin; at < split.subranges[i].end; ++at) {
        out[i].push_back(rest[static_cast<std::size_t>(at)]);
      }
    }
    return out;
  }

  std::int32_t last_round() const { return static_cast<std::int32_t>(rounds.size()) - 1; }

  // Nodes that relay right before inter round t: those reached in round t-1,
  // or the root node before round 0.
  bool relays_before(NodeId v, std::int32_t t) const {
    return reached[static_cast<std::size_t>(v)] == t - 1;
  }

  // Nodes reached in the last inter round (or the only node) relay as part
  // of the final phase.
  bool relays_in_final(NodeId v) const {
    return reached[static_cast<std::size_t>(v)] == last_round();
  }

  std::vector<Rank> ranks_at(NodeId v, const std::vector<LocalIndex>& locals) const {
    std::vector<Rank> ranks;
    ranks.reserve(locals.size());
    for (LocalIndex j : locals) ranks.push_back(m.rank_at(v, j));
    return ranks;
  }
};

// Relay blocks before each inter round, then the inter rounds. `relay` and
// `final_part` build the per-node pieces; `inter_payload` the payload of a
// node-level send.
template <typename RelayFn, typename FinalFn, typename InterFn>
Schedule compose_adapted(const NodePlan& plan, RelayFn&& relay, FinalFn&& final_part,
                         InterFn&& inter_payload) {
  const auto& m = plan.m;
  Schedule s;
  for (std::int32_t t = 0; t <= plan.last_round(); ++t) {
    std::vector<Schedule> relays;
    for (NodeId v = 0; v < m.nodes(); ++v) {
      if (plan.relays_before(v, t)) relays.push_back(relay(v));
    }
    append(s, tagged(merge_parallel(std::move(relays)), Phase::NodeRelay));

    Round inter;
    inter.phase = Phase::Lanes;
    for (const auto& send : plan.rounds[static_cast<std::size_t>(t)]) {
      const auto roots = plan.local_roots(send.from);
      inter.events.push_back({m.rank_at(send.from, roots[static_cast<std::size_t>(send.port)]),
                              m.rank_at(send.to, plan.receiver(send.to)), inter_payload(send)});
    }
    s.rounds.push_back(std::move(inter));
  }

  std::vector<Schedule> finals;
  for (NodeId v = 0; v < m.nodes(); ++v) {
    Schedule node = plan.relays_in_final(v) ? relay(v) : Schedule{};
    append(node, final_part(v));
    finals.push_back(std::move(node));
  }
  append(s, tagged(merge_parallel(std::move(finals)), Phase::Final));
  return s;
}

}  // namespace

Schedule klane_bcast(const MachineShape& m, std::int32_t k, Rank root, Elements c,
                     bool full_node_bcast) {
  check_count(c);
  check_root(m, root);
  check_lanes(m, k);
  const NodePlan plan(m, k, root);
  const ChunkSet payload = single(make_chunk(root, 0, c));

  auto relay = [&](NodeId v) {
    const auto locals = full_node_bcast ? plan.all_locals(v) : plan.local_roots(v);
    return local_bcast(plan.ranks_at(v, locals), 0, payload);
  };
  auto final_part = [&](NodeId v) {
    if (full_node_bcast) return Schedule{};
    const auto roots = plan.local_roots(v);
    const auto shares = plan.shares(v);
    std::vector<Schedule> parts;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (shares[i].empty()) continue;
      std::vector<LocalIndex> group{roots[i]};
      group.insert(group.end(), shares[i].begin(), shares[i].end());
      parts.push_back(local_bcast(plan.ranks_at(v, group), 0, payload));
    }
    return merge_parallel(std::move(parts));
  };
  auto inter_payload = [&](const detail::TreeSend&) { return payload; };

  Schedule s = compose_adapted(plan, relay, final_part, inter_payload);
  auto meta = meta_for(full_node_bcast ? "klane-fullnode" : "klane", OpKind::Bcast, m, k, c, root);
  return finish(std::move(s), std::move(meta));
}

Schedule klane_scatter(const MachineShape& m, std::int32_t k, Rank root, Elements c) {
  check_count(c);
  check_root(m, root);
  check_lanes(m, k);
  const NodePlan plan(m, k, root);

  auto node_blocks = [&](NodeId begin, NodeId end) {
    ChunkSet out;
    for (NodeId v = begin; v < end; ++v) {
      for (Rank r : m.node_ranks(v)) out.insert(block_of(root, r, c));
    }
    return out;
  };
  auto rank_block = [&](NodeId v, LocalIndex j) { return single(block_of(root, m.rank_at(v, j), c)); };

  // Blocks local root i of node v needs: its own, its final share, and the
  // subtrees it serves as port i in later inter rounds.
  auto relay = [&](NodeId v) {
    const auto roots = plan.local_roots(v);
    const auto shares = plan.shares(v);
    std::vector<ChunkSet> blocks(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
      blocks[i].insert(rank_block(v, roots[i]));
      for (LocalIndex j : shares[i]) blocks[i].insert(rank_block(v, j));
    }
    for (const auto& round : plan.rounds) {
      for (const auto& send : round) {
        if (send.from == v) blocks[static_cast<std::size_t>(send.port)].insert(node_blocks(send.lo, send.hi));
      }
    }
    return local_scatter(plan.ranks_at(v, roots), 0, blocks);
  };
  auto final_part = [&](NodeId v) {
    const auto roots = plan.local_roots(v);
    const auto shares = plan.shares(v);
    std::vector<Schedule> parts;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (shares[i].empty()) continue;
      std::vector<LocalIndex> group{roots[i]};
      group.insert(group.end(), shares[i].begin(), shares[i].end());
      std::vector<ChunkSet> blocks;
      for (LocalIndex j : group) blocks.push_back(rank_block(v, j));
      parts.push_back(local_scatter(plan.ranks_at(v, group), 0, blocks));
    }
    return merge_parallel(std::move(parts));
  };
  auto inter_payload = [&](const detail::TreeSend& send) { return node_blocks(send.lo, send.hi); };

  Schedule s = compose_adapted(plan, relay, final_part, inter_payload);
  return finish(std::move(s), meta_for("klane", OpKind::Scatter, m, k, c, root));
}

Schedule klane_alltoall(const MachineShape& m, Elements c) {
  check_count(c);
  const std::int32_t N = m.nodes();
  const std::int32_t n = m.per_node();
  Schedule s;
  // Distance d pairs node v with node v+d; step s shifts the local index so
  // every rank sends and receives exactly once per step.
  for (std::int32_t d = 1; d < N; ++d) {
    for (std::int32_t step = 0; step < n; ++step) {
      Round round;
      round.phase = Phase::Lanes;
      for (NodeId v = 0; v < N; ++v) {
        for (LocalIndex j = 0; j < n; ++j) {
          const Rank src = m.rank_at(v, j);
          const Rank dst = m.rank_at((v + d) % N, (j + step) % n);
          round.events.push_back({src, dst, single(block_of(src, dst, c))});
        }
      }
      s.rounds.push_back(std::move(round));
    }
  }

  std::vector<Schedule> nodes;
  const auto width = static_cast<std::size_t>(n);
  for (NodeId v = 0; v < N; ++v) {
    std::vector<std::vector<ChunkSet>> blocks(width, std::vector<ChunkSet>(width));
    for (LocalIndex a = 0; a < n; ++a) {
      for (LocalIndex b = 0; b < n; ++b) {
        if (a != b) {
          blocks[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
              single(block_of(m.rank_at(v, a), m.rank_at(v, b), c));
        }
      }
    }
    nodes.push_back(local_alltoall(m.node_ranks(v), blocks));
  }
  append(s, tagged(merge_parallel(std::move(nodes)), Phase::Final));
  return finish(std::move(s), meta_for("klane", OpKind::Alltoall, m, m.lanes(), c, std::nullopt));
}

Schedule generate(Algorithm algo, const CollectiveParams& params, const MachineShape& m,
                  GenerateOptions options) {
  switch (algo) {
    case Algorithm::KPorted:
      switch (params.op) {
        case OpKind::Bcast: return kported_bcast(m.size(), params.k, params.root, params.c);
        case OpKind::Scatter: return kported_scatter(m.size(), params.k, params.root, params.c);
        case OpKind::Alltoall: return kported_alltoall(m.size(), params.k, params.c);
      }
      break;
    case Algorithm::KLane:
      switch (params.op) {
        case OpKind::Bcast:
          return klane_bcast(m, params.k, params.root, params.c, options.full_node_bcast);
        case OpKind::Scatter: return klane_scatter(m, params.k, params.root, params.c);
        case OpKind::Alltoall: return klane_alltoall(m, params.c);
      }
      break;
    case Algorithm::FullLane:
      switch (params.op) {
        case OpKind::Bcast: return fulllane_bcast(m, params.root, params.c);
        case OpKind::Scatter: return fulllane_scatter(m, params.root, params.c);
        case OpKind::Alltoall: return fulllane_alltoall(m, params.c);
      }
      break;
  }
  throw Error(ErrorCode::InvalidParams, "unknown algorithm");
}

}  // namespace collsim
