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
#include <numeric>
#include <string>

#include "collsim/algorithms.hpp"
#include "collsim/error.hpp"
#include "tree.hpp"

namespace collsim {

namespace detail {

std::vector<std::vector<TreeSend>> tree_rounds(std::int32_t count, std::int32_t k,
                                               std::int32_t root) {
  struct Active {
    Subrange range;
    std::int32_t root;
  };
  std::vector<std::vector<TreeSend>> rounds;
  std::vector<Active> active{{{0, count}, root}};
  while (!active.empty()) {
    std::vector<TreeSend> sends;
    std::vector<Active> next;
    for (const auto& a : active) {
      if (a.range.size() <= 1) continue;
      std::int32_t port = 0;
      for (const auto& sub : split_range(a.range.begin, a.range.end, k + 1).subranges) {
        if (sub.contains(a.root)) {
          next.push_back({sub, a.root});
          continue;
        }
        sends.push_back({a.root, sub.begin, sub.begin, sub.end, port++});
        next.push_back({sub, sub.begin});
      }
    }
    if (!sends.empty()) rounds.push_back(std::move(sends));
    std::erase_if(next, [](const Active& a) { return a.range.size() <= 1; });
    active = std::move(next);
  }
  return rounds;
}

}  // namespace detail

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParams, what);
}

std::vector<Rank> iota_ranks(std::int32_t p) {
  std::vector<Rank> ranks(static_cast<std::size_t>(p));
  std::iota(ranks.begin(), ranks.end(), 0);
  return ranks;
}

ChunkSet blocks_union(std::span<const ChunkSet> blocks, std::int32_t lo, std::int32_t hi) {
  ChunkSet out;
  for (auto i = lo; i < hi; ++i) out.insert(blocks[static_cast<std::size_t>(i)]);
  return out;
}

Schedule tree_schedule(std::span<const Rank> ranks, std::int32_t k, std::size_t root_pos,
                       const ChunkSet* payload, std::span<const ChunkSet> blocks) {
  Schedule s;
  const auto count = static_cast<std::int32_t>(ranks.size());
  for (const auto& sends : detail::tree_rounds(count, k, static_cast<std::int32_t>(root_pos))) {
    Round round;
    for (const auto& t : sends) {
      ChunkSet data = payload ? *payload : blocks_union(blocks, t.lo, t.hi);
      if (data.empty()) continue;
      round.events.push_back({ranks[static_cast<std::size_t>(t.from)],
                              ranks[static_cast<std::size_t>(t.to)], std::move(data)});
    }
    s.rounds.push_back(std::move(round));
  }
  normalize(s);
  return s;
}

// Round-robin exchange: in round t, position i sends to i + t*k + d for
// d = 1..k while offsets stay below the group size.
template <typename BlockFn>
Schedule round_robin(std::span<const Rank> ranks, std::int32_t k, BlockFn&& block) {
  Schedule s;
  const auto count = static_cast<std::int32_t>(ranks.size());
  for (std::int32_t base = 0; base < count - 1; base += k) {
    Round round;
    for (std::int32_t i = 0; i < count; ++i) {
      for (std::int32_t d = 1; d <= k && base + d < count; ++d) {
        const std::int32_t j = (i + base + d) % count;
        ChunkSet data = block(i, j);
        if (data.empty()) continue;
        round.events.push_back(
            {ranks[static_cast<std::size_t>(i)], ranks[static_cast<std::size_t>(j)], std::move(data)});
      }
    }
    s.rounds.push_back(std::move(round));
  }
  normalize(s);
  return s;
}

void check_ported(std::int32_t p, std::int32_t k, Elements c) {
  require(p >= 1, "p must be positive");
  require(k >= 1, "k must be positive");
  require(c >= 1, "c must be positive");
}

void check_root(std::int32_t p, Rank root) {
  require(root >= 0 && root < p, "root " + std::to_string(root) + " outside [0, " +
                                     std::to_string(p) + ")");
}

ScheduleMeta meta_for(std::string algorithm, OpKind op, std::int32_t p, std::int32_t k,
                      Elements c, std::optional<Rank> root) {
  ScheduleMeta meta;
  meta.algorithm = std::move(algorithm);
  meta.op = op;
  meta.p = p;
  meta.nodes = p;
  meta.per_node = 1;
  meta.k = k;
  meta.c = c;
  meta.root = root;
  return meta;
}

void check_positions(std::span<const Rank> ranks, std::size_t root_pos) {
  require(!ranks.empty(), "empty rank list");
  require(root_pos < ranks.size(), "root position out of range");
}

}  // namespace

RangeSplit split_range(Rank begin, Rank end, std::int32_t parts) {
  if (begin >= end) {
    throw Error(ErrorCode::EmptyRange,
                "[" + std::to_string(begin) + ", " + std::to_string(end) + ")");
  }
  if (parts < 1) throw Error(ErrorCode::InvalidParams, "parts must be positive");
  const std::int32_t len = end - begin;
  const std::int32_t count = std::min(parts, len);
  const std::int32_t base = len / count;
  const std::int32_t extra = len % count;
  RangeSplit split;
  split.subranges.reserve(static_cast<std::size_t>(count));
  Rank at = begin;
  for (std::int32_t i = 0; i < count; ++i) {
    const Rank next = at + base + (i < extra ? 1 : 0);
    split.subranges.push_back({at, next});
    at = next;
  }
  return split;
}

std::string_view to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::KPorted: return "kported";
    case Algorithm::KLane: return "klane";
    case Algorithm::FullLane: return "fulllane";
  }
  return "?";
}

Chunk block_of(Rank src, Rank dst, Elements c) { return Chunk{src, dst * c, (dst + 1) * c}; }

Schedule kported_bcast(std::int32_t p, std::int32_t k, Rank root, Elements c) {
  check_ported(p, k, c);
  check_root(p, root);
  const auto ranks = iota_ranks(p);
  const ChunkSet payload(std::vector<Chunk>{make_chunk(root, 0, c)});
  Schedule s = tree_schedule(ranks, k, static_cast<std::size_t>(root), &payload, {});
  s.meta = meta_for("kported", OpKind::Bcast, p, k, c, root);
  return s;
}

Schedule kported_scatter(std::int32_t p, std::int32_t k, Rank root, Elements c) {
  check_ported(p, k, c);
  check_root(p, root);
  const auto ranks = iota_ranks(p);
  std::vector<ChunkSet> blocks(static_cast<std::size_t>(p));
  for (Rank r = 0; r < p; ++r) blocks[static_cast<std::size_t>(r)].insert(block_of(root, r, c));
  Schedule s = tree_schedule(ranks, k, static_cast<std::size_t>(root), nullptr, blocks);
  s.meta = meta_for("kported", OpKind::Scatter, p, k, c, root);
  return s;
}

Schedule kported_alltoall(std::int32_t p, std::int32_t k, Elements c) {
  check_ported(p, k, c);
  const auto ranks = iota_ranks(p);
  Schedule s = round_robin(ranks, k, [c](std::int32_t i, std::int32_t j) {
    return ChunkSet(std::vector<Chunk>{block_of(i, j, c)});
  });
  s.meta = meta_for("kported", OpKind::Alltoall, p, k, c, std::nullopt);
  return s;
}

Schedule local_bcast(std::span<const Rank> ranks, std::size_t root_pos, const ChunkSet& payload) {
  check_positions(ranks, root_pos);
  require(!payload.empty(), "empty payload");
  return tree_schedule(ranks, 1, root_pos, &payload, {});
}

Schedule local_scatter(std::span<const Rank> ranks, std::size_t root_pos,
                       std::span<const ChunkSet> blocks) {
  check_positions(ranks, root_pos);
  require(blocks.size() == ranks.size(), "one block set per rank required");
  return tree_schedule(ranks, 1, root_pos, nullptr, blocks);
}

Schedule local_allgather(std::span<const Rank> ranks, std::span<const ChunkSet> held) {
  check_positions(ranks, 0);
  require(held.size() == ranks.size(), "one chunk set per rank required");
  const auto count = static_cast<std::int32_t>(ranks.size());
  Schedule s;
  auto window = [&](std::int32_t from, std::int32_t width) {
    ChunkSet data;
    for (std::int32_t off = 0; off < width; ++off) {
      data.insert(held[static_cast<std::size_t>((from + off) % count)]);
    }
    return data;
  };
  // Before the round with distance `dist`, position i holds the initial data
  // of positions i .. i+dist-1 (mod count). It forwards that window to
  // i - dist, minus whatever the receiver already holds.
  for (std::int32_t dist = 1; dist < count; dist *= 2) {
    const std::int32_t width = std::min(dist, count - dist);
    Round round;
    for (std::int32_t i = 0; i < count; ++i) {
      const std::int32_t to = ((i - dist) % count + count) % count;
      ChunkSet data = window(i, width).minus(window(to, dist));
      if (data.empty()) continue;
      round.events.push_back(
          {ranks[static_cast<std::size_t>(i)], ranks[static_cast<std::size_t>(to)], std::move(data)});
    }
    s.rounds.push_back(std::move(round));
  }
  normalize(s);
  return s;
}

Schedule local_alltoall(std::span<const Rank> ranks,
                        const std::vector<std::vector<ChunkSet>>& blocks) {
  check_positions(ranks, 0);
  require(blocks.size() == ranks.size(), "block matrix must be |ranks| x |ranks|");
  for (const auto& row : blocks) {
    require(row.size() == ranks.size(), "block matrix must be |ranks| x |ranks|");
  }
  return round_robin(ranks, 1, [&blocks](std::int32_t i, std::int32_t j) {
    return blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  });
}

}  // namespace collsim
