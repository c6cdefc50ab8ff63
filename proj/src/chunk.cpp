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

#include "collsim/chunk.hpp"

#include <algorithm>
#include <string>

#include "collsim/error.hpp"

namespace collsim {

Chunk make_chunk(Rank origin, Elements lo, Elements hi) {
  if (origin < 0 || lo < 0 || lo >= hi) {
    throw Error(ErrorCode::InvalidParams, "bad chunk (" + std::to_string(origin) + ",[" +
                                              std::to_string(lo) + "," + std::to_string(hi) +
                                              "))");
  }
  return Chunk{origin, lo, hi};
}

ChunkSet::ChunkSet(std::span<const Chunk> chunks) {
  for (const auto& c : chunks) insert(c);
}

void ChunkSet::insert(const Chunk& chunk) {
  if (chunk.lo >= chunk.hi) {
    throw Error(ErrorCode::InvalidParams, "empty chunk");
  }
  // First chunk that may touch or overlap: same origin and hi >= chunk.lo.
  auto first = std::lower_bound(chunks_.begin(), chunks_.end(), chunk,
                                [](const Chunk& a, const Chunk& b) {
                                  return a.origin != b.origin ? a.origin < b.origin
                                                              : a.hi < b.lo;
                                });
  Chunk merged = chunk;
  auto last = first;
  while (last != chunks_.end() && last->origin == chunk.origin && last->lo <= merged.hi) {
    merged.lo = std::min(merged.lo, last->lo);
    merged.hi = std::max(merged.hi, last->hi);
    ++last;
  }
  first = chunks_.erase(first, last);
  chunks_.insert(first, merged);
}

void ChunkSet::insert(const ChunkSet& other) {
  for (const auto& c : other.chunks_) insert(c);
}

bool ChunkSet::contains(const Chunk& chunk) const {
  auto it = std::upper_bound(chunks_.begin(), chunks_.end(), chunk,
                             [](const Chunk& a, const Chunk& b) {
                               return a.origin != b.origin ? a.origin < b.origin : a.lo < b.lo;
                             });
  if (it == chunks_.begin()) return false;
  --it;
  return it->origin == chunk.origin && it->lo <= chunk.lo && chunk.hi <= it->hi;
}

std::vector<Chunk> ChunkSet::missing(const Chunk& chunk) const {
  std::vector<Chunk> gaps;
  Elements cursor = chunk.lo;
  for (const auto& held : chunks_) {
    if (held.origin != chunk.origin || held.hi <= cursor) continue;
    if (held.lo >= chunk.hi) break;
    if (held.lo > cursor) gaps.push_back({chunk.origin, cursor, held.lo});
    cursor = std::max(cursor, held.hi);
    if (cursor >= chunk.hi) break;
  }
  if (cursor < chunk.hi) gaps.push_back({chunk.origin, cursor, chunk.hi});
  return gaps;
}

ChunkSet ChunkSet::minus(const ChunkSet& other) const {
  ChunkSet out;
  for (const auto& c : chunks_) {
    for (const auto& gap : other.missing(c)) out.insert(gap);
  }
  return out;
}

Elements ChunkSet::elements() const noexcept {
  Elements total = 0;
  for (const auto& c : chunks_) total += c.size();
  return total;
}

}  // namespace collsim
