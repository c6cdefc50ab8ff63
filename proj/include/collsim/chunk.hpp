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

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "collsim/machine.hpp"

namespace collsim {

using Elements = std::int64_t;

/// Element interval [lo, hi) of the buffer initially owned by `origin`.
struct Chunk {
  Rank origin = 0;
  Elements lo = 0;
  Elements hi = 0;

  Elements size() const noexcept { return hi - lo; }

  friend auto operator<=>(const Chunk&, const Chunk&) = default;
};

/// Chunk with its invariants checked (lo >= 0, lo < hi).
Chunk make_chunk(Rank origin, Elements lo, Elements hi);

/// Canonical set of chunks: sorted by (origin, lo), no overlaps, adjacent
/// intervals of the same origin merged.
class ChunkSet {
 public:
  ChunkSet() = default;
  explicit ChunkSet(std::span<const Chunk> chunks);

  void insert(const Chunk& chunk);
  void insert(const ChunkSet& other);

  /// True iff every element of `chunk` is held.
  bool contains(const Chunk& chunk) const;
  /// Parts of `chunk` not held, in canonical order.
  std::vector<Chunk> missing(const Chunk& chunk) const;
  /// Parts of this set outside `other`.
  ChunkSet minus(const ChunkSet& other) const;

  Elements elements() const noexcept;
  bool empty() const noexcept { return chunks_.empty(); }
  std::size_t size() const noexcept { return chunks_.size(); }
  const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
  auto begin() const noexcept { return chunks_.begin(); }
  auto end() const noexcept { return chunks_.end(); }

  friend bool operator==(const ChunkSet&, const ChunkSet&) = default;

 private:
  std::vector<Chunk> chunks_;
};

}  // namespace collsim
