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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "collsim/algorithms.hpp"
#include "collsim/chunk.hpp"
#include "collsim/error.hpp"
#include "collsim/machine.hpp"
#include "collsim/schedule.hpp"

namespace collsim {

/// Chunks held by every rank.
struct ProcState {
  std::vector<ChunkSet> held;

  friend bool operator==(const ProcState&, const ProcState&) = default;
};

/// Thrown by execute when a sender does not hold part of its payload at the
/// start of the round.
class MissingDataError : public Error {
 public:
  MissingDataError(std::size_t round, Rank src, Chunk chunk);

  std::size_t round() const noexcept { return round_; }
  Rank src() const noexcept { return src_; }
  const Chunk& chunk() const noexcept { return chunk_; }

 private:
  std::size_t round_;
  Rank src_;
  Chunk chunk_;
};

ProcState initial_state(const CollectiveParams& op, const MachineShape& m);

/// Per-rank chunks that must be held once the collective completes.
std::vector<ChunkSet> expected_final(const CollectiveParams& op, const MachineShape& m);

/// Applies rounds in order. Each round is checked against the state before
/// it, so data received in a round cannot be forwarded in the same round.
ProcState execute(const Schedule& s, ProcState state);

enum class FailureKind { Missing, Extra, Fault };

struct Failure {
  Rank rank = 0;
  Chunk chunk;
  FailureKind kind = FailureKind::Missing;
  std::optional<std::size_t> round;  // set for faults
};

struct VerifyResult {
  bool passed = true;
  std::vector<Failure> failures;
};

struct VerifyOptions {
  /// Also report data held beyond the requirement and the initial state.
  bool strict = false;
};

VerifyResult verify(const CollectiveParams& op, const MachineShape& m, const Schedule& s,
                    VerifyOptions options = {});

std::string describe(const Failure& f);

}  // namespace collsim
