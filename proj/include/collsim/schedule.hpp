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
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "collsim/chunk.hpp"
#include "collsim/machine.hpp"

namespace collsim {

enum class OpKind { Bcast, Scatter, Alltoall };

std::string_view to_string(OpKind op);

enum class EventKind { IntraNode, InterNode };

/// One point-to-point transfer. A multi-chunk payload is a single message.
struct Event {
  Rank src = 0;
  Rank dst = 0;
  ChunkSet payload;

  Elements elements() const noexcept { return payload.elements(); }
};

EventKind kind_of(const Event& e, const MachineShape& m);

/// Role of a round inside a composed algorithm. Only used for reporting and
/// for the step accounting of the adapted lane algorithms.
enum class Phase : std::uint8_t {
  Tree,       // plain k-ported or single-level algorithm
  NodeSplit,  // node-local distribution before inter-node traffic
  NodeRelay,  // node-local relay to the k local roots after a first receipt
  Lanes,      // inter-node traffic
  Final,      // node-local completion phase
};

std::string_view to_string(Phase phase);

/// Events assumed to run concurrently.
struct Round {
  std::vector<Event> events;
  Phase phase = Phase::Tree;
};

struct ScheduleMeta {
  std::string algorithm;
  OpKind op = OpKind::Bcast;
  std::int32_t p = 1;
  std::int32_t nodes = 1;
  std::int32_t per_node = 1;
  std::int32_t k = 1;
  Elements c = 1;
  std::optional<Rank> root;
};

struct Schedule {
  std::vector<Round> rounds;
  ScheduleMeta meta;

  std::size_t event_count() const noexcept;
};

/// Runs schedules side by side: round i of the result is the union of round i
/// of every part. Parts must touch disjoint (src, dst) pairs.
Schedule merge_parallel(std::vector<Schedule> parts);

/// Appends the rounds of `tail` after those of `head`.
void append(Schedule& head, Schedule tail);

/// Drops rounds without events and sorts each round by (src, dst).
void normalize(Schedule& s);

/// Sets the phase tag of every round.
void tag_phase(Schedule& s, Phase phase);

enum class Role { Send, Recv };

struct Violation {
  std::size_t round = 0;
  Rank rank = 0;
  Role role = Role::Send;
  std::int32_t count = 0;
  std::string detail;
};

struct LegalityReport {
  bool passed = true;
  std::optional<Violation> first_violation;
};

/// Structural invariants: ranks in range, src != dst, non-empty payloads,
/// unique (src, dst) per round.
LegalityReport check_well_formed(const Schedule& s, const MachineShape& m);

/// Every rank sends at most k and receives at most k messages per round.
LegalityReport check_ported_legality(const Schedule& s, const MachineShape& m, std::int32_t k);

/// Every rank sends at most one and receives at most one message per round.
LegalityReport check_lane_step_legality(const Schedule& s, const MachineShape& m);

struct ScheduleStats {
  std::int64_t rounds = 0;
  std::int64_t comm_rounds = 0;
  Elements off_node_elements = 0;
  Elements on_node_elements = 0;
  Elements root_out_elements = 0;
  Elements root_node_out_elements = 0;
  std::int64_t max_node_concurrency = 0;

  Elements total_elements() const noexcept { return off_node_elements + on_node_elements; }

  friend bool operator==(const ScheduleStats&, const ScheduleStats&) = default;
};

ScheduleStats schedule_stats(const Schedule& s, const MachineShape& m,
                             std::optional<Rank> root = std::nullopt);

/// Number of rounds with at least one event whose phase is `phase`.
std::int64_t phase_rounds(const Schedule& s, Phase phase);

/// Steps outside the final phase, counting each maximal run of consecutive
/// NodeRelay rounds as a single step.
std::int64_t steps_excluding_final(const Schedule& s);

/// Writes `round,src,dst,origin,lo,hi` lines sorted by (round, src, dst, origin, lo).
void write_dump(std::ostream& out, const Schedule& s);
std::string dump(const Schedule& s);

}  // namespace collsim
