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

#include "collsim/schedule.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include "collsim/error.hpp"

namespace collsim {

std::string_view to_string(OpKind op) {
  switch (op) {
    case OpKind::Bcast: return "bcast";
    case OpKind::Scatter: return "scatter";
    case OpKind::Alltoall: return "alltoall";
  }
  return "?";
}

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Tree: return "tree";
    case Phase::NodeSplit: return "node-split";
    case Phase::NodeRelay: return "node-relay";
    case Phase::Lanes: return "lanes";
    case Phase::Final: return "final";
  }
  return "?";
}

EventKind kind_of(const Event& e, const MachineShape& m) {
  return m.node_of(e.src) == m.node_of(e.dst) ? EventKind::IntraNode : EventKind::InterNode;
}

std::size_t Schedule::event_count() const noexcept {
  std::size_t count = 0;
  for (const auto& round : rounds) count += round.events.size();
  return count;
}

Schedule merge_parallel(std::vector<Schedule> parts) {
  Schedule merged;
  if (parts.empty()) return merged;
  merged.meta = parts.front().meta;
  for (auto& part : parts) {
    if (merged.rounds.size() < part.rounds.size()) merged.rounds.resize(part.rounds.size());
    for (std::size_t i = 0; i < part.rounds.size(); ++i) {
      auto& into = merged.rounds[i];
      if (into.events.empty()) into.phase = part.rounds[i].phase;
      for (auto& e : part.rounds[i].events) into.events.push_back(std::move(e));
    }
  }
  return merged;
}

void append(Schedule& head, Schedule tail) {
  for (auto& round : tail.rounds) head.rounds.push_back(std::move(round));
}

void normalize(Schedule& s) {
  std::erase_if(s.rounds, [](const Round& r) { return r.events.empty(); });
  for (auto& round : s.rounds) {
    std::sort(round.events.begin(), round.events.end(), [](const Event& a, const Event& b) {
      return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
    });
  }
}

void tag_phase(Schedule& s, Phase phase) {
  for (auto& round : s.rounds) round.phase = phase;
}

namespace {

LegalityReport fail(std::size_t round, Rank rank, Role role, std::int32_t count,
                    std::string detail) {
  return LegalityReport{false, Violation{round, rank, role, count, std::move(detail)}};
}

LegalityReport check_port_counts(const Schedule& s, const MachineShape& m, std::int32_t limit) {
  const auto p = static_cast<std::size_t>(m.size());
  std::vector<std::int32_t> sends(p);
  std::vector<std::int32_t> recvs(p);
  for (std::size_t i = 0; i < s.rounds.size(); ++i) {
    std::fill(sends.begin(), sends.end(), 0);
    std::fill(recvs.begin(), recvs.end(), 0);
    for (const auto& e : s.rounds[i].events) {
      if (e.src < 0 || e.src >= m.size() || e.dst < 0 || e.dst >= m.size()) {
        return fail(i, e.src, Role::Send, 0, "rank out of range");
      }
      ++sends[static_cast<std::size_t>(e.src)];
      ++recvs[static_cast<std::size_t>(e.dst)];
    }
    // Report the lowest offending rank, sends before receives.
    for (std::size_t r = 0; r < p; ++r) {
      if (sends[r] > limit) {
        return fail(i, static_cast<Rank>(r), Role::Send, sends[r], "too many sends");
      }
      if (recvs[r] > limit) {
        return fail(i, static_cast<Rank>(r), Role::Recv, recvs[r], "too many receives");
      }
    }
  }
  return {};
}

}  // namespace

LegalityReport check_well_formed(const Schedule& s, const MachineShape& m) {
  for (std::size_t i = 0; i < s.rounds.size(); ++i) {
    std::set<std::pair<Rank, Rank>> pairs;
    for (const auto& e : s.rounds[i].events) {
      if (e.src < 0 || e.src >= m.size()) return fail(i, e.src, Role::Send, 0, "src out of range");
      if (e.dst < 0 || e.dst >= m.size()) return fail(i, e.dst, Role::Recv, 0, "dst out of range");
      if (e.src == e.dst) return fail(i, e.src, Role::Send, 0, "self transfer");
      if (e.payload.empty()) return fail(i, e.src, Role::Send, 0, "empty payload");
      for (const auto& c : e.payload) {
        if (c.lo < 0 || c.lo >= c.hi) return fail(i, e.src, Role::Send, 0, "bad chunk");
      }
      if (!pairs.emplace(e.src, e.dst).second) {
        return fail(i, e.src, Role::Send, 2, "duplicate (src, dst) in round");
      }
    }
  }
  return {};
}

LegalityReport check_ported_legality(const Schedule& s, const MachineShape& m, std::int32_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidParams, "k must be positive");
  return check_port_counts(s, m, k);
}

LegalityReport check_lane_step_legality(const Schedule& s, const MachineShape& m) {
  return check_port_counts(s, m, 1);
}

ScheduleStats schedule_stats(const Schedule& s, const MachineShape& m, std::optional<Rank> root) {
  ScheduleStats st;
  st.rounds = static_cast<std::int64_t>(s.rounds.size());
  const NodeId root_node = root ? m.node_of(*root) : -1;
  std::vector<std::int64_t> touching(static_cast<std::size_t>(m.nodes()));
  for (const auto& round : s.rounds) {
    if (!round.events.empty()) ++st.comm_rounds;
    std::fill(touching.begin(), touching.end(), 0);
    for (const auto& e : round.events) {
      const Elements size = e.elements();
      const NodeId from = m.node_of(e.src);
      const NodeId to = m.node_of(e.dst);
      if (from == to) {
        st.on_node_elements += size;
      } else {
        st.off_node_elements += size;
        ++touching[static_cast<std::size_t>(from)];
        ++touching[static_cast<std::size_t>(to)];
        if (from == root_node) st.root_node_out_elements += size;
      }
      if (root && e.src == *root) st.root_out_elements += size;
    }
    for (auto t : touching) st.max_node_concurrency = std::max(st.max_node_concurrency, t);
  }
  return st;
}

std::int64_t phase_rounds(const Schedule& s, Phase phase) {
  return std::count_if(s.rounds.begin(), s.rounds.end(), [phase](const Round& r) {
    return r.phase == phase && !r.events.empty();
  });
}

std::int64_t steps_excluding_final(const Schedule& s) {
  std::int64_t steps = 0;
  bool in_relay = false;
  for (const auto& round : s.rounds) {
    if (round.events.empty()) continue;
    if (round.phase == Phase::NodeRelay) {
      if (!in_relay) ++steps;
      in_relay = true;
      continue;
    }
    in_relay = false;
    if (round.phase != Phase::Final) ++steps;
  }
  return steps;
}

void write_dump(std::ostream& out, const Schedule& s) {
  using Line = std::tuple<Rank, Rank, Rank, Elements, Elements>;
  std::vector<Line> lines;
  for (std::size_t i = 0; i < s.rounds.size(); ++i) {
    lines.clear();
    for (const auto& e : s.rounds[i].events) {
      for (const auto& c : e.payload) lines.emplace_back(e.src, e.dst, c.origin, c.lo, c.hi);
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& [src, dst, origin, lo, hi] : lines) {
      out << i << ',' << src << ',' << dst << ',' << origin << ',' << lo << ',' << hi << '\n';
    }
  }
}

std::string dump(const Schedule& s) {
  std::ostringstream out;
  write_dump(out, s);
  return out.str();
}

}  // namespace collsim
