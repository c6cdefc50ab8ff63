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

#include "collsim/semantics.hpp"

#include <string>

#include "collsim/error.hpp"

namespace collsim {

namespace {

void check_params(const CollectiveParams& op, const MachineShape& m) {
  if (op.c < 1) throw Error(ErrorCode::InvalidParams, "c must be positive");
  if (op.op != OpKind::Alltoall && (op.root < 0 || op.root >= m.size())) {
    throw Error(ErrorCode::InvalidParams, "root " + std::to_string(op.root) + " out of range");
  }
}

std::string chunk_text(const Chunk& c) {
  return "(" + std::to_string(c.origin) + ",[" + std::to_string(c.lo) + "," + std::to_string(c.hi) +
         "))";
}

}  // namespace

MissingDataError::MissingDataError(std::size_t round, Rank src, Chunk chunk)
    : Error(ErrorCode::MissingData, "round " + std::to_string(round) + ": rank " +
                                        std::to_string(src) + " lacks " + chunk_text(chunk)),
      round_(round),
      src_(src),
      chunk_(chunk) {}

ProcState initial_state(const CollectiveParams& op, const MachineShape& m) {
  check_params(op, m);
  const auto p = m.size();
  ProcState st;
  st.held.resize(static_cast<std::size_t>(p));
  switch (op.op) {
    case OpKind::Bcast:
      st.held[static_cast<std::size_t>(op.root)].insert(Chunk{op.root, 0, op.c});
      break;
    case OpKind::Scatter:
      st.held[static_cast<std::size_t>(op.root)].insert(Chunk{op.root, 0, p * op.c});
      break;
    case OpKind::Alltoall:
      for (Rank r = 0; r < p; ++r) st.held[static_cast<std::size_t>(r)].insert(Chunk{r, 0, p * op.c});
      break;
  }
  return st;
}

std::vector<ChunkSet> expected_final(const CollectiveParams& op, const MachineShape& m) {
  check_params(op, m);
  const auto p = m.size();
  std::vector<ChunkSet> need(static_cast<std::size_t>(p));
  for (Rank i = 0; i < p; ++i) {
    auto& set = need[static_cast<std::size_t>(i)];
    switch (op.op) {
      case OpKind::Bcast: set.insert(Chunk{op.root, 0, op.c}); break;
      case OpKind::Scatter: set.insert(block_of(op.root, i, op.c)); break;
      case OpKind::Alltoall:
        for (Rank j = 0; j < p; ++j) set.insert(block_of(j, i, op.c));
        break;
    }
  }
  return need;
}

ProcState execute(const Schedule& s, ProcState state) {
  const auto p = state.held.size();
  for (std::size_t i = 0; i < s.rounds.size(); ++i) {
    const auto& events = s.rounds[i].events;
    for (const auto& e : events) {
      if (e.src < 0 || static_cast<std::size_t>(e.src) >= p || e.dst < 0 ||
          static_cast<std::size_t>(e.dst) >= p) {
        throw Error(ErrorCode::RankOutOfRange, "event in round " + std::to_string(i));
      }
      for (const auto& chunk : e.payload) {
        if (!state.held[static_cast<std::size_t>(e.src)].contains(chunk)) {
          throw MissingDataError(i, e.src, chunk);
        }
      }
    }
    for (const auto& e : events) state.held[static_cast<std::size_t>(e.dst)].insert(e.payload);
  }
  return state;
}

VerifyResult verify(const CollectiveParams& op, const MachineShape& m, const Schedule& s,
                    VerifyOptions options) {
  VerifyResult result;
  const ProcState start = initial_state(op, m);
  ProcState end;
  try {
    end = execute(s, start);
  } catch (const MissingDataError& e) {
    result.passed = false;
    result.failures.push_back({e.src(), e.chunk(), FailureKind::Fault, e.round()});
    return result;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankOutOfRange) throw;
    result.passed = false;
    result.failures.push_back({-1, Chunk{}, FailureKind::Fault, std::nullopt});
    return result;
  }

  const auto need = expected_final(op, m);
  for (std::size_t r = 0; r < need.size(); ++r) {
    for (const auto& chunk : need[r]) {
      for (const auto& gap : end.held[r].missing(chunk)) {
        result.failures.push_back({static_cast<Rank>(r), gap, FailureKind::Missing, std::nullopt});
      }
    }
    if (options.strict) {
      ChunkSet allowed = need[r];
      allowed.insert(start.held[r]);
      for (const auto& extra : end.held[r].minus(allowed)) {
        result.failures.push_back({static_cast<Rank>(r), extra, FailureKind::Extra, std::nullopt});
      }
    }
  }
  result.passed = result.failures.empty();
  return result;
}

std::string describe(const Failure& f) {
  std::string text;
  switch (f.kind) {
    case FailureKind::Missing: text = "rank " + std::to_string(f.rank) + " missing "; break;
    case FailureKind::Extra: text = "rank " + std::to_string(f.rank) + " holds extra "; break;
    case FailureKind::Fault:
      text = "round " + (f.round ? std::to_string(*f.round) : std::string("?")) + ": rank " +
             std::to_string(f.rank) + " sends data it lacks ";
      break;
  }
  return text + chunk_text(f.chunk);
}

}  // namespace collsim
