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
#include <vector>

#include "collsim/machine.hpp"
#include "collsim/schedule.hpp"

namespace collsim {

/// Linear latency-bandwidth coefficients. Off-node transfers share the k
/// lanes of a node: beyond k concurrent transfers, beta_inter is stretched
/// proportionally. Latency is never shared.
struct CostParams {
  double alpha_inter = 1.0;
  double beta_inter = 0.01;
  double alpha_intra = 0.3;
  double beta_intra = 0.002;
  std::int32_t k = 1;
};

/// Defaults above with the lane count taken from the machine.
CostParams default_cost_params(const MachineShape& m);

struct Bottleneck {
  Rank src = 0;
  Rank dst = 0;
  Elements size = 0;
  double factor = 1.0;
};

struct CostReport {
  double total_time = 0.0;
  std::vector<double> per_round;
  std::vector<std::optional<Bottleneck>> per_round_bottleneck;
};

/// max(1, S/k, R/k) for an off-node event, where S (R) counts the round's
/// off-node events leaving the sender's node (entering the receiver's node).
/// On-node events are never slowed down.
double contention_factor(const Round& round, const MachineShape& m, const Event& e,
                         std::int32_t k);
inline double contention_factor(const Round& round, const MachineShape& m, const Event& e) {
  return contention_factor(round, m, e, m.lanes());
}

double event_time(const Event& e, EventKind kind, double factor, const CostParams& cp);

CostReport time_schedule(const Schedule& s, const MachineShape& m, const CostParams& cp);

}  // namespace collsim
