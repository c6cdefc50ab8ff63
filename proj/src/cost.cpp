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

#include "collsim/cost.hpp"

#include <algorithm>
#include <vector>

#include "collsim/error.hpp"

namespace collsim {

CostParams default_cost_params(const MachineShape& m) {
  CostParams cp;
  cp.k = m.lanes();
  return cp;
}

namespace {

void check_cost(const CostParams& cp) {
  if (cp.k < 1) throw Error(ErrorCode::InvalidParams, "cost lanes must be positive");
  if (cp.alpha_inter < 0 || cp.beta_inter < 0 || cp.alpha_intra < 0 || cp.beta_intra < 0) {
    throw Error(ErrorCode::InvalidParams, "cost coefficients must be non-negative");
  }
}

struct NodeLoad {
  std::vector<std::int32_t> out;
  std::vector<std::int32_t> in;
};

NodeLoad node_load(const Round& round, const MachineShape& m) {
  NodeLoad load{std::vector<std::int32_t>(static_cast<std::size_t>(m.nodes())),
                std::vector<std::int32_t>(static_cast<std::size_t>(m.nodes()))};
  for (const auto& e : round.events) {
    const NodeId from = m.node_of(e.src);
    const NodeId to = m.node_of(e.dst);
    if (from == to) continue;
    ++load.out[static_cast<std::size_t>(from)];
    ++load.in[static_cast<std::size_t>(to)];
  }
  return load;
}

double factor_from(const NodeLoad& load, const MachineShape& m, const Event& e, std::int32_t k) {
  const NodeId from = m.node_of(e.src);
  const NodeId to = m.node_of(e.dst);
  if (from == to) return 1.0;
  const double lanes = static_cast<double>(k);
  return std::max({1.0, load.out[static_cast<std::size_t>(from)] / lanes,
                   load.in[static_cast<std::size_t>(to)] / lanes});
}

}  // namespace

double contention_factor(const Round& round, const MachineShape& m, const Event& e,
                         std::int32_t k) {
  if (k < 1) throw Error(ErrorCode::InvalidParams, "k must be positive");
  return factor_from(node_load(round, m), m, e, k);
}

double event_time(const Event& e, EventKind kind, double factor, const CostParams& cp) {
  const auto size = static_cast<double>(e.elements());
  if (kind == EventKind::IntraNode) return cp.alpha_intra + cp.beta_intra * size;
  return cp.alpha_inter + factor * cp.beta_inter * size;
}

CostReport time_schedule(const Schedule& s, const MachineShape& m, const CostParams& cp) {
  check_cost(cp);
  CostReport report;
  report.per_round.reserve(s.rounds.size());
  report.per_round_bottleneck.reserve(s.rounds.size());
  for (const auto& round : s.rounds) {
    const NodeLoad load = node_load(round, m);
    double slowest = 0.0;
    std::optional<Bottleneck> worst;
    for (const auto& e : round.events) {
      const double factor = factor_from(load, m, e, cp.k);
      const double t = event_time(e, kind_of(e, m), factor, cp);
      if (!worst || t > slowest) {
        slowest = t;
        worst = Bottleneck{e.src, e.dst, e.elements(), factor};
      }
    }
    report.per_round.push_back(slowest);
    report.per_round_bottleneck.push_back(worst);
    report.total_time += slowest;
  }
  return report;
}

}  // namespace collsim
