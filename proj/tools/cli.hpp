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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "collsim/algorithms.hpp"
#include "collsim/cost.hpp"
#include "collsim/machine.hpp"
#include "collsim/schedule.hpp"

namespace collsim::cli {

enum class Mode { Run, Verify, Dump, Sweep };
enum class Format { Csv, Json };
enum class Mutation { None, DropLastEvent, DropFirstEvent };

/// Everything a subcommand needs. List-valued fields expand into a cross
/// product of cases.
struct RunSpec {
  Mode mode = Mode::Run;
  std::vector<OpKind> ops{OpKind::Bcast};
  std::vector<Algorithm> algos;
  std::vector<std::int32_t> nodes{2};
  std::vector<std::int32_t> per_node{2};
  std::vector<std::int32_t> ks{1};
  Placement placement = Placement::Block;
  std::vector<std::string> roots{"0"};  // integers, "mid" or "last"
  std::vector<Elements> counts{1};
  double alpha_inter = 1.0;
  double beta_inter = 0.01;
  double alpha_intra = 0.3;
  double beta_intra = 0.002;
  Format format = Format::Csv;
  Mutation mutate = Mutation::None;
  bool full_node_bcast = false;
  bool strict = false;
};

struct Case {
  Algorithm algo = Algorithm::KPorted;
  MachineShape machine{1, 1, 1};
  CollectiveParams params;
  bool full_node_bcast = false;
};

/// Cross product in (op, N, n, algo, k, root, c) order. Lane algorithms skip
/// k > n. Throws collsim::Error for unusable specs.
std::vector<Case> expand(const RunSpec& spec);

/// Generates the case's schedule and applies the requested mutation, if any.
Schedule build_schedule(const Case& c, const RunSpec& spec);

struct Row {
  OpKind op = OpKind::Bcast;
  Algorithm algo = Algorithm::KPorted;
  std::int32_t k = 1;
  std::int32_t n = 1;
  std::int32_t N = 1;
  std::int32_t p = 1;
  Elements c = 1;
  ScheduleStats stats;
  bool has_root = false;
  double modeled_time = 0.0;
};

Row evaluate(const Case& c, const RunSpec& spec);

void write_rows(std::ostream& out, const std::vector<Row>& rows, Format format);

int cmd_run(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_verify(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_dump(const RunSpec& spec, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunSpec& spec, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (without the program name) and dispatches.
/// Exit codes: 0 success, 1 verification failure, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace collsim::cli
