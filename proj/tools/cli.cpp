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

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "collsim/error.hpp"
#include "collsim/semantics.hpp"

namespace collsim::cli {

namespace {

bool is_lane_algo(Algorithm a) { return a != Algorithm::KPorted; }

Rank resolve_root(const std::string& token, std::int32_t p) {
  if (token == "last") return p - 1;
  if (token == "mid") return p / 2;
  std::size_t used = 0;
  Rank root = 0;
  try {
    root = static_cast<Rank>(std::stol(token, &used));
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size()) throw Error(ErrorCode::InvalidParams, "bad root '" + token + "'");
  if (root < 0 || root >= p) {
    throw Error(ErrorCode::InvalidParams,
                "root " + token + " outside [0, " + std::to_string(p) + ")");
  }
  return root;
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", t);
  return buf;
}

}  // namespace

std::vector<Case> expand(const RunSpec& spec) {
  if (spec.algos.empty()) throw Error(ErrorCode::InvalidParams, "no algorithm selected");
  for (auto c : spec.counts) {
    if (c < 1) throw Error(ErrorCode::InvalidParams, "counts must be positive");
  }
  for (auto k : spec.ks) {
    if (k < 1) throw Error(ErrorCode::InvalidParams, "k must be positive");
  }
  const auto algos = sorted_unique(spec.algos);
  const auto ks = sorted_unique(spec.ks);
  const auto counts = sorted_unique(spec.counts);

  std::vector<Case> cases;
  for (OpKind op : spec.ops) {
    for (auto N : spec.nodes) {
      for (auto n : spec.per_node) {
        const MachineShape base(N, n, 1, spec.placement);
        for (Algorithm algo : algos) {
          for (auto k : ks) {
            if (is_lane_algo(algo) && k > n) continue;
            // Ports are an algorithm parameter; the machine keeps at most n lanes.
            const MachineShape machine = base.with_lanes(std::min(k, n));
            std::vector<std::optional<Rank>> roots;
            if (op == OpKind::Alltoall) {
              roots.push_back(std::nullopt);
            } else {
              std::vector<Rank> resolved;
              for (const auto& token : spec.roots) resolved.push_back(resolve_root(token, machine.size()));
              for (Rank r : sorted_unique(resolved)) roots.push_back(r);
            }
            for (const auto& root : roots) {
              for (auto c : counts) {
                Case one{algo, machine, CollectiveParams{op, root.value_or(0), c, k},
                         spec.full_node_bcast};
                cases.push_back(one);
              }
            }
          }
        }
      }
    }
  }
  if (cases.empty()) {
    throw Error(ErrorCode::InvalidParams, "no valid case (lane algorithms need k <= n)");
  }
  return cases;
}

Schedule build_schedule(const Case& c, const RunSpec& spec) {
  Schedule s = generate(c.algo, c.params, c.machine, GenerateOptions{c.full_node_bcast});
  if (spec.mutate == Mutation::None) return s;
  auto with_events = [](const Round& r) { return !r.events.empty(); };
  if (spec.mutate == Mutation::DropLastEvent) {
    auto it = std::find_if(s.rounds.rbegin(), s.rounds.rend(), with_events);
    if (it != s.rounds.rend()) it->events.pop_back();
  } else {
    auto it = std::find_if(s.rounds.begin(), s.rounds.end(), with_events);
    if (it != s.rounds.end()) it->events.erase(it->events.begin());
  }
  return s;
}

Row evaluate(const Case& c, const RunSpec& spec) {
  const Schedule s = build_schedule(c, spec);
  const bool rooted = c.params.op != OpKind::Alltoall;
  Row row;
  row.op = c.params.op;
  row.algo = c.algo;
  row.k = c.params.k;
  row.n = c.machine.per_node();
  row.N = c.machine.nodes();
  row.p = c.machine.size();
  row.c = c.params.c;
  row.has_root = rooted;
  row.stats = schedule_stats(s, c.machine, rooted ? std::optional<Rank>(c.params.root) : std::nullopt);
  CostParams cp{spec.alpha_inter, spec.beta_inter, spec.alpha_intra, spec.beta_intra,
                c.machine.lanes()};
  row.modeled_time = time_schedule(s, c.machine, cp).total_time;
  return row;
}

void write_rows(std::ostream& out, const std::vector<Row>& rows, Format format) {
  if (format == Format::Json) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json j;
      j["op"] = to_string(r.op);
      j["algo"] = to_string(r.algo);
      j["k"] = r.k;
      j["n"] = r.n;
      j["N"] = r.N;
      j["p"] = r.p;
      j["c"] = r.c;
      j["rounds"] = r.stats.rounds;
      j["comm_rounds"] = r.stats.comm_rounds;
      j["off_node_elems"] = r.stats.off_node_elements;
      j["on_node_elems"] = r.stats.on_node_elements;
      j["root_out_elems"] = r.has_root ? nlohmann::ordered_json(r.stats.root_out_elements) : nullptr;
      j["root_node_out_elems"] =
          r.has_root ? nlohmann::ordered_json(r.stats.root_node_out_elements) : nullptr;
      j["modeled_time"] = r.modeled_time;
      doc.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
    return;
  }
  out << "op,algo,k,n,N,p,c,rounds,comm_rounds,off_node_elems,on_node_elems,root_out_elems,"
         "root_node_out_elems,modeled_time\n";
  for (const auto& r : rows) {
    out << to_string(r.op) << ',' << to_string(r.algo) << ',' << r.k << ',' << r.n << ',' << r.N
        << ',' << r.p << ',' << r.c << ',' << r.stats.rounds << ',' << r.stats.comm_rounds << ','
        << r.stats.off_node_elements << ',' << r.stats.on_node_elements << ',';
    if (r.has_root) {
      out << r.stats.root_out_elements << ',' << r.stats.root_node_out_elements;
    } else {
      out << ',';
    }
    out << ',' << format_time(r.modeled_time) << '\n';
  }
}

int cmd_run(const RunSpec& spec, std::ostream& out, std::ostream&) {
  std::vector<Row> rows;
  for (const auto& c : expand(spec)) rows.push_back(evaluate(c, spec));
  write_rows(out, rows, spec.format);
  return 0;
}

int cmd_sweep(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  return cmd_run(spec, out, err);
}

int cmd_verify(const RunSpec& spec, std::ostream& out, std::ostream& err) {
  bool all_passed = true;
  for (const auto& c : expand(spec)) {
    const Schedule s = build_schedule(c, spec);
    const auto result = verify(c.params, c.machine, s, VerifyOptions{spec.strict});
    all_passed = all_passed && result.passed;
    out << (result.passed ? "PASS " : "FAIL ") << to_string(c.params.op) << ' '
        << to_string(c.algo) << ' ' << c.params.k << ' ' << c.machine.nodes() << ' '
        << c.machine.per_node() << ' ' << c.params.c << ' ';
    if (c.params.op == OpKind::Alltoall) {
      out << '-';
    } else {
      out << c.params.root;
    }
    out << '\n';
    if (!result.passed && !result.failures.empty()) {
      err << "  " << describe(result.failures.front());
      if (result.failures.size() > 1) err << " (+" << result.failures.size() - 1 << " more)";
      err << '\n';
    }
  }
  return all_passed ? 0 : 1;
}

int cmd_dump(const RunSpec& spec, std::ostream& out, std::ostream&) {
  const auto cases = expand(spec);
  if (cases.size() != 1) {
    throw Error(ErrorCode::InvalidParams,
                "dump needs exactly one case, got " + std::to_string(cases.size()));
  }
  write_dump(out, build_schedule(cases.front(), spec));
  return 0;
}

namespace {

const std::map<std::string, OpKind> kOps{
    {"bcast", OpKind::Bcast}, {"scatter", OpKind::Scatter}, {"alltoall", OpKind::Alltoall}};
const std::map<std::string, Algorithm> kAlgos{
    {"kported", Algorithm::KPorted}, {"klane", Algorithm::KLane}, {"fulllane", Algorithm::FullLane}};
const std::map<std::string, Placement> kPlacements{
    {"block", Placement::Block}, {"rr", Placement::RoundRobin}};
const std::map<std::string, Format> kFormats{{"csv", Format::Csv}, {"json", Format::Json}};
const std::map<std::string, Mutation> kMutations{{"none", Mutation::None},
                                                 {"drop-last-event", Mutation::DropLastEvent},
                                                 {"drop-first-event", Mutation::DropFirstEvent}};

struct Bound {
  CLI::Option* op;
  CLI::Option* algo;
  CLI::Option* N;
  CLI::Option* n;
  CLI::Option* k;
  CLI::Option* root;
  CLI::Option* c;
};

Bound add_spec_options(CLI::App& cmd, RunSpec& spec) {
  Bound b{};
  b.op = cmd.add_option("--op", spec.ops, "bcast|scatter|alltoall (list allowed)")
             ->delimiter(',')
             ->transform(CLI::CheckedTransformer(kOps));
  b.algo = cmd.add_option("--algo", spec.algos, "kported|klane|fulllane (list allowed)")
               ->delimiter(',')
               ->transform(CLI::CheckedTransformer(kAlgos));
  b.N = cmd.add_option("-N", spec.nodes, "node count (list allowed)")->delimiter(',');
  b.n = cmd.add_option("-n", spec.per_node, "processors per node (list allowed)")->delimiter(',');
  b.k = cmd.add_option("--k", spec.ks, "ports (kported) or lanes (list allowed)")->delimiter(',');
  cmd.add_option_function<std::string>(
         "--placement", [&spec](const std::string& v) { spec.placement = kPlacements.at(v); },
         "block|rr")
      ->check(CLI::IsMember(kPlacements));
  b.root = cmd.add_option("--root", spec.roots, "root rank, 'mid' or 'last' (list allowed)")
               ->delimiter(',');
  b.c = cmd.add_option("-c", spec.counts, "element count per block (list allowed)")->delimiter(',');
  cmd.add_option("--alpha-inter", spec.alpha_inter, "latency per off-node message");
  cmd.add_option("--beta-inter", spec.beta_inter, "time per off-node element");
  cmd.add_option("--alpha-intra", spec.alpha_intra, "latency per on-node message");
  cmd.add_option("--beta-intra", spec.beta_intra, "time per on-node element");
  cmd.add_option("--format", spec.format, "csv|json")->transform(CLI::CheckedTransformer(kFormats));
  cmd.add_option("--mutate", spec.mutate, "drop-last-event|drop-first-event (testing hook)")
      ->transform(CLI::CheckedTransformer(kMutations));
  cmd.add_flag("--full-node-bcast", spec.full_node_bcast,
               "klane bcast: relay to the whole node instead of k local roots");
  cmd.add_flag("--strict", spec.strict, "verify: also report data held beyond the requirement");
  return b;
}

void apply_defaults(RunSpec& spec, const Bound& b) {
  const std::vector<Algorithm> all_algos{Algorithm::KPorted, Algorithm::KLane, Algorithm::FullLane};
  if (spec.mode == Mode::Verify) {
    if (b.op->count() == 0) spec.ops = {OpKind::Bcast, OpKind::Scatter, OpKind::Alltoall};
    if (b.algo->count() == 0) spec.algos = all_algos;
    if (b.N->count() == 0) spec.nodes = {1, 2, 3, 4};
    if (b.n->count() == 0) spec.per_node = {1, 2, 3, 4};
    if (b.k->count() == 0) spec.ks = {1, 2, 3};
    if (b.root->count() == 0) spec.roots = {"0", "mid", "last"};
    if (b.c->count() == 0) spec.counts = {1, 5, 7};
  } else if (spec.mode == Mode::Sweep) {
    if (b.algo->count() == 0) spec.algos = all_algos;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generate, verify and cost broadcast/scatter/alltoall schedules", "collsim"};
  app.require_subcommand(1);
  RunSpec spec;
  struct Sub {
    Mode mode;
    CLI::App* app;
    Bound bound;
  };
  std::vector<Sub> subs;
  const std::pair<const char*, const char*> names[] = {
      {"run", "print one statistics row per case"},
      {"verify", "check every case with the token-tracking oracle"},
      {"dump", "print the schedule of a single case"},
      {"sweep", "statistics rows over the cross product of lists"}};
  const Mode modes[] = {Mode::Run, Mode::Verify, Mode::Dump, Mode::Sweep};
  for (std::size_t i = 0; i < 4; ++i) {
    auto* cmd = app.add_subcommand(names[i].first, names[i].second);
    subs.push_back({modes[i], cmd, add_spec_options(*cmd, spec)});
  }

  std::vector<std::string> argv_store{"collsim"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << active->help();
    return 2;
  }

  const Sub* chosen = nullptr;
  for (const auto& sub : subs) {
    if (sub.app->parsed()) chosen = &sub;
  }
  spec.mode = chosen->mode;
  apply_defaults(spec, chosen->bound);

  try {
    switch (spec.mode) {
      case Mode::Run: return cmd_run(spec, out, err);
      case Mode::Verify: return cmd_verify(spec, out, err);
      case Mode::Dump: return cmd_dump(spec, out, err);
      case Mode::Sweep: return cmd_sweep(spec, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace collsim::cli
