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

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

using collsim::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::string column(const std::vector<std::vector<std::string>>& rows, std::size_t row,
                   const std::string& name) {
  const auto& header = rows.at(0);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return rows.at(row).at(i);
  }
  FAIL("no column " << name);
  return {};
}

}  // namespace

TEST_CASE("run emits one row per case with the documented columns") {
  const auto r = run({"run", "--op", "bcast", "--algo", "kported", "--k", "2", "-N", "4", "-n", "1", "-c", "10"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"op", "algo", "k", "n", "N", "p", "c", "rounds",
                                            "comm_rounds", "off_node_elems", "on_node_elems",
                                            "root_out_elems", "root_node_out_elems", "modeled_time"});
  CHECK(column(rows, 1, "comm_rounds") == "2");

  const auto sc = csv(run({"run", "--op", "scatter", "--algo", "fulllane", "-N", "2", "-n", "2", "-c", "1", "--root", "0"}).out);
  CHECK(column(sc, 1, "root_node_out_elems") == "2");

  const auto a2a = csv(run({"run", "--op", "alltoall", "--algo", "klane", "-N", "3", "-n", "2", "-c", "1"}).out);
  CHECK(column(a2a, 1, "comm_rounds") == "5");
  CHECK(column(a2a, 1, "root_out_elems").empty());
}

TEST_CASE("run orders rows by algo, k, c") {
  const auto r = run({"run", "--op", "bcast", "--algo", "fulllane,kported", "--k", "2,1", "-N", "2", "-n", "2", "-c", "5,1"});
  REQUIRE(r.code == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 9);
  std::vector<std::string> keys;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    keys.push_back(rows[i][1] + "/" + rows[i][2] + "/" + rows[i][6]);
  }
  CHECK(keys == std::vector<std::string>{"kported/1/1", "kported/1/5", "kported/2/1", "kported/2/5",
                                         "fulllane/1/1", "fulllane/1/5", "fulllane/2/1", "fulllane/2/5"});
}

TEST_CASE("json output carries the same fields") {
  const auto r = run({"run", "--op", "alltoall", "--algo", "klane", "-N", "2", "-n", "2", "-c", "5", "--format", "json"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc.size() == 1);
  CHECK(doc[0]["off_node_elems"] == 40);
  CHECK(doc[0]["root_out_elems"].is_null());
}

TEST_CASE("verify passes generated schedules and fails mutated ones") {
  const auto all = run({"verify", "-N", "1,2,3", "-n", "1,2,3"});
  CHECK(all.code == 0);
  CHECK(all.out.find("FAIL") == std::string::npos);
  CHECK(all.out.find("PASS bcast kported 1 1 1 1 0\n") != std::string::npos);

  const auto mutated = run({"verify", "--op", "bcast", "--algo", "kported", "-N", "4", "-n", "1", "-c", "3", "--k", "1", "--root", "0", "--mutate", "drop-last-event"});
  CHECK(mutated.code == 1);
  CHECK(mutated.out == "FAIL bcast kported 1 4 1 3 0\n");
  CHECK_FALSE(mutated.err.empty());

  const auto single = run({"verify", "--op", "scatter", "--algo", "klane", "-N", "1", "-n", "1"});
  CHECK(single.code == 0);
  CHECK(single.out.find("PASS scatter klane 1 1 1") != std::string::npos);
}

TEST_CASE("dump") {
  const auto r = run({"dump", "--op", "bcast", "--algo", "kported", "-N", "4", "-n", "1", "-c", "5"});
  CHECK(r.code == 0);
  CHECK(r.out == "0,0,2,0,0,5\n1,0,1,0,0,5\n1,2,3,0,0,5\n");

  const auto empty = run({"dump", "--op", "bcast", "--algo", "kported", "-N", "1", "-n", "1"});
  CHECK(empty.code == 0);
  CHECK(empty.out.empty());

  const auto bad = run({"dump", "--bogus"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("Usage") != std::string::npos);

  CHECK(run({"dump", "--algo", "kported", "-c", "1,2"}).code == 2);
  CHECK(run({"dump", "--algo", "kported"}).code == 0);
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"run", "--op", "gather", "--algo", "kported"}).code == 2);
  CHECK(run({"run", "--algo", "kported", "--root", "9"}).code == 2);
  CHECK(run({"run", "--algo", "klane", "--k", "3", "-n", "2"}).code == 2);
  CHECK(run({"run", "--algo", "kported", "-c", "0"}).code == 2);
  CHECK(run({"run"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("sweep is a cross product with stable output") {
  const std::vector<std::string> args{"sweep", "--op", "bcast", "--algo", "klane", "--k", "1,2,3,4,5,6",
                                      "-N", "36", "-n", "32", "-c", "1,6,10,60,100"};
  const auto a = run(args);
  REQUIRE(a.code == 0);
  CHECK(csv(a.out).size() == 31);
  CHECK(run(args).out == a.out);

  const auto one = run({"sweep", "--op", "scatter", "--algo", "fulllane", "--k", "2", "-N", "2", "-n", "2", "-c", "4"});
  CHECK(csv(one.out).size() == 2);

  const auto everything = run({"sweep", "--op", "alltoall", "--k", "1", "-N", "2", "-n", "2", "-c", "1"});
  CHECK(csv(everything.out).size() == 4);

  const auto lanes = csv(run({"sweep", "--op", "alltoall", "--algo", "klane", "--k", "1,2,3,4", "-N", "4", "-n", "4", "-c", "8"}).out);
  for (std::size_t i = 2; i < lanes.size(); ++i) {
    CHECK(std::stod(column(lanes, i, "modeled_time")) <= std::stod(column(lanes, i - 1, "modeled_time")));
  }
}
