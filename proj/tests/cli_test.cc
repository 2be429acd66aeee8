// Copyright 2026 The Omnirelay Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "omnirelay/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "omnirelay/error.h"
#include "omnirelay/rate_analysis.h"

namespace omnirelay {
namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "omnirelay");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

using Row = std::map<std::string, std::string>;

// Rows of the first CSV table (up to the first blank line).
std::vector<Row> csv_rows(const std::string& text) {
  std::istringstream in(text);
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::string line;
  std::getline(in, line);
  const std::vector<std::string> header = split(line);
  std::vector<Row> rows;
  while (std::getline(in, line) && !line.empty()) {
    const std::vector<std::string> cells = split(line);
    EXPECT_EQ(cells.size(), header.size()) << line;
    Row r;
    for (size_t k = 0; k < header.size() && k < cells.size(); ++k) r[header[k]] = cells[k];
    rows.push_back(r);
  }
  return rows;
}

void expect_single_error(const Outcome& o, const std::string& code) {
  EXPECT_EQ(o.code, 2);
  EXPECT_TRUE(o.out.empty());
  EXPECT_EQ(o.err.rfind("error: code=" + code + " detail=", 0), 0u) << o.err;
  EXPECT_EQ(std::count(o.err.begin(), o.err.end(), '\n'), 1) << o.err;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const std::filesystem::path p =
      std::filesystem::temp_directory_path() / ("omnirelay_cli_test_" + name);
  std::ofstream(p) << body;
  return p;
}

TEST(CliTest, AnalyzeRegularLine) {
  const Outcome o = invoke({"analyze", "--n", "6"});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::vector<Row> rows = csv_rows(o.out);
  ASSERT_EQ(rows.size(), 1u);
  const Topology t = regular_line(6, 1.0, GainFunction::power_law(2.0), 10.0, 1.0);
  EXPECT_EQ(rows[0].at("n"), "6");
  EXPECT_EQ(rows[0].at("topology_hash"), t.hash());
  EXPECT_NEAR(std::stod(rows[0].at("rate_bound")), allcast_rate_bound(t), 5e-7);
  EXPECT_NEAR(std::stod(rows[0].at("max_rate")), allcast_rate_bound(t), 1e-5);
  EXPECT_EQ(rows[0].at("verdict"), "true");
  EXPECT_EQ(rows[0].at("regular_check"), "pass");
}

TEST(CliTest, AnalyzeJsonCarriesConstraints) {
  const Outcome o = invoke({"analyze", "--n", "5", "--rate", "0.5", "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const nlohmann::json j = nlohmann::json::parse(o.out);
  EXPECT_EQ(j.at("spec_version"), kSchemaVersion);
  EXPECT_EQ(j.at("command"), "analyze");
  EXPECT_EQ(j.at("ordering").size(), 5u);
  // Positions 2..4 contribute (i-2) + (n-i-1) pairs each.
  EXPECT_EQ(j.at("constraints").size(), 6u);
  EXPECT_NEAR(j.at("rate").get<double>(), 0.5, 1e-12);
}

TEST(CliTest, AnalyzeIrregularLineReportsBindingConstraint) {
  const Outcome o = invoke({"analyze", "--preset", "line", "--positions", "0", "0.3", "0.6",
                            "0.9", "8"});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::vector<Row> rows = csv_rows(o.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_FALSE(rows[0].at("binding_constraint").empty());
  EXPECT_LE(std::stod(rows[0].at("max_rate")), std::stod(rows[0].at("rate_bound")));
  EXPECT_EQ(rows[0].at("regular_check"), "n/a");
}

TEST(CliTest, SimulateAtZeroRateSucceeds) {
  const Outcome o = invoke({"simulate", "--n", "5", "--rate", "0"});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::vector<Row> rows = csv_rows(o.out);
  EXPECT_EQ(rows.size(), 5u * 10u);  // default B = 2n blocks
  for (const Row& r : rows) {
    EXPECT_EQ(r.at("scheduled_success"), "true");
    EXPECT_EQ(r.at("missing"), "");
  }
  const std::string summary = o.out.substr(o.out.find("\n\n") + 2);
  const std::vector<Row> nodes = csv_rows(summary);
  ASSERT_EQ(nodes.size(), 5u);
  for (const Row& r : nodes) EXPECT_EQ(r.at("failures"), "0");
}

TEST(CliTest, SimulateAboveTheBoundFails) {
  const Topology t = regular_line(4, 1.0, GainFunction::power_law(2.0), 10.0, 1.0);
  std::ostringstream rate;
  rate.precision(17);
  rate << 1.001 * allcast_rate_bound(t);
  const Outcome o = invoke({"simulate", "--n", "4", "--rate", rate.str(), "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  const nlohmann::json j = nlohmann::json::parse(o.out);
  int failures = 0;
  for (const auto& node : j.at("nodes")) failures += node.at("failures").get<int>();
  EXPECT_GT(failures, 0);
}

TEST(CliTest, SweepRows) {
  const Outcome o = invoke({"sweep", "--n-list", "2,3,4,5,6,7,8,9,10"});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::vector<Row> rows = csv_rows(o.out);
  ASSERT_EQ(rows.size(), 9u);
  double previous = INFINITY;
  for (int k = 0; k < 9; ++k) {
    const Row& r = rows[k];
    const int n = k + 2;
    EXPECT_EQ(r.at("n"), std::to_string(n));
    const double bound = std::stod(r.at("rate_bound"));
    EXPECT_NEAR(bound,
                allcast_rate_bound(regular_line(n, 1.0, GainFunction::power_law(2.0), 10.0, 1.0)),
                5e-7);
    EXPECT_LT(bound, previous);
    previous = bound;
    EXPECT_EQ(r.at("pass"), "pass");
  }
}

TEST(CliTest, SweepOrdersByKeyAcrossGains) {
  const Outcome o = invoke({"sweep", "--n-list", "4,2,3", "--gain-list", "exp:1,pl:2"});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::vector<Row> rows = csv_rows(o.out);
  ASSERT_EQ(rows.size(), 6u);
  std::vector<std::string> keys;
  for (const Row& r : rows) keys.push_back(r.at("n") + "/" + r.at("gain"));
  EXPECT_EQ(keys, (std::vector<std::string>{"2/exp:1", "2/pl:2", "3/exp:1", "3/pl:2",
                                            "4/exp:1", "4/pl:2"}));
}

TEST(CliTest, BinDemo) {
  const Outcome o = invoke({"bin-demo", "--sizes", "3,5"});
  ASSERT_EQ(o.code, 0) << o.err;
  const std::vector<Row> rows = csv_rows(o.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].at("vectors"), "15");
  EXPECT_EQ(rows[0].at("decodes"), "30");
  EXPECT_EQ(rows[0].at("failures"), "0");
  EXPECT_EQ(rows[0].at("property"), "true");
}

TEST(CliTest, RunsAreByteIdentical) {
  const std::vector<std::vector<std::string>> commands = {
      {"analyze", "--n", "7", "--seed", "42"},
      {"simulate", "--n", "6", "--sizes", "3,4,5,6,7,8", "--seed", "42"},
      {"sweep", "--n-list", "2,3,4,5,6,7,8", "--gain-list", "pl:2,exp:1,const"},
      {"simulate", "--preset", "ring", "--n", "5", "--rate", "0.2", "--format", "json"},
  };
  for (const auto& c : commands) {
    const Outcome a = invoke(c), b = invoke(c);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
}

TEST(CliTest, WritesToOutFile) {
  const std::filesystem::path p = temp_file("out.csv", "");
  const Outcome o = invoke({"analyze", "--n", "4", "--out", p.string()});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(o.out.empty());
  std::stringstream body;
  body << std::ifstream(p).rdbuf();
  EXPECT_EQ(body.str(), invoke({"analyze", "--n", "4"}).out);
  std::filesystem::remove(p);
}

TEST(CliTest, ErrorsAreSingleLines) {
  expect_single_error(invoke({"analyze", "--bogus"}), "PARSE_ERROR");
  expect_single_error(invoke({"analyze", "--rate", "fast"}), "PARSE_ERROR");
  expect_single_error(invoke({"frobnicate"}), "PARSE_ERROR");
  expect_single_error(invoke({"sweep"}), "PARSE_ERROR");
  expect_single_error(invoke({"bin-demo"}), "PARSE_ERROR");
  expect_single_error(invoke({"analyze", "--power", "-1"}), "INVALID_ARGUMENT");
  expect_single_error(invoke({"analyze", "--n", "1"}), "INVALID_ARGUMENT");
  expect_single_error(invoke({"analyze", "--topology", "/nonexistent/topo.txt"}), "IO_ERROR");
  expect_single_error(invoke({"analyze", "--preset", "ring", "--n", "4"}), "PRECONDITION_FAILED");
}

TEST(TopologyFileTest, PositionRows) {
  const Topology t = parse_topology(
      "# three nodes\nnodes 3\ngain pl:2\npower 10\nnoise 1\npos 1 0\npos 2 1 # mid\npos 3 2\n",
      TopologySource{});
  EXPECT_EQ(t.node_count(), 3);
  EXPECT_EQ(t.hash(), regular_line(3, 1.0, GainFunction::power_law(2.0), 10.0, 1.0).hash());
  ASSERT_TRUE(t.one_hop().has_value());
  EXPECT_EQ((*t.one_hop())[1], (NodeSet{0, 2}));
}

TEST(TopologyFileTest, DistanceRowsAndHops) {
  const Topology t = parse_topology(
      "nodes 3\ndist 1 2 1\ndist 2 3 1\ndist 1 3 2\nhop 1 2\nhop 2 1 3\nhop 3 2\n",
      TopologySource{});
  EXPECT_DOUBLE_EQ(t.distance(0, 2), 2.0);
  EXPECT_DOUBLE_EQ(t.power(), 10.0);  // from the defaults
  EXPECT_EQ((*t.one_hop())[0], (NodeSet{1}));
}

TEST(TopologyFileTest, Rejections) {
  const TopologySource d;
  auto code_of = [&](const std::string& text) {
    try {
      parse_topology(text, d);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIo;  // sentinel: nothing thrown
  };
  EXPECT_EQ(code_of("nodes 2\npower 10 20\npos 1 0\npos 2 1\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("nodes 2\nnoise 1 2\npos 1 0\npos 2 1\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("pos 1 0\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("nodes 2\npos 1 0\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("nodes 2\npos 1 0\npos 3 1\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("nodes 2\npos 1 0\npos 2 1\ndist 1 2 1\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("nodes 3\ndist 1 2 1\ndist 2 3 1\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("nodes 2\nwidth 3\n"), ErrorCode::kParse);
  EXPECT_EQ(code_of("nodes 2.5\n"), ErrorCode::kParse);
}

TEST(TopologyFileTest, CliReadsFile) {
  const std::filesystem::path p =
      temp_file("topo.txt", "nodes 4\ngain exp:1\npos 1 0\npos 2 1\npos 3 2\npos 4 3\n");
  const Outcome from_file = invoke({"analyze", "--topology", p.string()});
  const Outcome preset = invoke({"analyze", "--n", "4", "--gain", "exp:1"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(from_file.out, preset.out);
  const std::filesystem::path bad = temp_file("bad.txt", "nodes 2\npower 1 2\n");
  expect_single_error(invoke({"analyze", "--topology", bad.string()}), "PARSE_ERROR");
  std::filesystem::remove(p);
  std::filesystem::remove(bad);
}

TEST(CliTest, HelpExitsCleanly) {
  const Outcome o = invoke({"--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("analyze"), std::string::npos);
}

}  // namespace
}  // namespace omnirelay
