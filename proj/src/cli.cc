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
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "omnirelay/binning.h"
#include "omnirelay/error.h"
#include "omnirelay/protocol_sim.h"
#include "omnirelay/rate_analysis.h"

namespace omnirelay {
namespace {

using Json = nlohmann::ordered_json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

// JSON numbers carry the same 6 decimals as the CSV text.
Json json6(double v) { return Json::parse(fixed6(v)); }

std::string messages(const std::vector<MessageId>& ms) {
  std::string s;
  for (const MessageId& m : ms) {
    if (!s.empty()) s += ' ';
    s += format_message(m);
  }
  return s;
}

Json messages_json(const std::vector<MessageId>& ms) {
  Json a = Json::array();
  for (const MessageId& m : ms) a.push_back(format_message(m));
  return a;
}

Json ids_json(const NodeSet& s) {
  Json a = Json::array();
  for (NodeId i : s) a.push_back(i + 1);
  return a;
}

std::string side_name(LineSide s) {
  return s == LineSide::kLeft ? "left" : "right";
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what);
}

// ---------------------------------------------------------------------------
// Topology construction

std::vector<NodeSet> ordered_line_neighbors(const std::vector<NodeId>& order) {
  const int n = static_cast<int>(order.size());
  std::vector<NodeSet> hop(n);
  for (int p = 0; p < n; ++p) {
    if (p > 0) hop[order[p]].push_back(order[p - 1]);
    if (p + 1 < n) hop[order[p]].push_back(order[p + 1]);
    hop[order[p]] = normalized(hop[order[p]]);
  }
  return hop;
}

Topology build_preset(const TopologySource& src) {
  const GainFunction gain = GainFunction::parse(src.gain);
  if (src.preset == "regular-line") {
    return regular_line(src.n, src.d0, gain, src.power, src.noise);
  }
  if (src.preset == "line") {
    if (src.positions.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "preset line needs --positions x1,x2,...");
    }
    return general_line(src.positions, gain, src.power, src.noise);
  }
  if (src.preset == "ring") {
    return ring(src.n, src.d0, gain, src.power, src.noise);
  }
  if (src.preset == "arc") {
    return arc(src.n, src.d0, src.radius, gain, src.power, src.noise);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown preset '" + src.preset + "'");
}

const std::vector<NodeSet>& require_one_hop(const Topology& t) {
  if (!t.one_hop()) {
    throw Error(ErrorCode::kPrecondition,
                "topology has no one-hop sets and no distance ordering to "
                "derive them from; add hop rows");
  }
  return *t.one_hop();
}

// ---------------------------------------------------------------------------
// Commands

class Writer {
 public:
  explicit Writer(const ExperimentConfig& config) : config_(config) {}
  bool json() const { return config_.format == OutputFormat::kJson; }
  std::ostringstream& csv() { return csv_; }
  Json& doc() { return doc_; }
  std::string str() const {
    return json() ? doc_.dump(2) + "\n" : csv_.str();
  }

 private:
  const ExperimentConfig& config_;
  std::ostringstream csv_;
  Json doc_;
};

Json header(const char* command) {
  Json j;
  j["spec_version"] = kSchemaVersion;
  j["command"] = command;
  return j;
}

std::string analyze(const ExperimentConfig& config) {
  const Topology topology = load_topology(config.topology);
  const double bound = allcast_rate_bound(topology);
  const MaxRateResult best = max_achievable_rate(topology);
  const RateReport report =
      config.rate ? check_line_conditions(topology, *config.rate) : best.report;
  std::string regular = "n/a";
  if (is_regular_line(topology)) {
    regular = verify_regular_line(topology, config.samples, config.seed).ok
                  ? "pass"
                  : "fail";
  }

  Writer w(config);
  if (!w.json()) {
    w.csv() << "n,topology_hash,rate_bound,max_rate,rate,verdict,"
               "binding_constraint,binding_margin,bound_margin,regular_check\n"
            << topology.node_count() << ',' << topology.hash() << ','
            << fixed6(bound) << ',' << fixed6(best.rate) << ','
            << fixed6(report.rate) << ',' << (report.verdict ? "true" : "false")
            << ',' << report.binding_constraint << ','
            << fixed6(report.binding_margin) << ',' << fixed6(report.bound_margin)
            << ',' << regular << '\n';
    return w.str();
  }
  Json& j = w.doc();
  j = header("analyze");
  j["n"] = topology.node_count();
  j["topology_hash"] = topology.hash();
  j["rate_bound"] = json6(bound);
  j["rate_bound_kind"] = "benchmark";
  j["max_rate"] = json6(best.rate);
  j["bisection_iterations"] = best.iterations;
  j["rate"] = json6(report.rate);
  j["verdict"] = report.verdict;
  j["binding_constraint"] = report.binding_constraint;
  j["binding_margin"] = json6(report.binding_margin);
  j["bound_margin"] = json6(report.bound_margin);
  j["regular_check"] = regular;
  Json order = Json::array();
  for (NodeId i : report.ordering) order.push_back(i + 1);
  j["ordering"] = order;
  Json cs = Json::array();
  for (const ConstraintPair& c : report.constraints) {
    Json e;
    e["id"] = c.id();
    e["node"] = c.node + 1;
    e["position"] = c.position;
    e["side"] = side_name(c.side);
    e["index"] = c.index;
    e["joint_margin"] = json6(c.joint_margin);
    e["noise_margin"] = json6(c.noise_margin);
    e["joint_holds"] = c.joint_holds;
    e["noise_holds"] = c.noise_holds;
    cs.push_back(e);
  }
  j["constraints"] = cs;
  return w.str();
}

std::string simulate(const ExperimentConfig& config) {
  const Topology topology = load_topology(config.topology);
  const std::vector<NodeSet>& one_hop = require_one_hop(topology);
  const int n = topology.node_count();
  const double rate =
      config.rate ? *config.rate : max_achievable_rate(topology).rate;
  const int blocks = config.blocks > 0 ? config.blocks : 2 * n;
  const SimulationTrace trace =
      run_distance_regulated(topology, one_hop, rate, blocks);
  const std::vector<InterferenceReport> interference =
      interference_accounting(trace);
  std::optional<PayloadReport> payload;
  if (!config.sizes.empty()) payload = payload_demo(trace, config.sizes, config.seed);
  auto node_failures = [&](NodeId i) {
    int failures = 0;
    for (int b = 1; b <= blocks; ++b) failures += !trace.record(b, i).scheduled_success;
    return failures;
  };

  Writer w(config);
  if (!w.json()) {
    auto& o = w.csv();
    o << "block,node,transmit,bundle_complete,decoded,extras,missing,"
         "scheduled_success,sum_rate_condition,decode_rounds,fresh_shape\n";
    for (int b = 1; b <= blocks; ++b) {
      for (NodeId i = 0; i < n; ++i) {
        const NodeBlockRecord& r = trace.record(b, i);
        o << b << ',' << i + 1 << ',' << messages(r.transmit) << ','
          << (r.bundle_complete ? "true" : "false") << ','
          << messages(r.decoded) << ',' << messages(r.extras) << ','
          << messages(r.missing) << ','
          << (r.scheduled_success ? "true" : "false") << ','
          << (r.sum_rate_condition ? "true" : "false") << ','
          << r.decode_rounds << ',' << fresh_shape_name(r.fresh_shape) << '\n';
      }
    }
    o << "\nnode,horizon,completion_block,failures,interference_power\n";
    for (NodeId i = 0; i < n; ++i) {
      o << i + 1 << ',' << trace.schedule.decode[i].size() << ','
        << (trace.completion_block[i] ? std::to_string(*trace.completion_block[i])
                                      : std::string("none"))
        << ',' << node_failures(i) << ',' << fixed6(interference[i].power) << '\n';
    }
    return w.str();
  }
  Json& j = w.doc();
  j = header("simulate");
  j["n"] = n;
  j["topology_hash"] = topology.hash();
  j["rate"] = json6(rate);
  j["blocks"] = blocks;
  j["failures"] = trace.failure_count();
  j["sum_rate_failures"] = trace.sum_rate_failure_count();
  j["warnings"] = trace.warnings;
  Json nodes = Json::array();
  for (NodeId i = 0; i < n; ++i) {
    Json e;
    e["node"] = i + 1;
    e["horizon"] = trace.schedule.decode[i].size();
    e["completion_block"] =
        trace.completion_block[i] ? Json(*trace.completion_block[i]) : Json();
    e["failures"] = node_failures(i);
    e["interference"] = ids_json(interference[i].undecoded);
    e["interference_power"] = json6(interference[i].power);
    nodes.push_back(e);
  }
  j["nodes"] = nodes;
  if (payload) {
    j["payload"] = {{"bundles_encoded", payload->bundles_encoded},
                    {"recovered", payload->recovered},
                    {"rate_level_only", payload->rate_level_only}};
  }
  Json records = Json::array();
  for (int b = 1; b <= blocks; ++b) {
    for (NodeId i = 0; i < n; ++i) {
      const NodeBlockRecord& r = trace.record(b, i);
      Json e;
      e["block"] = b;
      e["node"] = i + 1;
      e["transmit"] = messages_json(r.transmit);
      e["bundle_complete"] = r.bundle_complete;
      e["decoded"] = messages_json(r.decoded);
      e["extras"] = messages_json(r.extras);
      e["missing"] = messages_json(r.missing);
      e["scheduled_success"] = r.scheduled_success;
      e["sum_rate_condition"] = r.sum_rate_condition;
      e["decode_rounds"] = r.decode_rounds;
      e["fresh_shape"] = std::string(fresh_shape_name(r.fresh_shape));
      records.push_back(e);
    }
  }
  j["records"] = records;
  return w.str();
}

struct SweepRow {
  int n = 0;
  std::string gain;
  std::string hash;
  double bound = 0.0;
  double max_rate = 0.0;
  double rate = 0.0;
  bool pass = false;
  std::string error;  // error code name when the entry failed
};

SweepRow sweep_entry(const ExperimentConfig& config, int n,
                     const std::string& gain) {
  SweepRow row;
  row.n = n;
  row.gain = gain;
  try {
    TopologySource src = config.topology;
    src.n = n;
    src.gain = gain;
    const Topology topology = load_topology(src);
    row.hash = topology.hash();
    row.bound = allcast_rate_bound(topology);
    row.max_rate = max_achievable_rate(topology).rate;
    // Without an explicit rate the entry passes when the conditions hold
    // just below the bound.
    row.rate = config.rate ? *config.rate : 0.999 * row.bound;
    row.pass = check_line_conditions(topology, row.rate).verdict;
  } catch (const Error& e) {
    row.error = std::string(error_code_name(e.code()));
  }
  return row;
}

std::string sweep(const ExperimentConfig& config) {
  std::vector<std::pair<int, std::string>> keys;
  const std::vector<std::string> gains =
      config.sweep_gain.empty() ? std::vector<std::string>{config.topology.gain}
                                : config.sweep_gain;
  std::vector<int> ns = config.sweep_n;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (int n : ns) {
    for (const std::string& g : gains) keys.emplace_back(n, g);
  }
  std::vector<std::future<SweepRow>> futures;
  for (const auto& [n, g] : keys) {
    futures.push_back(std::async(std::launch::async, sweep_entry,
                                 std::cref(config), n, g));
  }
  std::vector<SweepRow> rows;
  for (auto& f : futures) rows.push_back(f.get());

  Writer w(config);
  if (!w.json()) {
    w.csv() << "n,gain,topology_hash,rate_bound,max_rate,rate,pass\n";
    for (const SweepRow& r : rows) {
      w.csv() << r.n << ',' << r.gain << ',';
      if (!r.error.empty()) {
        w.csv() << ",,,,error:" << r.error << '\n';
        continue;
      }
      w.csv() << r.hash << ',' << fixed6(r.bound) << ',' << fixed6(r.max_rate)
              << ',' << fixed6(r.rate) << ',' << (r.pass ? "pass" : "fail")
              << '\n';
    }
    return w.str();
  }
  Json& j = w.doc();
  j = header("sweep");
  Json a = Json::array();
  for (const SweepRow& r : rows) {
    Json e;
    e["n"] = r.n;
    e["gain"] = r.gain;
    if (!r.error.empty()) {
      e["error"] = r.error;
    } else {
      e["topology_hash"] = r.hash;
      e["rate_bound"] = json6(r.bound);
      e["max_rate"] = json6(r.max_rate);
      e["rate"] = json6(r.rate);
      e["pass"] = r.pass;
    }
    a.push_back(e);
  }
  j["rows"] = a;
  return w.str();
}

std::string bin_demo(const ExperimentConfig& config) {
  const BinAssignment bins = build_binning(config.sizes);
  const bool property = verify_binning_property(bins);
  const RoundTripSummary rt = round_trip_all(bins);
  std::string sizes;
  for (int s : config.sizes) sizes += (sizes.empty() ? "" : " ") + std::to_string(s);

  Writer w(config);
  if (!w.json()) {
    w.csv() << "sizes,bin_count,vectors,decodes,failures,property\n"
            << sizes << ',' << bins.bin_count() << ',' << rt.vectors << ','
            << rt.decodes << ',' << rt.failures << ','
            << (property ? "true" : "false") << '\n';
    return w.str();
  }
  Json& j = w.doc();
  j = header("bin-demo");
  j["sizes"] = config.sizes;
  j["bin_count"] = bins.bin_count();
  j["vectors"] = rt.vectors;
  j["decodes"] = rt.decodes;
  j["failures"] = rt.failures;
  j["property"] = property;
  return w.str();
}

// ---------------------------------------------------------------------------
// Argument parsing

void add_common(CLI::App* sub, ExperimentConfig& c, std::string& rate_text,
                std::string& format_text) {
  TopologySource& t = c.topology;
  sub->add_option("--topology", t.file, "Structured-text topology file");
  sub->add_option("--preset", t.preset, "regular-line | line | ring | arc")
      ->check(CLI::IsMember({"regular-line", "line", "ring", "arc"}));
  sub->add_option("--n", t.n, "Node count for presets");
  sub->add_option("--d0", t.d0, "Adjacent spacing for presets");
  sub->add_option("--gain", t.gain, "pl:<alpha> | exp:<gamma> | const");
  sub->add_option("--power", t.power, "Transmit power P (linear)");
  sub->add_option("--noise", t.noise, "Noise power N (linear)");
  sub->add_option("--positions", t.positions, "Line preset coordinates")
      ->delimiter(',');
  sub->add_option("--radius", t.radius, "Arc preset radius");
  sub->add_option("--rate", rate_text, "Common rate: auto or bits/symbol");
  sub->add_option("--seed", c.seed, "Seed for randomized checks");
  sub->add_option("--out", c.out, "Output file (default stdout)");
  sub->add_option("--format", format_text, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void build_app(CLI::App& app, ExperimentConfig& c, std::string& rate_text,
               std::string& format_text) {
  app.require_subcommand(1);
  auto* analyze_cmd = app.add_subcommand("analyze", "Rate bound, conditions and maximal rate");
  add_common(analyze_cmd, c, rate_text, format_text);
  analyze_cmd->add_option("--samples", c.samples, "Random rates for the regular-line check");
  auto* simulate_cmd = app.add_subcommand("simulate", "Block-by-block protocol trace");
  add_common(simulate_cmd, c, rate_text, format_text);
  simulate_cmd->add_option("--blocks", c.blocks, "Block count (default 2n)");
  simulate_cmd->add_option("--sizes", c.sizes, "Message alphabets for the payload check")
      ->delimiter(',');
  auto* sweep_cmd = app.add_subcommand("sweep", "Bound and maximal rate over n and gain lists");
  add_common(sweep_cmd, c, rate_text, format_text);
  sweep_cmd->add_option("--n-list", c.sweep_n, "Node counts")->delimiter(',')->required();
  sweep_cmd->add_option("--gain-list", c.sweep_gain, "Gain presets")->delimiter(',');
  auto* bin_cmd = app.add_subcommand("bin-demo", "Exhaustive binning check");
  bin_cmd->add_option("--sizes", c.sizes, "Alphabet sizes")->delimiter(',')->required();
  bin_cmd->add_option("--out", c.out, "Output file (default stdout)");
  bin_cmd->add_option("--format", format_text, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void finish(CLI::App& app, ExperimentConfig& c, const std::string& rate_text,
            const std::string& format_text) {
  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "analyze") c.command = Command::kAnalyze;
  if (name == "simulate") c.command = Command::kSimulate;
  if (name == "sweep") c.command = Command::kSweep;
  if (name == "bin-demo") c.command = Command::kBinDemo;
  c.format = format_text == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  if (!rate_text.empty() && rate_text != "auto") {
    std::size_t used = 0;
    double r = 0.0;
    try {
      r = std::stod(rate_text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != rate_text.size()) {
      throw Error(ErrorCode::kParse, "--rate expects 'auto' or a number, got '" +
                                         rate_text + "'");
    }
    c.rate = r;
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (rate && (!(*rate >= 0.0) || !std::isfinite(*rate))) {
    throw Error(ErrorCode::kInvalidArgument, "rate must be finite and >= 0");
  }
  if (blocks < 0) throw Error(ErrorCode::kInvalidArgument, "blocks must be >= 1");
  if (samples < 1) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 1");
  if (command == Command::kSweep && sweep_n.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sweep needs a nonempty n list");
  }
  if (command == Command::kBinDemo && sizes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "bin-demo needs --sizes");
  }
}

ExperimentConfig parse_args(int argc, const char* const* argv) {
  ExperimentConfig c;
  std::string rate_text, format_text = "csv";
  CLI::App app{"Omnidirectional relay analysis"};
  build_app(app, c, rate_text, format_text);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  finish(app, c, rate_text, format_text);
  c.validate();
  return c;
}

Topology parse_topology(const std::string& text, const TopologySource& defaults) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int n = -1;
  std::string gain = defaults.gain;
  double power = defaults.power, noise = defaults.noise;
  std::map<int, Point> pos;
  std::map<std::pair<int, int>, double> dist;
  std::map<int, NodeSet> hops;

  auto node_id = [&](const std::string& tok) {
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) parse_fail(line_no, "bad node id '" + tok + "'");
    if (n < 0) parse_fail(line_no, "'nodes' must come first");
    if (id < 1 || id > n) parse_fail(line_no, "node id " + tok + " out of range");
    return id - 1;
  };
  auto number = [&](const std::string& tok) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) parse_fail(line_no, "bad number '" + tok + "'");
    return v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string& key = tok[0];
    const std::size_t args = tok.size() - 1;
    if (key == "nodes") {
      if (args != 1 || n >= 0) parse_fail(line_no, "expected a single 'nodes <n>'");
      n = static_cast<int>(number(tok[1]));
      if (n < 2 || std::to_string(n) != tok[1]) parse_fail(line_no, "need an integer n >= 2");
    } else if (key == "gain") {
      if (args != 1) parse_fail(line_no, "expected 'gain <preset>'");
      gain = tok[1];
    } else if (key == "power" || key == "noise") {
      if (args != 1) {
        parse_fail(line_no, "per-node " + key +
                                " overrides are not supported; give one value");
      }
      (key == "power" ? power : noise) = number(tok[1]);
    } else if (key == "pos") {
      if (args != 2 && args != 3) parse_fail(line_no, "expected 'pos <id> <x> [<y>]'");
      const int id = node_id(tok[1]);
      if (pos.contains(id)) parse_fail(line_no, "duplicate position");
      pos[id] = Point{number(tok[2]), args == 3 ? number(tok[3]) : 0.0};
    } else if (key == "dist") {
      if (args != 3) parse_fail(line_no, "expected 'dist <i> <j> <d>'");
      int i = node_id(tok[1]), j = node_id(tok[2]);
      if (i == j) parse_fail(line_no, "self distance");
      if (i > j) std::swap(i, j);
      if (dist.contains({i, j})) parse_fail(line_no, "duplicate distance");
      dist[{i, j}] = number(tok[3]);
    } else if (key == "hop") {
      if (args < 1) parse_fail(line_no, "expected 'hop <id> [<neighbor> ...]'");
      const int id = node_id(tok[1]);
      if (hops.contains(id)) parse_fail(line_no, "duplicate hop row");
      NodeSet s;
      for (std::size_t k = 2; k < tok.size(); ++k) s.push_back(node_id(tok[k]));
      hops[id] = normalized(s);
    } else {
      parse_fail(line_no, "unknown keyword '" + key + "'");
    }
  }
  if (n < 0) throw Error(ErrorCode::kParse, "missing 'nodes' line");
  if (!pos.empty() && !dist.empty()) {
    throw Error(ErrorCode::kParse, "give either pos or dist rows, not both");
  }
  const GainFunction g = GainFunction::parse(gain);
  Topology topology = [&] {
    if (!pos.empty()) {
      if (static_cast<int>(pos.size()) != n) {
        throw Error(ErrorCode::kParse, "every node needs a pos row");
      }
      std::vector<Point> pts;
      for (const auto& [id, p] : pos) pts.push_back(p);
      return Topology::from_positions(std::move(pts), g, power, noise);
    }
    if (static_cast<int>(dist.size()) != n * (n - 1) / 2) {
      throw Error(ErrorCode::kParse, "every unordered node pair needs a dist row");
    }
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (const auto& [ij, v] : dist) {
      d[ij.first * n + ij.second] = v;
      d[ij.second * n + ij.first] = v;
    }
    return Topology::from_distances(n, std::move(d), g, power, noise);
  }();
  if (!hops.empty()) {
    std::vector<NodeSet> one_hop(n);
    for (const auto& [id, s] : hops) one_hop[id] = s;
    return topology.with_one_hop(std::move(one_hop));
  }
  if (const auto order = distance_ordering(topology)) {
    return topology.with_one_hop(ordered_line_neighbors(*order));
  }
  return topology;
}

Topology load_topology(const TopologySource& source) {
  if (source.file.empty()) return build_preset(source);
  std::ifstream f(source.file);
  if (!f) throw Error(ErrorCode::kIo, "cannot read " + source.file);
  std::ostringstream text;
  text << f.rdbuf();
  return parse_topology(text.str(), source);
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    std::string report;
    switch (config.command) {
      case Command::kAnalyze: report = analyze(config); break;
      case Command::kSimulate: report = simulate(config); break;
      case Command::kSweep: report = sweep(config); break;
      case Command::kBinDemo: report = bin_demo(config); break;
    }
    if (config.out.empty()) {
      out << report;
    } else {
      std::ofstream f(config.out, std::ios::binary);
      if (!(f << report)) throw Error(ErrorCode::kIo, "cannot write " + config.out);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: code=" << error_code_name(e.code()) << " detail=" << e.what()
        << '\n';
    return 2;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  ExperimentConfig c;
  std::string rate_text, format_text = "csv";
  CLI::App app{"Omnidirectional relay analysis"};
  build_app(app, c, rate_text, format_text);
  try {
    app.parse(argc, argv);
    finish(app, c, rate_text, format_text);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: code=" << error_code_name(ErrorCode::kParse)
        << " detail=" << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: code=" << error_code_name(e.code()) << " detail=" << e.what()
        << '\n';
    return 2;
  }
  return run(c, out, err);
}

}  // namespace omnirelay
