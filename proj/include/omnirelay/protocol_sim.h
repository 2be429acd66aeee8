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

#ifndef OMNIRELAY_PROTOCOL_SIM_H_
#define OMNIRELAY_PROTOCOL_SIM_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "omnirelay/mac_region.h"
#include "omnirelay/node_set.h"
#include "omnirelay/topology.h"

namespace omnirelay {

// w_source(block); blocks are numbered from 1.
struct MessageId {
  NodeId source = 0;
  int block = 0;

  auto operator<=>(const MessageId&) const = default;
};

// "w3(2)" with the node id shifted by `offset`.
std::string format_message(MessageId m, int offset = 1);

// What every node knows after some block. Receivers decode the messages of a
// source in block order, so knowledge of w_j is always a prefix
// w_j(1..known_through[i][j]). A node's own messages are known as soon as
// they are generated.
struct MessageState {
  std::vector<std::vector<int>> known_through;  // [i][j]

  bool knows(NodeId i, MessageId m) const {
    return m.block >= 1 && known_through[i][m.source] >= m.block;
  }
};

// Decoded messages w_j(b) of the current block, relative to the receiver's
// position in a distance ordering.
enum class FreshShape {
  kUnclassified,  // topology has no distance ordering
  kEmpty,
  kLeft,       // {l, ..., i-1}
  kRight,      // {i+1, ..., r}
  kTwoSided,   // {l, ..., i-1, i+1, ..., r}
  kIrregular,  // anything else
};

std::string_view fresh_shape_name(FreshShape shape);

struct NodeBlockRecord {
  std::vector<MessageId> transmit;  // bundle, own message first
  bool bundle_complete = true;      // node knew every message it had to relay
  std::vector<MessageId> decoded;   // newly decoded, in decoding order
  std::vector<MessageId> extras;    // decoded although not scheduled now
  std::vector<MessageId> missing;   // scheduled now but not decoded
  bool scheduled_success = true;
  // Single sum-rate condition of the first decoding round.
  bool sum_rate_condition = true;
  int decode_rounds = 0;
  bool exhaustive = true;
  FreshShape fresh_shape = FreshShape::kUnclassified;
};

struct SimulationTrace {
  int node_count = 0;
  int blocks = 0;
  double rate = 0.0;
  double noise = 1.0;
  Schedule schedule;
  PowerMatrix powers;
  std::optional<std::vector<NodeId>> ordering;
  std::vector<std::vector<NodeBlockRecord>> records;  // [b-1][i]
  std::vector<MessageState> states;  // states[b]: after block b; [0] initial
  std::vector<std::optional<int>> completion_block;
  std::vector<std::string> warnings;

  const NodeBlockRecord& record(int block, NodeId node) const {
    return records[block - 1][node];
  }
  int failure_count() const;
  bool all_scheduled_success() const { return failure_count() == 0; }
  int sum_rate_failure_count() const;
};

struct SimulationOptions {
  double epsilon = kDefaultEpsilon;
};

// Runs B blocks of the block-Markov relay protocol. In block b node t sends
// w_t(b) binned with w_j(b-k) for j in E_{t(k)}; at the end of the block
// every node decodes as much as the multi-block constraint family allows,
// repeating the peel while it makes progress, and must hold
// w_{D_{i(k)}}(b-k+1) for every k. A failed decode is recorded and the run
// continues with that node's knowledge unchanged.
SimulationTrace run_schedule(const Topology& topology, const Schedule& schedule,
                             double rate, int blocks,
                             const SimulationOptions& options = {});

// E_{i(k)} = D_{i(k)} = N_{i(k)} built from the one-hop sets. Nodes whose
// neighborhoods do not cover the network get a warning in the trace.
SimulationTrace run_distance_regulated(const Topology& topology,
                                       const std::vector<NodeSet>& one_hop,
                                       double rate, int blocks,
                                       const SimulationOptions& options = {});

struct InterferenceReport {
  NodeSet undecoded;  // transmitters outside every decode-set
  double power = 0.0;  // their total received power
};

std::vector<InterferenceReport> interference_accounting(
    const SimulationTrace& trace);

struct PayloadReport {
  int bundles_encoded = 0;
  int recovered = 0;  // recovered from a bin index and side information
  // Decoded jointly at the rate level with no codeword whose other entries
  // were already known; cannot be shown with one bin lookup.
  int rate_level_only = 0;
};

// Draws integer messages (sizes has one entry per node, or a single entry for
// all), bins every complete transmit bundle, and has each receiver recover
// what it decoded from bin indices plus its own recovered values. Throws
// kDecode with the (node, block) location on a mismatch.
PayloadReport payload_demo(const SimulationTrace& trace,
                           const std::vector<int>& sizes, uint64_t seed);

}  // namespace omnirelay

#endif  // OMNIRELAY_PROTOCOL_SIM_H_
