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

#include "omnirelay/protocol_sim.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "omnirelay/binning.h"
#include "omnirelay/error.h"

namespace omnirelay {
namespace {

struct Bundle {
  std::vector<MessageId> messages;  // own message first
  bool complete = true;
};

FreshShape classify_fresh(const std::vector<NodeId>& ordering, NodeId receiver,
                          const NodeSet& fresh) {
  std::vector<int> pos(ordering.size());
  for (size_t p = 0; p < ordering.size(); ++p) pos[ordering[p]] = static_cast<int>(p);
  const int me = pos[receiver];
  std::vector<int> left, right;
  for (NodeId j : fresh) (pos[j] < me ? left : right).push_back(pos[j]);
  if (left.empty() && right.empty()) return FreshShape::kEmpty;
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  const bool left_ok =
      left.empty() || (left.back() == me - 1 &&
                       left.back() - left.front() + 1 ==
                           static_cast<int>(left.size()));
  const bool right_ok =
      right.empty() || (right.front() == me + 1 &&
                        right.back() - right.front() + 1 ==
                            static_cast<int>(right.size()));
  if (!left_ok || !right_ok) return FreshShape::kIrregular;
  if (right.empty()) return FreshShape::kLeft;
  if (left.empty()) return FreshShape::kRight;
  return FreshShape::kTwoSided;
}

// One receiver's end-of-block decoding.
class Receiver {
 public:
  Receiver(NodeId self, int block, const NodeSet& universe,
           double interference, const PowerMatrix& powers, double noise,
           double rate, const std::vector<std::vector<Bundle>>& bundles,
           double epsilon)
      : self_(self),
        block_(block),
        universe_(universe),
        interference_(interference),
        powers_(powers),
        noise_(noise),
        rate_(rate),
        bundles_(bundles),
        epsilon_(epsilon) {}

  void decode(std::vector<int>& know, NodeBlockRecord& record) const {
    bool first_round = true;
    while (true) {
      // Relay-only transmitters stay in the instance: their codewords may
      // still carry outstanding messages of others.
      const std::vector<NodeId> transmitters(universe_.begin(), universe_.end());
      bool outstanding = false;
      int window_start = block_;
      for (NodeId j : universe_) {
        if (know[j] < block_) {
          outstanding = true;
          window_start = std::min(window_start, know[j] + 1);
        }
      }
      if (!outstanding) break;
      const KBlockInstance inst =
          build_instance(transmitters, window_start, know);
      const KBlockResult result = kblock_decodable_subset(inst, epsilon_);
      if (first_round) {
        record.sum_rate_condition = result.sum_rate_condition;
        first_round = false;
      }
      record.exhaustive = record.exhaustive && result.exhaustive;
      if (result.decodable.empty()) break;
      ++record.decode_rounds;
      for (int idx : result.decodable) {
        const NodeId j = transmitters[idx];
        know[j] += 1;
        record.decoded.push_back({j, know[j]});
      }
    }
  }

 private:
  KBlockInstance build_instance(const std::vector<NodeId>& transmitters,
                                int window_start,
                                const std::vector<int>& know) const {
    const int m = static_cast<int>(transmitters.size());
    const int k_blocks = block_ - window_start + 1;
    std::map<NodeId, int> index;
    for (int x = 0; x < m; ++x) index[transmitters[x]] = x;

    KBlockInstance inst;
    inst.blocks = k_blocks;
    inst.mac.noise = noise_;
    inst.mac.interference = interference_;
    inst.mac.rates.assign(m, rate_);
    inst.outstanding_block.assign(m, 0);
    inst.relays.assign(m, std::vector<NodeSet>(k_blocks));
    inst.opaque.assign(m, std::vector<bool>(k_blocks, false));
    for (int x = 0; x < m; ++x) {
      const NodeId t = transmitters[x];
      inst.mac.powers.push_back(powers_(t, self_));
      if (know[t] < block_) inst.outstanding_block[x] = know[t] + 1 - window_start + 1;
    }
    for (int x = 0; x < m; ++x) {
      const NodeId t = transmitters[x];
      for (int beta = window_start; beta <= block_; ++beta) {
        const Bundle& bundle = bundles_[beta - 1][t];
        const int rel = beta - window_start;
        if (!bundle.complete) {
          inst.opaque[x][rel] = true;
          continue;
        }
        for (size_t q = 1; q < bundle.messages.size(); ++q) {
          const MessageId msg = bundle.messages[q];
          if (msg.source == self_ || know[msg.source] >= msg.block) continue;
          const auto it = index.find(msg.source);
          if (it != index.end() && know[msg.source] + 1 == msg.block) {
            inst.relays[x][rel].push_back(it->second);
          } else {
            inst.opaque[x][rel] = true;
          }
        }
        inst.relays[x][rel] = normalized(std::move(inst.relays[x][rel]));
      }
    }
    return inst;
  }

  NodeId self_;
  int block_;
  const NodeSet& universe_;
  double interference_;
  const PowerMatrix& powers_;
  double noise_;
  double rate_;
  const std::vector<std::vector<Bundle>>& bundles_;
  double epsilon_;
};

}  // namespace

std::string format_message(MessageId m, int offset) {
  return "w" + std::to_string(m.source + offset) + "(" +
         std::to_string(m.block) + ")";
}

std::string_view fresh_shape_name(FreshShape shape) {
  switch (shape) {
    case FreshShape::kUnclassified:
      return "unclassified";
    case FreshShape::kEmpty:
      return "empty";
    case FreshShape::kLeft:
      return "left";
    case FreshShape::kRight:
      return "right";
    case FreshShape::kTwoSided:
      return "two-sided";
    case FreshShape::kIrregular:
      return "irregular";
  }
  return "unknown";
}

int SimulationTrace::failure_count() const {
  int count = 0;
  for (const auto& block : records) {
    for (const NodeBlockRecord& r : block) count += r.scheduled_success ? 0 : 1;
  }
  return count;
}

int SimulationTrace::sum_rate_failure_count() const {
  int count = 0;
  for (const auto& block : records) {
    for (const NodeBlockRecord& r : block) count += r.sum_rate_condition ? 0 : 1;
  }
  return count;
}

SimulationTrace run_schedule(const Topology& topology, const Schedule& schedule,
                             double rate, int blocks,
                             const SimulationOptions& options) {
  const int n = topology.node_count();
  const auto violations = validate_schedule(schedule, n);
  if (!violations.empty()) {
    std::string what = "invalid schedule:";
    for (const auto& v : violations) {
      what += " [node " + std::to_string(v.node + 1) + ", hop " +
              std::to_string(v.hop) + ": " + v.what + "]";
    }
    throw Error(ErrorCode::kScheduleInvalid, what);
  }
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::kInvalidArgument, "rate must be finite and >= 0");
  }
  if (blocks < 1) {
    throw Error(ErrorCode::kInvalidArgument, "at least one block is required");
  }
  if (n > kMaxPeelSources) {
    throw Error(ErrorCode::kCapacityExceeded,
                "simulation limited to " + std::to_string(kMaxPeelSources) +
                    " nodes");
  }

  SimulationTrace trace;
  trace.node_count = n;
  trace.blocks = blocks;
  trace.rate = rate;
  trace.noise = topology.noise();
  trace.schedule = schedule;
  trace.powers = build_power_matrix(topology);
  trace.ordering = distance_ordering(topology);

  std::vector<NodeSet> universe(n);
  std::vector<double> interference(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    universe[i] = schedule.decode_universe(i);
    for (NodeId t = 0; t < n; ++t) {
      if (t != i && !contains(universe[i], t)) {
        interference[i] += trace.powers(t, i);
      }
    }
  }

  MessageState state;
  state.known_through.assign(n, std::vector<int>(n, 0));
  trace.states.push_back(state);
  std::vector<std::vector<Bundle>> bundles;

  for (int b = 1; b <= blocks; ++b) {
    for (NodeId t = 0; t < n; ++t) state.known_through[t][t] = b;
    std::vector<Bundle> current(n);
    for (NodeId t = 0; t < n; ++t) {
      current[t].messages.push_back({t, b});
      for (int k = 1; k < b; ++k) {
        for (NodeId j : schedule.encode_set(t, k)) {
          const MessageId msg{j, b - k};
          current[t].messages.push_back(msg);
          if (!state.knows(t, msg)) current[t].complete = false;
        }
      }
    }
    bundles.push_back(std::move(current));

    // Each receiver reads only its own knowledge row and the fixed bundles,
    // so the per-node evaluations are independent.
    std::vector<NodeBlockRecord> records(n);
    MessageState next = state;
    for (NodeId i = 0; i < n; ++i) {
      NodeBlockRecord& rec = records[i];
      rec.transmit = bundles[b - 1][i].messages;
      rec.bundle_complete = bundles[b - 1][i].complete;
      Receiver receiver(i, b, universe[i], interference[i], trace.powers,
                        topology.noise(), rate, bundles, options.epsilon);
      std::vector<int>& know = next.known_through[i];
      receiver.decode(know, rec);

      std::vector<MessageId> scheduled;
      for (int k = 1; k <= b; ++k) {
        for (NodeId j : schedule.decode_set(i, k)) {
          scheduled.push_back({j, b - k + 1});
        }
      }
      std::sort(scheduled.begin(), scheduled.end());
      for (const MessageId& msg : scheduled) {
        if (!next.knows(i, msg)) rec.missing.push_back(msg);
      }
      rec.scheduled_success = rec.missing.empty();
      for (const MessageId& msg : rec.decoded) {
        if (!std::binary_search(scheduled.begin(), scheduled.end(), msg)) {
          rec.extras.push_back(msg);
        }
      }
      if (trace.ordering) {
        NodeSet fresh;
        for (const MessageId& msg : rec.decoded) {
          if (msg.block == b) fresh.push_back(msg.source);
        }
        rec.fresh_shape = classify_fresh(*trace.ordering, i, normalized(fresh));
      }
    }
    state = std::move(next);
    trace.records.push_back(std::move(records));
    trace.states.push_back(state);
  }

  trace.completion_block.assign(n, std::nullopt);
  for (NodeId i = 0; i < n; ++i) {
    if (universe[i].empty()) continue;
    for (int b = 1; b <= blocks; ++b) {
      const bool all = std::all_of(
          universe[i].begin(), universe[i].end(),
          [&](NodeId j) { return trace.states[b].known_through[i][j] >= 1; });
      if (all) {
        trace.completion_block[i] = b;
        break;
      }
    }
  }
  return trace;
}

SimulationTrace run_distance_regulated(const Topology& topology,
                                       const std::vector<NodeSet>& one_hop,
                                       double rate, int blocks,
                                       const SimulationOptions& options) {
  if (static_cast<int>(one_hop.size()) != topology.node_count()) {
    throw Error(ErrorCode::kInvalidArgument,
                "one-hop sets must be given for every node");
  }
  const NeighborSets neighbors = k_hop_neighbors(one_hop);
  const std::vector<bool> covered = coverage_check(neighbors);
  SimulationTrace trace = run_schedule(
      topology, distance_regulated_schedule(neighbors), rate, blocks, options);
  for (NodeId i = 0; i < topology.node_count(); ++i) {
    if (!covered[i]) {
      trace.warnings.push_back("node " + std::to_string(i + 1) +
                               " is not reached by every other node");
    }
  }
  return trace;
}

std::vector<InterferenceReport> interference_accounting(
    const SimulationTrace& trace) {
  std::vector<InterferenceReport> out(trace.node_count);
  for (NodeId i = 0; i < trace.node_count; ++i) {
    const NodeSet universe = trace.schedule.decode_universe(i);
    for (NodeId t = 0; t < trace.node_count; ++t) {
      if (t == i || contains(universe, t)) continue;
      out[i].undecoded.push_back(t);
      out[i].power += trace.powers(t, i);
    }
  }
  return out;
}

PayloadReport payload_demo(const SimulationTrace& trace,
                           const std::vector<int>& sizes, uint64_t seed) {
  PayloadReport report;
  if (trace.blocks == 0) return report;
  const int n = trace.node_count;
  if (sizes.size() != 1 && static_cast<int>(sizes.size()) != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "give one alphabet size, or one per node");
  }
  auto size_of = [&](NodeId j) { return sizes.size() == 1 ? sizes[0] : sizes[j]; };
  for (NodeId j = 0; j < n; ++j) {
    if (size_of(j) < 1) {
      throw Error(ErrorCode::kInvalidArgument, "alphabet sizes must be >= 1");
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<std::vector<int>> truth(n, std::vector<int>(trace.blocks + 1, 0));
  for (int b = 1; b <= trace.blocks; ++b) {
    for (NodeId j = 0; j < n; ++j) {
      truth[j][b] = std::uniform_int_distribution<int>(0, size_of(j) - 1)(rng);
    }
  }
  auto value_of = [&](MessageId m) { return truth[m.source][m.block]; };

  struct Sent {
    std::vector<MessageId> messages;
    std::optional<BinAssignment> bins;
    int index = -1;
  };
  std::vector<std::vector<Sent>> sent(trace.blocks);
  for (int b = 1; b <= trace.blocks; ++b) {
    for (NodeId t = 0; t < n; ++t) {
      const NodeBlockRecord& rec = trace.record(b, t);
      Sent s;
      s.messages = rec.transmit;
      if (rec.bundle_complete) {
        std::vector<int> alphabet, values;
        long long product = 1;
        for (const MessageId& m : rec.transmit) {
          alphabet.push_back(size_of(m.source));
          values.push_back(value_of(m));
          product *= size_of(m.source);
          if (product > kMaxBinningVectors) {
            throw Error(ErrorCode::kCapacityExceeded,
                        "bundle alphabet too large for the payload demo");
          }
        }
        s.bins = build_binning(alphabet);
        s.index = s.bins->bin(values);
        ++report.bundles_encoded;
      }
      sent[b - 1].push_back(std::move(s));
    }
  }

  for (NodeId i = 0; i < n; ++i) {
    std::map<MessageId, int> recovered;
    auto lookup = [&](MessageId m) -> std::optional<int> {
      if (m.source == i) return value_of(m);
      const auto it = recovered.find(m);
      if (it == recovered.end()) return std::nullopt;
      return it->second;
    };
    for (int b = 1; b <= trace.blocks; ++b) {
      std::vector<MessageId> pending = trace.record(b, i).decoded;
      bool progress = true;
      while (progress && !pending.empty()) {
        progress = false;
        for (auto it = pending.begin(); it != pending.end();) {
          std::optional<int> value;
          for (int beta = it->block; beta <= b && !value; ++beta) {
            for (NodeId t = 0; t < n && !value; ++t) {
              const Sent& s = sent[beta - 1][t];
              if (!s.bins) continue;
              const auto pos = std::find(s.messages.begin(), s.messages.end(), *it);
              if (pos == s.messages.end()) continue;
              std::map<int, int> known;
              bool usable = true;
              for (size_t q = 0; q < s.messages.size() && usable; ++q) {
                if (s.messages[q] == *it) continue;
                const auto v = lookup(s.messages[q]);
                if (v) known[static_cast<int>(q)] = *v;
                else usable = false;
              }
              if (!usable) continue;
              value = decode_from_side_info(
                  *s.bins, s.index, known,
                  static_cast<int>(pos - s.messages.begin()));
            }
          }
          if (!value) {
            ++it;
            continue;
          }
          if (*value != value_of(*it)) {
            throw Error(ErrorCode::kDecode,
                        "node " + std::to_string(i + 1) + " block " +
                            std::to_string(b) + ": recovered " +
                            format_message(*it) + "=" + std::to_string(*value) +
                            ", sent " + std::to_string(value_of(*it)));
          }
          recovered[*it] = *value;
          ++report.recovered;
          it = pending.erase(it);
          progress = true;
        }
      }
      for (const MessageId& m : pending) {
        recovered[m] = value_of(m);
        ++report.rate_level_only;
      }
    }
  }
  return report;
}

}  // namespace omnirelay
