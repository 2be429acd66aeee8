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

#ifndef OMNIRELAY_MAC_REGION_H_
#define OMNIRELAY_MAC_REGION_H_

#include <vector>

#include "omnirelay/node_set.h"

namespace omnirelay {

// Strict rate inequalities are evaluated as lhs < rhs - epsilon (bits).
inline constexpr double kDefaultEpsilon = 1e-9;

// Largest source count for exhaustive one-block feasibility.
inline constexpr int kMaxFeasibilitySources = 24;
// Largest source count for exact subset searches; beyond it the peel picks
// its steps from a structured family of candidate subsets and verifies the
// final set exhaustively up to kMaxFeasibilitySources.
inline constexpr int kMaxExactSources = 16;
inline constexpr int kMaxTwoBlockSources = 20;
inline constexpr int kMaxPeelSources = 64;

// log2(1 + signal / noise).
double capacity_bits(double signal, double noise);

inline bool strictly_below(double lhs, double rhs,
                           double epsilon = kDefaultEpsilon) {
  return lhs < rhs - epsilon;
}

// Gaussian multiple-access channel seen by one receiver. Source ids are the
// vector indices. `interference` is received power from transmitters that are
// never decoded; it adds to the noise.
struct MacInstance {
  std::vector<double> rates;   // bits per symbol
  std::vector<double> powers;  // received power, watts
  double noise = 1.0;
  double interference = 0.0;

  int size() const { return static_cast<int>(rates.size()); }
  void validate() const;
};

// true iff every nonempty subset S satisfies
//   sum_S R < log2(1 + sum_S P / (N + I)).
// Throws kCapacityExceeded above kMaxFeasibilitySources sources.
bool mac_feasible(const MacInstance& inst, double epsilon = kDefaultEpsilon);

// log2(1 + P(S) / (N + I)) - R(S): slack of one subset's constraint.
double subset_slack(const MacInstance& inst, const NodeSet& subset);

// true iff `subset` can be decoded when every other source is noise, i.e.
// each nonempty T within it satisfies
//   R(T) < log2(1 + P(T) / (N + I + P(M \ subset))).
bool is_self_decodable(const MacInstance& inst, const NodeSet& subset,
                       double epsilon = kDefaultEpsilon);

// Maximum-cardinality self-decodable subset, ties broken by the
// lexicographically smallest id list. Empty when no single source decodes.
// Exhaustive; throws kCapacityExceeded above kMaxExactSources sources.
NodeSet decodable_subset(const MacInstance& inst,
                         double epsilon = kDefaultEpsilon);

// Peels violating subsets off the candidate set, moving their power into the
// noise, until the remainder is self-decodable. Each step removes the
// violating proper subset with the largest violation (lhs - rhs), ties to the
// lexicographically smallest. Nonempty whenever the full sum-rate constraint
// holds.
NodeSet peel_decodable_subset(const MacInstance& inst,
                              double epsilon = kDefaultEpsilon);

// Two-block decoding: sources in `first_block` (M1) still have their block-1
// message outstanding, the rest (M2) their block-2 message. In block 2 each
// i in M2 bins the block-1 messages of helps[i] (a subset of M1).
struct TwoBlockInstance {
  MacInstance mac;
  NodeSet first_block;
  std::vector<NodeSet> helps;      // J_i, empty for i in M1
  std::vector<NodeSet> helped_by;  // I_i, empty for i in M2

  static TwoBlockInstance from_help_sets(MacInstance mac, NodeSet first_block,
                                         std::vector<NodeSet> helps);

  NodeSet second_block() const;
  // Throws kInvalidArgument on a malformed partition or on J/I mismatch.
  void validate() const;
};

// Right-hand side of the two-block constraint for `subset`:
//   log2(1 + P(S1)/N') + log2(1 + P(S2)/(P(M1) + N'))
// with S1 = S & M1, S2 = (S & M2) plus the M2 helpers of S1, N' = N + I.
double two_block_capacity(const TwoBlockInstance& inst, const NodeSet& subset);

// true iff sum_S R < two_block_capacity(S) for every nonempty S.
// Throws kCapacityExceeded above kMaxTwoBlockSources sources.
bool two_block_feasible(const TwoBlockInstance& inst,
                        double epsilon = kDefaultEpsilon);

// Decoding across K blocks at one receiver. Every transmitter t has at most
// one outstanding (target) message, from block outstanding_block[t] in 1..K;
// 0 marks a relay-only transmitter whose own messages are all known. In
// block beta the codeword of t bins:
//   - its own block-beta message: known before outstanding_block[t], the
//     target at it, unknown (so the codeword is noise) after it;
//   - the outstanding messages of relays[t][beta-1];
//   - anything else unknown when opaque[t][beta-1] is set (noise).
struct KBlockInstance {
  MacInstance mac;
  int blocks = 1;
  std::vector<int> outstanding_block;
  std::vector<std::vector<NodeSet>> relays;  // [t][beta-1]
  std::vector<std::vector<bool>> opaque;     // [t][beta-1]; may be empty

  NodeSet sources() const;
  void validate() const;
};

KBlockInstance as_kblock(const TwoBlockInstance& inst);
// One block, no relaying: the plain multiple-access channel.
KBlockInstance as_kblock(const MacInstance& inst);

// Capacity of the error event `subset` when only `targets` are being decoded
// and the remaining outstanding messages are treated as noise.
double kblock_capacity(const KBlockInstance& inst, const NodeSet& targets,
                       const NodeSet& subset);

// true iff every nonempty subset of the sources meets its constraint.
bool kblock_feasible(const KBlockInstance& inst,
                     double epsilon = kDefaultEpsilon);

struct KBlockResult {
  // Single sum-rate condition over all sources with noise N + I.
  bool sum_rate_condition = false;
  NodeSet decodable;
  // false when the decodable set was too large to verify exhaustively.
  bool exhaustive = true;
  // K > 2: the constraint family is the natural generalization, so the
  // nonempty result rests on the sum-rate guarantee.
  bool guarantee_based = false;
};

KBlockResult kblock_decodable_subset(const KBlockInstance& inst,
                                     double epsilon = kDefaultEpsilon);

}  // namespace omnirelay

#endif  // OMNIRELAY_MAC_REGION_H_
