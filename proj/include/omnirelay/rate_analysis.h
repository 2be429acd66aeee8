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

#ifndef OMNIRELAY_RATE_ANALYSIS_H_
#define OMNIRELAY_RATE_ANALYSIS_H_

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "omnirelay/mac_region.h"
#include "omnirelay/topology.h"

namespace omnirelay {

// (1/(n-1)) log2(1 + min_j sum_{i != j} P_ij / N): the all-cast common rate
// allowed by the weakest total received power with independent codebooks.
// Treated as a benchmark, not a proven converse.
double allcast_rate_bound(const Topology& topology);

enum class LineSide { kLeft, kRight };

// One (i, l) or (i, r) pair of the line-network conditions. Positions are
// 1-based along the distance ordering.
//
// Left pair, l in 1..i-2:
//   joint: (l + n - i) R < log2(1 + (P_1i + .. + P_li + P_(i+1)i + .. + P_ni) / N)
//   noise: (n - i) R     < log2(1 + (P_(i+1)i + .. + P_ni) / (P_1i + .. + P_li + N))
// Right pair, r in i+2..n, mirrors it:
//   joint: (i + n - r) R < log2(1 + (P_1i + .. + P_(i-1)i + P_ri + .. + P_ni) / N)
//   noise: (i - 1) R     < log2(1 + (P_1i + .. + P_(i-1)i) / (P_ri + .. + P_ni + N))
struct ConstraintPair {
  NodeId node = 0;   // node id at position i
  int position = 0;  // i
  LineSide side = LineSide::kLeft;
  int index = 0;     // l or r
  double joint_margin = 0.0;  // rhs - lhs, bits
  double noise_margin = 0.0;
  bool joint_holds = false;
  bool noise_holds = false;

  bool holds() const { return joint_holds || noise_holds; }
  double margin() const { return std::max(joint_margin, noise_margin); }
  // "left:i=3:l=1" / "right:i=2:r=4".
  std::string id() const;
};

struct RateReport {
  double rate = 0.0;
  double rate_bound = 0.0;
  double bound_margin = 0.0;
  bool bound_holds = false;
  std::vector<NodeId> ordering;
  std::vector<ConstraintPair> constraints;
  bool verdict = false;
  // Smallest margin among the bound and every pair ("allcast_bound" or a
  // pair id).
  std::string binding_constraint;
  double binding_margin = 0.0;
};

// Evaluates the sufficient conditions for the distance-regulated scheme on a
// line-ordered network: R below the all-cast bound and, for every interior
// position, at least one inequality of each pair. Throws kPrecondition when
// the topology has no distance ordering.
RateReport check_line_conditions(const Topology& topology, double rate,
                                 double epsilon = kDefaultEpsilon);

struct BisectionOptions {
  double tolerance = 1e-6;
  int max_iterations = 60;
  double epsilon = kDefaultEpsilon;
};

struct MaxRateResult {
  double rate = 0.0;
  int iterations = 0;
  RateReport report;  // evaluated at `rate`
};

// Largest common rate passing check_line_conditions, within the tolerance.
// Every constraint's lhs grows linearly in R with a fixed rhs, so the verdict
// is monotone and bisection on [0, bound] is exact up to tolerance.
MaxRateResult max_achievable_rate(const Topology& topology,
                                  const BisectionOptions& options = {});

struct RegularLineWitness {
  int position = 0;
  LineSide side = LineSide::kLeft;
  int index = 0;
  double rate = 0.0;
  std::string check;
};

struct RegularLineResult {
  bool ok = false;
  int rates_checked = 0;
  std::vector<RegularLineWitness> witnesses;
};

// For an equally spaced line (P_ij = P_|i-j|): at R = 0.999 * bound and at
// `samples` uniform rates below the bound, checks that the line conditions
// hold and re-derives them step by step from the bound: the power ordering
// P_1 >= P_2 >= ..., the prefix inequalities k R < log2(1 + (P_1 + .. + P_k)/N)
// with their concavity step, and for every pair the case split that selects
// the joint or the noise inequality. Throws kPrecondition for other
// topologies.
RegularLineResult verify_regular_line(const Topology& topology, int samples,
                                      uint64_t seed,
                                      double epsilon = kDefaultEpsilon);

}  // namespace omnirelay

#endif  // OMNIRELAY_RATE_ANALYSIS_H_
