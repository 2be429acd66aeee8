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

#ifndef OMNIRELAY_TOPOLOGY_H_
#define OMNIRELAY_TOPOLOGY_H_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "omnirelay/node_set.h"

namespace omnirelay {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Non-increasing amplitude gain as a function of distance. Only the
// magnitude matters, so gains are real and nonnegative.
class GainFunction {
 public:
  // g(d) = d^(-alpha/2); alpha = 2 gives the 1/d amplitude law.
  static GainFunction power_law(double alpha);
  // g(d) = exp(-gamma d).
  static GainFunction exponential(double gamma);
  static GainFunction constant();
  // Arbitrary user function; monotonicity is checked when powers are built.
  static GainFunction custom(std::function<double(double)> fn,
                             std::string label);

  // Accepts "pl:<alpha>", "exp:<gamma>" and "const".
  static GainFunction parse(const std::string& text);

  double operator()(double distance) const { return fn_(distance); }
  const std::string& label() const { return label_; }

 private:
  GainFunction(std::function<double(double)> fn, std::string label)
      : fn_(std::move(fn)), label_(std::move(label)) {}

  std::function<double(double)> fn_;
  std::string label_;
};

// Network geometry plus the uniform transmit power and noise level.
// Immutable once built.
class Topology {
 public:
  static Topology from_positions(std::vector<Point> positions,
                                 GainFunction gain, double power,
                                 double noise);
  // `distances` is row-major n x n; it must be symmetric with a zero diagonal.
  static Topology from_distances(int node_count, std::vector<double> distances,
                                 GainFunction gain, double power, double noise);

  int node_count() const { return node_count_; }
  double distance(NodeId i, NodeId j) const {
    return distances_[static_cast<size_t>(i) * node_count_ + j];
  }
  const GainFunction& gain() const { return gain_; }
  double power() const { return power_; }
  double noise() const { return noise_; }
  const std::optional<std::vector<Point>>& positions() const {
    return positions_;
  }

  // Explicit one-hop sets supplied with the topology (file input or preset).
  const std::optional<std::vector<NodeSet>>& one_hop() const {
    return one_hop_;
  }
  Topology with_one_hop(std::vector<NodeSet> one_hop) const;

  // Hex digest of the canonical description (distances, gain, P, N).
  std::string hash() const;

 private:
  Topology() = default;
  void validate() const;

  int node_count_ = 0;
  std::vector<double> distances_;
  std::optional<std::vector<Point>> positions_;
  GainFunction gain_ = GainFunction::constant();
  double power_ = 0.0;
  double noise_ = 0.0;
  std::optional<std::vector<NodeSet>> one_hop_;
};

// Built-in layouts. Line-like presets carry the two-sided neighbor sets,
// the ring carries its two adjacent nodes.
Topology regular_line(int n, double spacing, GainFunction gain, double power,
                      double noise);
Topology general_line(std::vector<double> coordinates, GainFunction gain,
                      double power, double noise);
Topology ring(int n, double spacing, GainFunction gain, double power,
              double noise);
// Points on a circular arc of the given radius with adjacent chord `spacing`.
// A non-positive radius selects (n-1)*spacing, about one radian of arc.
Topology arc(int n, double spacing, double radius, GainFunction gain,
             double power, double noise);

// Received powers |g_ij|^2 P. Entry (i, j) is the power of transmitter i as
// seen by receiver j.
class PowerMatrix {
 public:
  PowerMatrix() = default;
  PowerMatrix(int n, std::vector<double> values)
      : n_(n), values_(std::move(values)) {}

  int node_count() const { return n_; }
  double operator()(NodeId from, NodeId to) const {
    return values_[static_cast<size_t>(from) * n_ + to];
  }
  // Sum of the powers of `senders` at receiver `to`.
  double total_at(NodeId to, const NodeSet& senders) const;
  // Sum over every other node.
  double total_at(NodeId to) const;

 private:
  int n_ = 0;
  std::vector<double> values_;
};

// Throws Error(kModelViolation) when the gain is not non-increasing over the
// pairwise distances or produces a non-finite value.
PowerMatrix build_power_matrix(const Topology& topology);

// hops[i][k-1] is the set of nodes reaching i in exactly k hops.
struct NeighborSets {
  std::vector<std::vector<NodeSet>> hops;

  int node_count() const { return static_cast<int>(hops.size()); }
  // L_i: number of non-empty hop levels of node i.
  int horizon(NodeId i) const { return static_cast<int>(hops[i].size()); }
  int max_horizon() const;
  // N_{i(k)}, empty when k exceeds the horizon.
  const NodeSet& at(NodeId i, int k) const;
  NodeSet reachable(NodeId i) const;
};

// Expands one-hop sets by the sequential k-hop recursion: j is a k-hop
// neighbor of i when it is a one-hop neighbor of some (k-1)-hop neighbor of i
// and does not reach i in fewer hops.
NeighborSets k_hop_neighbors(const std::vector<NodeSet>& one_hop);

// true for node i iff every other node reaches it in finitely many hops.
std::vector<bool> coverage_check(const NeighborSets& neighbors);

// {i-1, i+1} clipped to the range.
std::vector<NodeSet> line_one_hop(int n);
std::vector<NodeSet> ring_one_hop(int n);

// Per-node decode-sets and encode-sets; decode[i][k-1] is D_{i(k)}.
struct Schedule {
  std::vector<std::vector<NodeSet>> decode;
  std::vector<std::vector<NodeSet>> encode;

  int node_count() const { return static_cast<int>(decode.size()); }
  int horizon() const;
  const NodeSet& decode_set(NodeId i, int k) const;
  const NodeSet& encode_set(NodeId i, int k) const;
  // Union of all decode-sets of i.
  NodeSet decode_universe(NodeId i) const;
};

// E_{i(k)} = D_{i(k)} = N_{i(k)}.
Schedule distance_regulated_schedule(const NeighborSets& neighbors);

struct ScheduleViolation {
  NodeId node;
  int hop;  // 1-based k
  std::string what;
};

std::vector<ScheduleViolation> validate_schedule(const Schedule& schedule,
                                                 int node_count);

// Labeling order[p] = node such that for positions a < b < c (or c < b < a)
// d(order[a], order[b]) <= d(order[a], order[c]).
std::optional<std::vector<NodeId>> distance_ordering(const Topology& topology);

// Checks the condition above for one candidate labeling.
bool is_distance_ordering(const Topology& topology,
                          std::span<const NodeId> order);

// true when the identity labeling is distance-ordered and d(i, j) depends only
// on |i - j|.
bool is_regular_line(const Topology& topology);

}  // namespace omnirelay

#endif  // OMNIRELAY_TOPOLOGY_H_
