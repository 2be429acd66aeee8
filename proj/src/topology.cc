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

#include "omnirelay/topology.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "omnirelay/error.h"

namespace omnirelay {
namespace {

constexpr double kOrderTolerance = 1e-12;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string short_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

bool not_greater(double a, double b) {
  return a <= b + kOrderTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

std::vector<double> pairwise_distances(const std::vector<Point>& pts) {
  const size_t n = pts.size();
  std::vector<double> d(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      d[i * n + j] = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
    }
  }
  return d;
}

}  // namespace

GainFunction GainFunction::power_law(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kInvalidArgument,
                "power-law exponent must be finite and >= 0");
  }
  return GainFunction([alpha](double d) { return std::pow(d, -alpha / 2.0); },
                      "pl:" + short_number(alpha));
}

GainFunction GainFunction::exponential(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidArgument,
                "exponential decay rate must be finite and >= 0");
  }
  return GainFunction([gamma](double d) { return std::exp(-gamma * d); },
                      "exp:" + short_number(gamma));
}

GainFunction GainFunction::constant() {
  return GainFunction([](double) { return 1.0; }, "const");
}

GainFunction GainFunction::custom(std::function<double(double)> fn,
                                  std::string label) {
  return GainFunction(std::move(fn), std::move(label));
}

GainFunction GainFunction::parse(const std::string& text) {
  if (text == "const") return constant();
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::kParse, "unknown gain preset '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  double value = 0.0;
  try {
    size_t used = 0;
    value = std::stod(arg, &used);
    if (used != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "bad gain parameter in '" + text + "'");
  }
  if (kind == "pl") return power_law(value);
  if (kind == "exp") return exponential(value);
  throw Error(ErrorCode::kParse, "unknown gain preset '" + text + "'");
}

Topology Topology::from_positions(std::vector<Point> positions,
                                  GainFunction gain, double power,
                                  double noise) {
  Topology t;
  t.node_count_ = static_cast<int>(positions.size());
  t.distances_ = pairwise_distances(positions);
  t.positions_ = std::move(positions);
  t.gain_ = std::move(gain);
  t.power_ = power;
  t.noise_ = noise;
  t.validate();
  return t;
}

Topology Topology::from_distances(int node_count,
                                  std::vector<double> distances,
                                  GainFunction gain, double power,
                                  double noise) {
  Topology t;
  t.node_count_ = node_count;
  t.distances_ = std::move(distances);
  t.gain_ = std::move(gain);
  t.power_ = power;
  t.noise_ = noise;
  t.validate();
  return t;
}

void Topology::validate() const {
  if (node_count_ < 2) {
    throw Error(ErrorCode::kInvalidArgument, "a topology needs at least 2 nodes");
  }
  if (!(power_ > 0.0) || !std::isfinite(power_)) {
    throw Error(ErrorCode::kInvalidArgument, "transmit power must be > 0");
  }
  if (!(noise_ > 0.0) || !std::isfinite(noise_)) {
    throw Error(ErrorCode::kInvalidArgument, "noise power must be > 0");
  }
  const size_t n = static_cast<size_t>(node_count_);
  if (distances_.size() != n * n) {
    throw Error(ErrorCode::kInvalidArgument, "distance matrix must be n x n");
  }
  for (size_t i = 0; i < n; ++i) {
    if (distances_[i * n + i] != 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "distance matrix diagonal must be zero");
    }
    for (size_t j = 0; j < n; ++j) {
      const double d = distances_[i * n + j];
      if (!std::isfinite(d) || d < 0.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "distances must be finite and nonnegative");
      }
      if (d != distances_[j * n + i]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "distance matrix must be symmetric");
      }
    }
  }
}

Topology Topology::with_one_hop(std::vector<NodeSet> one_hop) const {
  if (static_cast<int>(one_hop.size()) != node_count_) {
    throw Error(ErrorCode::kInvalidArgument,
                "one-hop sets must be given for every node");
  }
  for (int i = 0; i < node_count_; ++i) {
    one_hop[i] = normalized(std::move(one_hop[i]));
    for (NodeId j : one_hop[i]) {
      if (j < 0 || j >= node_count_ || j == i) {
        throw Error(ErrorCode::kInvalidArgument,
                    "one-hop set of node " + std::to_string(i + 1) +
                        " must be a subset of the other nodes");
      }
    }
  }
  Topology t = *this;
  t.one_hop_ = std::move(one_hop);
  return t;
}

std::string Topology::hash() const {
  std::string canon = "n=" + std::to_string(node_count_) + ";g=" +
                      gain_.label() + ";P=" + format_number(power_) +
                      ";N=" + format_number(noise_) + ";d=";
  for (double d : distances_) canon += format_number(d) + ",";
  // FNV-1a, 64 bit.
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Topology regular_line(int n, double spacing, GainFunction gain, double power,
                      double noise) {
  if (!(spacing > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "spacing must be > 0");
  }
  std::vector<double> xs(std::max(n, 0));
  for (int i = 0; i < n; ++i) xs[i] = i * spacing;
  return general_line(std::move(xs), std::move(gain), power, noise);
}

Topology general_line(std::vector<double> coordinates, GainFunction gain,
                      double power, double noise) {
  for (size_t i = 1; i < coordinates.size(); ++i) {
    if (!(coordinates[i] > coordinates[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "line coordinates must be strictly increasing");
    }
  }
  std::vector<Point> pts;
  pts.reserve(coordinates.size());
  for (double x : coordinates) pts.push_back({x, 0.0});
  const int n = static_cast<int>(pts.size());
  return Topology::from_positions(std::move(pts), std::move(gain), power, noise)
      .with_one_hop(line_one_hop(n));
}

Topology ring(int n, double spacing, GainFunction gain, double power,
              double noise) {
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "a ring needs n >= 3");
  if (!(spacing > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "spacing must be > 0");
  }
  const double radius = spacing / (2.0 * std::sin(std::numbers::pi / n));
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / n;
    pts.push_back({radius * std::cos(phi), radius * std::sin(phi)});
  }
  return Topology::from_positions(std::move(pts), std::move(gain), power, noise)
      .with_one_hop(ring_one_hop(n));
}

Topology arc(int n, double spacing, double radius, GainFunction gain,
             double power, double noise) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "an arc needs n >= 2");
  if (!(spacing > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "spacing must be > 0");
  }
  if (radius <= 0.0) radius = (n - 1) * spacing;
  if (spacing > 2.0 * radius) {
    throw Error(ErrorCode::kInvalidArgument,
                "arc spacing cannot exceed the diameter");
  }
  const double step = 2.0 * std::asin(spacing / (2.0 * radius));
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    const double phi = (i - (n - 1) / 2.0) * step;
    pts.push_back({radius * std::sin(phi), radius * (1.0 - std::cos(phi))});
  }
  return Topology::from_positions(std::move(pts), std::move(gain), power, noise)
      .with_one_hop(line_one_hop(n));
}

double PowerMatrix::total_at(NodeId to, const NodeSet& senders) const {
  double sum = 0.0;
  for (NodeId s : senders) sum += (*this)(s, to);
  return sum;
}

double PowerMatrix::total_at(NodeId to) const {
  double sum = 0.0;
  for (NodeId s = 0; s < n_; ++s) {
    if (s != to) sum += (*this)(s, to);
  }
  return sum;
}

PowerMatrix build_power_matrix(const Topology& topology) {
  const int n = topology.node_count();
  struct Sample {
    double distance;
    double gain;
  };
  std::vector<Sample> samples;
  std::vector<double> values(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = topology.distance(i, j);
      const double g = topology.gain()(d);
      if (!std::isfinite(g) || g < 0.0) {
        throw Error(ErrorCode::kModelViolation,
                    "gain " + topology.gain().label() +
                        " is not finite and nonnegative at distance " +
                        short_number(d));
      }
      values[static_cast<size_t>(i) * n + j] = g * g * topology.power();
      if (i < j) samples.push_back({d, g});
    }
  }
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) {
              return a.distance < b.distance ||
                     (a.distance == b.distance && a.gain > b.gain);
            });
  for (size_t k = 1; k < samples.size(); ++k) {
    if (!not_greater(samples[k].gain, samples[k - 1].gain)) {
      throw Error(ErrorCode::kModelViolation,
                  "gain " + topology.gain().label() +
                      " increases between distances " +
                      short_number(samples[k - 1].distance) + " and " +
                      short_number(samples[k].distance));
    }
  }
  return PowerMatrix(n, std::move(values));
}

int NeighborSets::max_horizon() const {
  int l = 0;
  for (const auto& h : hops) l = std::max(l, static_cast<int>(h.size()));
  return l;
}

const NodeSet& NeighborSets::at(NodeId i, int k) const {
  static const NodeSet kEmpty;
  if (k < 1 || k > horizon(i)) return kEmpty;
  return hops[i][k - 1];
}

NodeSet NeighborSets::reachable(NodeId i) const {
  NodeSet out;
  for (const NodeSet& s : hops[i]) out = set_union(out, s);
  return out;
}

NeighborSets k_hop_neighbors(const std::vector<NodeSet>& one_hop) {
  const int n = static_cast<int>(one_hop.size());
  std::vector<NodeSet> first(n);
  for (int i = 0; i < n; ++i) {
    first[i] = normalized(one_hop[i]);
    for (NodeId j : first[i]) {
      if (j < 0 || j >= n || j == i) {
        throw Error(ErrorCode::kInvalidArgument,
                    "one-hop set of node " + std::to_string(i + 1) +
                        " must be a subset of the other nodes");
      }
    }
  }
  NeighborSets out;
  out.hops.resize(n);
  for (int i = 0; i < n; ++i) {
    NodeSet seen = set_union({i}, first[i]);
    NodeSet frontier = first[i];
    while (!frontier.empty()) {
      out.hops[i].push_back(frontier);
      NodeSet next;
      for (NodeId l : frontier) next = set_union(next, first[l]);
      next = set_difference(next, seen);
      seen = set_union(seen, next);
      frontier = std::move(next);
    }
  }
  return out;
}

std::vector<bool> coverage_check(const NeighborSets& neighbors) {
  const int n = neighbors.node_count();
  std::vector<bool> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = static_cast<int>(neighbors.reachable(i).size()) == n - 1;
  }
  return out;
}

std::vector<NodeSet> line_one_hop(int n) {
  std::vector<NodeSet> out(std::max(n, 0));
  for (int i = 0; i < n; ++i) {
    if (i > 0) out[i].push_back(i - 1);
    if (i + 1 < n) out[i].push_back(i + 1);
  }
  return out;
}

std::vector<NodeSet> ring_one_hop(int n) {
  std::vector<NodeSet> out(std::max(n, 0));
  for (int i = 0; i < n && n > 1; ++i) {
    out[i] = normalized({(i + n - 1) % n, (i + 1) % n});
  }
  return out;
}

int Schedule::horizon() const {
  int l = 0;
  for (const auto& d : decode) l = std::max(l, static_cast<int>(d.size()));
  for (const auto& e : encode) l = std::max(l, static_cast<int>(e.size()));
  return l;
}

const NodeSet& Schedule::decode_set(NodeId i, int k) const {
  static const NodeSet kEmpty;
  if (k < 1 || k > static_cast<int>(decode[i].size())) return kEmpty;
  return decode[i][k - 1];
}

const NodeSet& Schedule::encode_set(NodeId i, int k) const {
  static const NodeSet kEmpty;
  if (k < 1 || k > static_cast<int>(encode[i].size())) return kEmpty;
  return encode[i][k - 1];
}

NodeSet Schedule::decode_universe(NodeId i) const {
  NodeSet out;
  for (const NodeSet& s : decode[i]) out = set_union(out, s);
  return out;
}

Schedule distance_regulated_schedule(const NeighborSets& neighbors) {
  Schedule s;
  s.decode = neighbors.hops;
  s.encode = neighbors.hops;
  return s;
}

std::vector<ScheduleViolation> validate_schedule(const Schedule& schedule,
                                                 int node_count) {
  std::vector<ScheduleViolation> out;
  if (static_cast<int>(schedule.decode.size()) != node_count ||
      static_cast<int>(schedule.encode.size()) != node_count) {
    out.push_back({-1, 0, "schedule must list sets for every node"});
    return out;
  }
  const int horizon = schedule.horizon();
  for (NodeId i = 0; i < node_count; ++i) {
    NodeSet decoded_so_far;
    NodeSet encoded_so_far;
    for (int k = 1; k <= horizon; ++k) {
      const NodeSet& d = schedule.decode_set(i, k);
      const NodeSet& e = schedule.encode_set(i, k);
      if (d != normalized(d) || e != normalized(e)) {
        out.push_back({i, k, "sets must be sorted and duplicate-free"});
      }
      bool in_range = true;
      for (NodeId j : set_union(d, e)) {
        if (j < 0 || j >= node_count) in_range = false;
      }
      if (!in_range) {
        out.push_back({i, k, "node id out of range"});
        continue;
      }
      if (contains(d, i)) {
        out.push_back({i, k, "decode-set contains the node itself"});
      }
      if (intersects(d, decoded_so_far)) {
        out.push_back({i, k, "decode-set overlaps an earlier decode-set"});
      }
      decoded_so_far = set_union(decoded_so_far, d);
      if (!is_subset(e, decoded_so_far)) {
        out.push_back({i, k, "encode-set not contained in decode-sets so far"});
      }
      if (intersects(e, encoded_so_far)) {
        out.push_back({i, k, "encode-set overlaps an earlier encode-set"});
      }
      encoded_so_far = set_union(encoded_so_far, e);
    }
  }
  return out;
}

bool is_distance_ordering(const Topology& topology,
                          std::span<const NodeId> order) {
  const int n = static_cast<int>(order.size());
  if (n != topology.node_count()) return false;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b + 1 < n; ++b) {
      if (!not_greater(topology.distance(order[a], order[b]),
                       topology.distance(order[a], order[b + 1]))) {
        return false;
      }
    }
    for (int b = a - 1; b > 0; --b) {
      if (!not_greater(topology.distance(order[a], order[b]),
                       topology.distance(order[a], order[b - 1]))) {
        return false;
      }
    }
  }
  return true;
}

std::optional<std::vector<NodeId>> distance_ordering(const Topology& topology) {
  const int n = topology.node_count();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (n <= 8) {
    do {
      if (is_distance_ordering(topology, order)) return order;
    } while (std::next_permutation(order.begin(), order.end()));
    return std::nullopt;
  }

  std::vector<std::vector<NodeId>> candidates;
  candidates.push_back(order);
  candidates.emplace_back(order.rbegin(), order.rend());
  // Sort key: projection on the principal axis when coordinates are known,
  // otherwise distance from the node farthest from node 0.
  std::vector<double> key(n);
  if (const auto& pts = topology.positions()) {
    double mx = 0, my = 0;
    for (const Point& p : *pts) {
      mx += p.x;
      my += p.y;
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (const Point& p : *pts) {
      sxx += (p.x - mx) * (p.x - mx);
      sxy += (p.x - mx) * (p.y - my);
      syy += (p.y - my) * (p.y - my);
    }
    const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    for (int i = 0; i < n; ++i) {
      key[i] = ((*pts)[i].x - mx) * std::cos(angle) +
               ((*pts)[i].y - my) * std::sin(angle);
    }
  } else {
    NodeId far = 0;
    for (int i = 1; i < n; ++i) {
      if (topology.distance(0, i) > topology.distance(0, far)) far = i;
    }
    for (int i = 0; i < n; ++i) key[i] = topology.distance(far, i);
  }
  std::vector<NodeId> sorted = order;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](NodeId a, NodeId b) { return key[a] < key[b]; });
  candidates.push_back(sorted);
  candidates.emplace_back(sorted.rbegin(), sorted.rend());
  for (const auto& c : candidates) {
    if (is_distance_ordering(topology, c)) return c;
  }
  return std::nullopt;
}

bool is_regular_line(const Topology& topology) {
  const int n = topology.node_count();
  std::vector<NodeId> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  if (!is_distance_ordering(topology, identity)) return false;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double ref = topology.distance(0, j - i);
      if (std::abs(topology.distance(i, j) - ref) >
          1e-9 * std::max(1.0, ref)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace omnirelay
