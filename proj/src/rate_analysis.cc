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

#include "omnirelay/rate_analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "omnirelay/error.h"

namespace omnirelay {
namespace {

constexpr double kImplicationTolerance = 1e-12;
constexpr double kNearBoundFactor = 0.999;

}  // namespace

double allcast_rate_bound(const Topology& topology) {
  const PowerMatrix powers = build_power_matrix(topology);
  const int n = topology.node_count();
  double weakest = std::numeric_limits<double>::infinity();
  for (NodeId j = 0; j < n; ++j) weakest = std::min(weakest, powers.total_at(j));
  return capacity_bits(weakest, topology.noise()) / (n - 1);
}

std::string ConstraintPair::id() const {
  return side == LineSide::kLeft
             ? "left:i=" + std::to_string(position) + ":l=" + std::to_string(index)
             : "right:i=" + std::to_string(position) + ":r=" + std::to_string(index);
}

RateReport check_line_conditions(const Topology& topology, double rate,
                                 double epsilon) {
  const auto ordering = distance_ordering(topology);
  if (!ordering) {
    throw Error(ErrorCode::kPrecondition,
                "topology has no distance ordering; the line conditions do "
                "not apply");
  }
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::kInvalidArgument, "rate must be finite and >= 0");
  }
  const PowerMatrix powers = build_power_matrix(topology);
  const int n = topology.node_count();
  const double noise = topology.noise();
  // Power at position i from position q, both 1-based.
  auto p = [&](int q, int i) { return powers((*ordering)[q - 1], (*ordering)[i - 1]); };
  auto range = [&](int from, int to, int i) {
    double s = 0.0;
    for (int q = from; q <= to; ++q) s += p(q, i);
    return s;
  };

  RateReport report;
  report.rate = rate;
  report.ordering = *ordering;
  report.rate_bound = allcast_rate_bound(topology);
  report.bound_margin = report.rate_bound - rate;
  report.bound_holds = strictly_below(rate, report.rate_bound, epsilon);

  for (int i = 2; i <= n - 1; ++i) {
    const double right_all = range(i + 1, n, i);
    for (int l = 1; l <= i - 2; ++l) {
      const double left_far = range(1, l, i);
      ConstraintPair c;
      c.node = (*ordering)[i - 1];
      c.position = i;
      c.side = LineSide::kLeft;
      c.index = l;
      const double joint_lhs = (l + n - i) * rate;
      const double joint_rhs = capacity_bits(left_far + right_all, noise);
      const double noise_lhs = (n - i) * rate;
      const double noise_rhs = capacity_bits(right_all, left_far + noise);
      c.joint_margin = joint_rhs - joint_lhs;
      c.noise_margin = noise_rhs - noise_lhs;
      c.joint_holds = strictly_below(joint_lhs, joint_rhs, epsilon);
      c.noise_holds = strictly_below(noise_lhs, noise_rhs, epsilon);
      report.constraints.push_back(c);
    }
    const double left_all = range(1, i - 1, i);
    for (int r = i + 2; r <= n; ++r) {
      const double right_far = range(r, n, i);
      ConstraintPair c;
      c.node = (*ordering)[i - 1];
      c.position = i;
      c.side = LineSide::kRight;
      c.index = r;
      const double joint_lhs = (i + n - r) * rate;
      const double joint_rhs = capacity_bits(left_all + right_far, noise);
      const double noise_lhs = (i - 1) * rate;
      const double noise_rhs = capacity_bits(left_all, right_far + noise);
      c.joint_margin = joint_rhs - joint_lhs;
      c.noise_margin = noise_rhs - noise_lhs;
      c.joint_holds = strictly_below(joint_lhs, joint_rhs, epsilon);
      c.noise_holds = strictly_below(noise_lhs, noise_rhs, epsilon);
      report.constraints.push_back(c);
    }
  }

  report.verdict = report.bound_holds;
  report.binding_constraint = "allcast_bound";
  report.binding_margin = report.bound_margin;
  for (const ConstraintPair& c : report.constraints) {
    report.verdict = report.verdict && c.holds();
    if (c.margin() < report.binding_margin) {
      report.binding_margin = c.margin();
      report.binding_constraint = c.id();
    }
  }
  return report;
}

MaxRateResult max_achievable_rate(const Topology& topology,
                                  const BisectionOptions& options) {
  if (!(options.tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be > 0");
  }
  MaxRateResult result;
  double lo = 0.0;
  double hi = allcast_rate_bound(topology);
  result.report = check_line_conditions(topology, lo, options.epsilon);
  if (!result.report.verdict) return result;
  while (result.iterations < options.max_iterations &&
         hi - lo > options.tolerance) {
    ++result.iterations;
    const double mid = 0.5 * (lo + hi);
    RateReport r = check_line_conditions(topology, mid, options.epsilon);
    if (r.verdict) {
      lo = mid;
      result.report = std::move(r);
    } else {
      hi = mid;
    }
  }
  result.rate = lo;
  return result;
}

RegularLineResult verify_regular_line(const Topology& topology, int samples,
                                      uint64_t seed, double epsilon) {
  if (!is_regular_line(topology)) {
    throw Error(ErrorCode::kPrecondition,
                "topology is not an equally spaced line");
  }
  if (samples < 1) {
    throw Error(ErrorCode::kInvalidArgument, "need at least one sample");
  }
  const PowerMatrix powers = build_power_matrix(topology);
  const int n = topology.node_count();
  const double noise = topology.noise();
  // pk[k] = P_k for k = 1..n-1; prefix[k] = P_1 + .. + P_k.
  std::vector<double> pk(n, 0.0), prefix(n, 0.0);
  for (int k = 1; k < n; ++k) {
    pk[k] = powers(0, k);
    prefix[k] = prefix[k - 1] + pk[k];
  }
  auto window = [&](int from, int to) { return prefix[to] - prefix[from - 1]; };

  RegularLineResult result;
  auto witness = [&](int position, LineSide side, int index, double rate,
                     std::string check) {
    result.witnesses.push_back({position, side, index, rate, std::move(check)});
  };

  for (int k = 1; k + 1 < n; ++k) {
    if (pk[k + 1] > pk[k] * (1.0 + kImplicationTolerance)) {
      witness(0, LineSide::kLeft, k, 0.0, "power ordering");
    }
  }
  const double total_capacity = capacity_bits(prefix[n - 1], noise);
  for (int k = 1; k < n; ++k) {
    if (k * total_capacity / (n - 1) >
        capacity_bits(prefix[k], noise) + kImplicationTolerance) {
      witness(0, LineSide::kLeft, k, 0.0, "concavity");
    }
  }

  const double bound = allcast_rate_bound(topology);
  std::vector<double> rates{kNearBoundFactor * bound};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, bound);
  for (int s = 0; s < samples; ++s) {
    double r = uniform(rng);
    while (r <= 0.0) r = uniform(rng);
    rates.push_back(r);
  }

  // Left-side case split at position i, index l; the right side is the same
  // computation at the mirrored position.
  auto case_split = [&](int i, int l, double rate, LineSide side, int pos,
                        int idx) {
    const double near = window(i - l, i - 1);
    const double far_side = prefix[n - i];
    const bool joint =
        strictly_below((l + n - i) * rate, capacity_bits(near + far_side, noise),
                       epsilon);
    const bool noisy = strictly_below(
        (n - i) * rate, capacity_bits(far_side, near + noise), epsilon);
    if (i - l <= n - i + 1) {
      if (near + far_side < prefix[l + n - i] * (1.0 - kImplicationTolerance)) {
        witness(pos, side, idx, rate, "dominating power sum");
      }
      if (!joint) witness(pos, side, idx, rate, "joint inequality (near case)");
      return;
    }
    const bool near_decodable =
        strictly_below(l * rate, capacity_bits(near, noise), epsilon);
    if (near_decodable) {
      if (!joint) witness(pos, side, idx, rate, "joint inequality (far case)");
      return;
    }
    const double diff_lhs = (i - 1 - l) * rate;
    const double diff_rhs = capacity_bits(prefix[i - l - 1], near + noise);
    if (!(diff_lhs < diff_rhs + kImplicationTolerance)) {
      witness(pos, side, idx, rate, "difference step");
    }
    if (!noisy) witness(pos, side, idx, rate, "noise inequality");
  };

  for (double rate : rates) {
    ++result.rates_checked;
    const RateReport report = check_line_conditions(topology, rate, epsilon);
    if (!report.bound_holds) {
      witness(0, LineSide::kLeft, 0, rate, "all-cast bound");
    }
    for (const ConstraintPair& c : report.constraints) {
      if (!c.holds()) witness(c.position, c.side, c.index, rate, "line conditions");
    }
    for (int k = 1; k < n; ++k) {
      if (!strictly_below(k * rate, capacity_bits(prefix[k], noise), epsilon)) {
        witness(0, LineSide::kLeft, k, rate, "prefix inequality");
      }
    }
    for (int i = 2; i <= n - 1; ++i) {
      for (int l = 1; l <= i - 2; ++l) {
        case_split(i, l, rate, LineSide::kLeft, i, l);
      }
      for (int r = i + 2; r <= n; ++r) {
        case_split(n + 1 - i, n + 1 - r, rate, LineSide::kRight, i, r);
      }
    }
  }
  result.ok = result.witnesses.empty();
  return result;
}

}  // namespace omnirelay
