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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. argv[1] is the path of the omnirelay executable.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "omnirelay/binning.h"
#include "omnirelay/mac_region.h"
#include "omnirelay/protocol_sim.h"
#include "omnirelay/rate_analysis.h"
#include "omnirelay/topology.h"
#include "oracles.h"

namespace omnirelay {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

NodeSet to_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }
oracle::Mask to_mask(const NodeSet& s) { return oracle::mask_of({s.begin(), s.end()}); }

const char* const kGains[] = {"pl:2", "pl:4", "exp:1", "const"};
const double kPowers[] = {1.0, 10.0, 100.0};

void for_each_regular(int max_n, const std::function<void(int, const char*, double,
                                                          const Topology&)>& fn) {
  for (const char* gain : kGains) {
    for (double p : kPowers) {
      for (int n = 2; n <= max_n; ++n) {
        fn(n, gain, p, regular_line(n, 1.0, GainFunction::parse(gain), p, 1.0));
      }
    }
  }
}

std::string config_name(int n, const char* gain, double p) {
  std::ostringstream s;
  s << "n=" << n << " gain=" << gain << " P=" << p;
  return s.str();
}

Outcome binning_correctness() {
  Outcome o;
  const auto start = Clock::now();
  long long decodes = 0;
  std::function<void(std::vector<int>&, int)> tuples = [&](std::vector<int>& sizes, int k) {
    if (static_cast<int>(sizes.size()) == k) {
      const BinAssignment bins = build_binning(sizes);
      const RoundTripSummary s = round_trip_all(bins);
      decodes += s.decodes;
      std::ostringstream name;
      for (int m : sizes) name << m << ' ';
      o.require(s.failures == 0, "round-trip failures for sizes " + name.str());
      o.require(verify_binning_property(bins), "property false for sizes " + name.str());
      return;
    }
    for (int m = 1; m <= 6; ++m) {
      sizes.push_back(m);
      tuples(sizes, k);
      sizes.pop_back();
    }
  };
  for (int k = 1; k <= 3; ++k) {
    std::vector<int> sizes;
    tuples(sizes, k);
  }
  const double t = seconds_since(start);
  o.require(t < 10.0, "runtime over 10 s");
  if (o.pass) o.detail = std::to_string(decodes) + " decodes, " + std::to_string(t) + " s";
  return o;
}

Outcome subset_oracle_equivalence() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(2026);
  int instances = 0, guaranteed = 0;
  for (; instances < 1500; ++instances) {
    const int m = 1 + instances % 10;
    MacInstance inst;
    for (int i = 0; i < m; ++i) inst.powers.push_back(oracle::log_uniform(rng, 0.1, 10.0));
    const double share = oracle::cap(oracle::sum_over(inst.powers, oracle::full(m)), 1.0) / m;
    std::uniform_real_distribution<double> rate(0.0, 2.0 * share);
    for (int i = 0; i < m; ++i) inst.rates.push_back(rate(rng));
    const auto& R = inst.rates;
    const auto& P = inst.powers;
    const bool sum_holds =
        oracle::sum_over(R, oracle::full(m)) <
        oracle::cap(oracle::sum_over(P, oracle::full(m)), 1.0) - oracle::kEps;
    const NodeSet exact = decodable_subset(inst);
    const NodeSet peel = peel_decodable_subset(inst);
    const std::string at = " (instance " + std::to_string(instances) + ")";
    o.require(peel.empty() || oracle::self_decodable(R, P, 1.0, to_mask(peel)),
              "peel output not self-decodable" + at);
    o.require(exact.empty() || oracle::self_decodable(R, P, 1.0, to_mask(exact)),
              "exact output not self-decodable" + at);
    o.require(exact == to_set(oracle::best_decodable(R, P, 1.0)),
              "exact output differs from brute force" + at);
    if (sum_holds) {
      ++guaranteed;
      o.require(!exact.empty() && !peel.empty(), "empty set under the sum-rate condition" + at);
    }
  }
  const double t = seconds_since(start);
  o.require(guaranteed >= 300, "too few instances meeting the sum-rate condition");
  o.require(t < 60.0, "runtime over 60 s");
  if (o.pass) {
    o.detail = std::to_string(instances) + " instances, " + std::to_string(guaranteed) +
               " under the sum-rate condition, " + std::to_string(t) + " s";
  }
  return o;
}

Outcome two_block_identities() {
  Outcome o;
  std::mt19937_64 rng(2027);
  int reductions = 0, identities = 0;
  for (int trial = 0; trial < 800; ++trial) {
    const int m = 1 + trial % 8;
    MacInstance inst;
    std::uniform_real_distribution<double> rate(0.0, 1.5);
    for (int i = 0; i < m; ++i) {
      inst.rates.push_back(rate(rng));
      inst.powers.push_back(oracle::log_uniform(rng, 0.1, 10.0));
    }
    NodeSet everyone;
    for (int i = 0; i < m; ++i) everyone.push_back(i);
    const bool mac = mac_feasible(inst);
    o.require(mac == oracle::mac_feasible(inst.rates, inst.powers, 1.0),
              "mac_feasible differs from brute force");
    o.require(two_block_feasible(TwoBlockInstance::from_help_sets(
                  inst, {}, std::vector<NodeSet>(m))) == mac,
              "empty first block does not reduce to the MAC");
    o.require(two_block_feasible(TwoBlockInstance::from_help_sets(
                  inst, everyone, std::vector<NodeSet>(m))) == mac,
              "empty second block does not reduce to the MAC");
    ++reductions;

    // Random partition and help sets for the difference identity.
    NodeSet first;
    for (int i = 0; i < m; ++i) {
      if (rng() % 2) first.push_back(i);
    }
    std::vector<NodeSet> helps(m);
    std::vector<oracle::Mask> help_mask(m, 0);
    for (int i = 0; i < m; ++i) {
      if (std::find(first.begin(), first.end(), i) != first.end()) continue;
      for (NodeId j : first) {
        if (rng() % 2) {
          helps[i].push_back(j);
          help_mask[i] |= 1u << j;
        }
      }
    }
    const TwoBlockInstance tb = TwoBlockInstance::from_help_sets(inst, first, helps);
    const oracle::Mask f = to_mask(first);
    const oracle::Mask all = oracle::full(m);
    const auto& R = inst.rates;
    const auto& P = inst.powers;
    const double full_rhs = two_block_capacity(tb, everyone);
    o.require(std::abs(full_rhs - oracle::two_block_rhs(P, 1.0, f, help_mask, all)) < 1e-9,
              "full-set two-block capacity differs from the oracle");
    if (!(oracle::sum_over(R, all) < full_rhs - oracle::kEps)) continue;
    for (oracle::Mask a = (all - 1) & all; a; a = (a - 1) & all) {
      const double a_rhs = two_block_capacity(tb, oracle::ids(a));
      if (oracle::sum_over(R, a) < a_rhs - oracle::kEps) continue;
      ++identities;
      oracle::Mask a2 = a & ~f;
      for (int i = 0; i < m; ++i) {
        if (!(f >> i & 1u) && (help_mask[i] & a & f)) a2 |= 1u << i;
      }
      const double p_a1 = oracle::sum_over(P, a & f);
      const double p_m1 = oracle::sum_over(P, f);
      const double p_m2 = oracle::sum_over(P, all & ~f);
      const double p_a2 = oracle::sum_over(P, a2);
      const double difference =
          oracle::cap(p_m1 - p_a1, p_a1 + 1.0) + oracle::cap(p_m2 - p_a2, p_a2 + p_m1 + 1.0);
      o.require(std::abs(full_rhs - a_rhs - difference) < 1e-9, "difference identity off");
      o.require(oracle::sum_over(R, all & ~a) < difference + 1e-9,
                "complement rate exceeds the difference");
    }
  }
  o.require(identities > 0, "no violating subset exercised the identity");
  if (o.pass) {
    o.detail = std::to_string(reductions) + " reductions, " + std::to_string(identities) +
               " identity checks";
  }
  return o;
}

Outcome regular_line_reproduction() {
  Outcome o;
  const auto start = Clock::now();
  int configs = 0;
  for_each_regular(12, [&](int n, const char* gain, double p, const Topology& t) {
    const RegularLineResult r = verify_regular_line(t, 100, 7000 + n);
    o.require(r.ok && r.witnesses.empty() && r.rates_checked == 101,
              "failed for " + config_name(n, gain, p));
    ++configs;
  });
  const double t = seconds_since(start);
  o.require(t < 60.0, "runtime over 60 s");
  if (o.pass) o.detail = std::to_string(configs) + " configurations, " + std::to_string(t) + " s";
  return o;
}

Outcome end_to_end() {
  Outcome o;
  int configs = 0;
  for_each_regular(8, [&](int n, const char* gain, double p, const Topology& t) {
    const std::string name = config_name(n, gain, p);
    const double bound = allcast_rate_bound(t);
    const NeighborSets nb = k_hop_neighbors(*t.one_hop());
    const SimulationTrace below = run_distance_regulated(t, *t.one_hop(), 0.999 * bound, 2 * n);
    o.require(below.all_scheduled_success(), "scheduled decode failed below the bound, " + name);
    for (NodeId i = 0; i < n; ++i) {
      o.require(below.completion_block[i].has_value() &&
                    *below.completion_block[i] <= nb.horizon(i) + 1,
                "late all-cast completion, " + name);
    }
    for (const InterferenceReport& r : interference_accounting(below)) {
      o.require(r.undecoded.empty(), "residual interference, " + name);
    }
    const SimulationTrace above = run_distance_regulated(t, *t.one_hop(), 1.001 * bound, 2 * n);
    o.require(above.sum_rate_failure_count() > 0, "no sum-rate failure above the bound, " + name);
    ++configs;
  });
  if (o.pass) o.detail = std::to_string(configs) + " configurations";
  return o;
}

Outcome bisection_consistency() {
  Outcome o;
  double worst = 0.0;
  for_each_regular(12, [&](int n, const char* gain, double p, const Topology& t) {
    const double gap = std::abs(max_achievable_rate(t).rate - allcast_rate_bound(t));
    worst = std::max(worst, gap);
    o.require(gap <= 1e-5, "bisection off the bound for " + config_name(n, gain, p));
  });
  std::mt19937_64 rng(2028);
  std::uniform_real_distribution<double> gap(0.2, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double d = gap(rng);
    const double p = oracle::log_uniform(rng, 0.1, 1000.0);
    const GainFunction g = GainFunction::parse(kGains[trial % 4]);
    const Topology t = general_line({0.0, d}, g, p, 1.0);
    const double expect = std::log2(1.0 + std::pow(g(d), 2) * p);
    o.require(std::abs(max_achievable_rate(t).rate - expect) <= 1e-5,
              "two-node bisection off log2(1 + P/N)");
  }
  if (o.pass) {
    std::ostringstream s;
    s << "largest regular-line gap " << worst << " bits";
    o.detail = s.str();
  }
  return o;
}

Outcome verdict_monotonicity() {
  Outcome o;
  std::mt19937_64 rng(2029);
  int holding = 0, violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    std::vector<double> x{0.0};
    std::uniform_real_distribution<double> gap(0.1, 4.0);
    for (int i = 1; i < n; ++i) x.push_back(x.back() + gap(rng));
    const Topology t = general_line(x, GainFunction::parse(kGains[trial % 4]),
                                    oracle::log_uniform(rng, 0.3, 300.0), 1.0);
    std::uniform_real_distribution<double> u(0.0, allcast_rate_bound(t));
    for (double rate : {u(rng), max_achievable_rate(t).rate}) {
      if (!check_line_conditions(t, rate).verdict) continue;
      ++holding;
      if (!check_line_conditions(t, 0.5 * rate).verdict) ++violations;
    }
  }
  o.require(violations == 0, std::to_string(violations) + " violations");
  o.require(holding >= 100, "too few holding rates");
  if (o.pass) o.detail = std::to_string(holding) + " holding rates, 0 violations";
  return o;
}

std::string capture(const std::string& command) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) return {};
  std::string out;
  std::array<char, 4096> buf;
  while (size_t got = fread(buf.data(), 1, buf.size(), pipe.get())) out.append(buf.data(), got);
  return out;
}

Outcome determinism(const std::string& exe) {
  Outcome o;
  if (exe.empty()) {
    o.require(false, "no executable path given");
    return o;
  }
  const std::vector<std::string> runs = {
      "analyze --n 8 --gain exp:1 --seed 11",
      "simulate --n 6 --sizes 3,4,5,6,7,8 --seed 11",
      "simulate --n 5 --format json --seed 11",
      "sweep --n-list 2,3,4,5,6,7,8,9,10 --gain-list pl:2,pl:4,exp:1,const",
      "bin-demo --sizes 2,3,4",
  };
  for (const std::string& args : runs) {
    const std::string cmd = "'" + exe + "' " + args + " 2>&1";
    const std::string a = capture(cmd), b = capture(cmd);
    o.require(!a.empty() && a.rfind("error:", 0) != 0, "no output from: " + args);
    o.require(a == b, "outputs differ for: " + args);
  }
  if (o.pass) o.detail = std::to_string(runs.size()) + " commands byte-identical";
  return o;
}

}  // namespace
}  // namespace omnirelay

int main(int argc, char** argv) {
  using omnirelay::Outcome;
  const std::string exe = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"binning correctness", omnirelay::binning_correctness},
      {"decodable subset oracle equivalence", omnirelay::subset_oracle_equivalence},
      {"two-block region identities", omnirelay::two_block_identities},
      {"regular line achievability conditions", omnirelay::regular_line_reproduction},
      {"end-to-end simulation on regular lines", omnirelay::end_to_end},
      {"bisection consistency", omnirelay::bisection_consistency},
      {"verdict monotonicity", omnirelay::verdict_monotonicity},
      {"CLI determinism", [&] { return omnirelay::determinism(exe); }},
  };
  int failed = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": "
              << criteria[k].first << " -- " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
