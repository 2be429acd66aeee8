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

#include "omnirelay/mac_region.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>

#include "omnirelay/error.h"

namespace omnirelay {
namespace {

using Mask = uint64_t;

Mask bit(int i) { return Mask{1} << i; }

Mask to_mask(const NodeSet& s) {
  Mask m = 0;
  for (NodeId i : s) m |= bit(i);
  return m;
}

NodeSet to_set(Mask m) {
  NodeSet out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

double masked_sum(const std::vector<double>& v, Mask m) {
  double s = 0.0;
  while (m) {
    s += v[std::countr_zero(m)];
    m &= m - 1;
  }
  return s;
}

// Lexicographic order of the sorted id lists.
bool lex_less(Mask a, Mask b) {
  while (a && b) {
    const int la = std::countr_zero(a);
    const int lb = std::countr_zero(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  return a == 0 && b != 0;
}

void check_source_ids(const NodeSet& s, int m) {
  for (NodeId i : s) {
    if (i < 0 || i >= m) {
      throw Error(ErrorCode::kInvalidArgument,
                  "source id " + std::to_string(i) + " out of range");
    }
  }
}

// Visits every nonempty subset of `universe` with its rate and power sums,
// stopping as soon as `visit` returns false. Sums are formed along the
// recursion path so they never accumulate drift.
bool all_subsets(const std::vector<int>& universe, const MacInstance& inst,
                 const std::function<bool(double, double)>& visit) {
  const int k = static_cast<int>(universe.size());
  std::function<bool(int, double, double, bool)> rec =
      [&](int pos, double r, double p, bool any) -> bool {
    if (pos == k) return !any || visit(r, p);
    const int id = universe[pos];
    return rec(pos + 1, r + inst.rates[id], p + inst.powers[id], true) &&
           rec(pos + 1, r, p, any);
  };
  return rec(0, 0.0, 0.0, false);
}

struct Evaluation {
  double lhs;
  double rhs;
};

// Candidate subsets of `candidate` examined by the peel when exhaustive
// enumeration is too large: contiguous id runs, prefixes by ascending power,
// and prefixes by descending rate. With a common rate the
// ascending-power prefixes are the tightest subsets of every size.
std::vector<Mask> structured_family(Mask candidate,
                                    const std::vector<double>& rates,
                                    const std::vector<double>& powers) {
  const NodeSet ids = to_set(candidate);
  const size_t k = ids.size();
  std::vector<Mask> family;
  for (size_t a = 0; a < k; ++a) {
    Mask run = 0;
    for (size_t b = a; b < k; ++b) {
      run |= bit(ids[b]);
      family.push_back(run);
    }
  }
  auto add_prefixes = [&](NodeSet order) {
    Mask prefix = 0;
    for (NodeId i : order) {
      prefix |= bit(i);
      family.push_back(prefix);
    }
  };
  NodeSet by_power = ids;
  std::stable_sort(by_power.begin(), by_power.end(), [&](NodeId a, NodeId b) {
    return powers[a] < powers[b];
  });
  add_prefixes(by_power);
  NodeSet by_rate = by_power;
  std::stable_sort(by_rate.begin(), by_rate.end(), [&](NodeId a, NodeId b) {
    return rates[a] > rates[b];
  });
  add_prefixes(by_rate);
  std::sort(family.begin(), family.end());
  family.erase(std::unique(family.begin(), family.end()), family.end());
  return family;
}

struct PeelOutcome {
  Mask decodable = 0;
  bool exhaustive = true;
};

// Generic peel. `evaluate(subset, candidate)` gives the constraint of error
// event `subset` when only `candidate` is being decoded.
PeelOutcome peel(Mask sources, const std::vector<double>& rates,
                 const std::vector<double>& powers, double epsilon,
                 const std::function<Evaluation(Mask, Mask)>& evaluate) {
  PeelOutcome out;
  Mask candidate = sources;
  while (candidate) {
    const bool exact = std::popcount(candidate) <= kMaxExactSources;
    if (!exact) out.exhaustive = false;
    std::optional<Mask> worst;
    double worst_violation = 0.0;
    bool whole_violates = false;
    auto consider = [&](Mask s) {
      const Evaluation e = evaluate(s, candidate);
      if (strictly_below(e.lhs, e.rhs, epsilon)) return;
      if (s == candidate) {
        whole_violates = true;
        return;
      }
      const double violation = e.lhs - e.rhs;
      if (!worst || violation > worst_violation ||
          (violation == worst_violation && lex_less(s, *worst))) {
        worst = s;
        worst_violation = violation;
      }
    };
    if (exact) {
      for (Mask s = candidate; s; s = (s - 1) & candidate) consider(s);
    } else {
      for (Mask s : structured_family(candidate, rates, powers)) consider(s);
      // The family can miss violations; confirm the final set exactly while
      // enumeration is still affordable.
      if (!worst && !whole_violates &&
          std::popcount(candidate) <= kMaxFeasibilitySources) {
        for (Mask s = candidate; s; s = (s - 1) & candidate) consider(s);
        if (!worst && !whole_violates) out.exhaustive = true;
      }
    }
    if (!worst) {
      out.decodable = whole_violates ? 0 : candidate;
      return out;
    }
    candidate &= ~*worst;
  }
  out.decodable = 0;
  return out;
}

}  // namespace

double capacity_bits(double signal, double noise) {
  return std::log2(1.0 + signal / noise);
}

void MacInstance::validate() const {
  if (rates.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "a MAC needs at least one source");
  }
  if (rates.size() != powers.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "rates and powers must have the same length");
  }
  for (size_t i = 0; i < rates.size(); ++i) {
    if (!(rates[i] >= 0.0) || !std::isfinite(rates[i])) {
      throw Error(ErrorCode::kInvalidArgument, "rates must be finite and >= 0");
    }
    if (!(powers[i] >= 0.0) || !std::isfinite(powers[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "powers must be finite and >= 0");
    }
  }
  if (!(noise > 0.0) || !std::isfinite(noise)) {
    throw Error(ErrorCode::kInvalidArgument, "noise must be > 0");
  }
  if (!(interference >= 0.0) || !std::isfinite(interference)) {
    throw Error(ErrorCode::kInvalidArgument, "interference must be >= 0");
  }
}

bool mac_feasible(const MacInstance& inst, double epsilon) {
  inst.validate();
  const int m = inst.size();
  if (m > kMaxFeasibilitySources) {
    throw Error(ErrorCode::kCapacityExceeded,
                "mac_feasible enumerates 2^m subsets; m=" + std::to_string(m) +
                    " exceeds " + std::to_string(kMaxFeasibilitySources));
  }
  std::vector<int> all(m);
  std::iota(all.begin(), all.end(), 0);
  const double noise = inst.noise + inst.interference;
  return all_subsets(all, inst, [&](double r, double p) {
    return strictly_below(r, capacity_bits(p, noise), epsilon);
  });
}

double subset_slack(const MacInstance& inst, const NodeSet& subset) {
  inst.validate();
  check_source_ids(subset, inst.size());
  double r = 0.0, p = 0.0;
  for (NodeId i : subset) {
    r += inst.rates[i];
    p += inst.powers[i];
  }
  return capacity_bits(p, inst.noise + inst.interference) - r;
}

bool is_self_decodable(const MacInstance& inst, const NodeSet& subset,
                       double epsilon) {
  inst.validate();
  const NodeSet s = normalized(subset);
  check_source_ids(s, inst.size());
  if (static_cast<int>(s.size()) > kMaxFeasibilitySources) {
    throw Error(ErrorCode::kCapacityExceeded,
                "self-decodability check limited to " +
                    std::to_string(kMaxFeasibilitySources) + " sources");
  }
  double noise = inst.noise + inst.interference;
  for (int i = 0; i < inst.size(); ++i) {
    if (!contains(s, i)) noise += inst.powers[i];
  }
  return all_subsets(s, inst, [&](double r, double p) {
    return strictly_below(r, capacity_bits(p, noise), epsilon);
  });
}

NodeSet decodable_subset(const MacInstance& inst, double epsilon) {
  inst.validate();
  const int m = inst.size();
  if (m > kMaxExactSources) {
    throw Error(ErrorCode::kCapacityExceeded,
                "exact decodable_subset limited to " +
                    std::to_string(kMaxExactSources) + " sources");
  }
  // Sizes from m down; combinations in lexicographic order, so the first hit
  // is the answer.
  for (int k = m; k >= 1; --k) {
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      NodeSet candidate(idx.begin(), idx.end());
      if (is_self_decodable(inst, candidate, epsilon)) return candidate;
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == m - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  return {};
}

NodeSet peel_decodable_subset(const MacInstance& inst, double epsilon) {
  inst.validate();
  const int m = inst.size();
  if (m > kMaxPeelSources) {
    throw Error(ErrorCode::kCapacityExceeded,
                "peel limited to " + std::to_string(kMaxPeelSources) +
                    " sources");
  }
  const Mask all = m == 64 ? ~Mask{0} : bit(m) - 1;
  const double total_power = masked_sum(inst.powers, all);
  const double base_noise = inst.noise + inst.interference;
  auto evaluate = [&](Mask s, Mask candidate) {
    const double noise =
        base_noise + total_power - masked_sum(inst.powers, candidate);
    return Evaluation{masked_sum(inst.rates, s),
                      capacity_bits(masked_sum(inst.powers, s), noise)};
  };
  return to_set(peel(all, inst.rates, inst.powers, epsilon, evaluate).decodable);
}

TwoBlockInstance TwoBlockInstance::from_help_sets(MacInstance mac,
                                                  NodeSet first_block,
                                                  std::vector<NodeSet> helps) {
  TwoBlockInstance t;
  t.first_block = normalized(std::move(first_block));
  t.helped_by.assign(mac.size(), {});
  if (static_cast<int>(helps.size()) != mac.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "help sets must be given for every source");
  }
  for (int i = 0; i < mac.size(); ++i) {
    helps[i] = normalized(std::move(helps[i]));
    for (NodeId j : helps[i]) {
      if (j >= 0 && j < mac.size()) t.helped_by[j].push_back(i);
    }
  }
  t.helps = std::move(helps);
  t.mac = std::move(mac);
  t.validate();
  return t;
}

NodeSet TwoBlockInstance::second_block() const {
  NodeSet all(mac.size());
  std::iota(all.begin(), all.end(), 0);
  return set_difference(all, first_block);
}

void TwoBlockInstance::validate() const {
  mac.validate();
  const int m = mac.size();
  check_source_ids(first_block, m);
  if (first_block != normalized(first_block)) {
    throw Error(ErrorCode::kInvalidArgument, "first block must be a sorted set");
  }
  if (static_cast<int>(helps.size()) != m ||
      static_cast<int>(helped_by.size()) != m) {
    throw Error(ErrorCode::kInvalidArgument,
                "help relations must be given for every source");
  }
  for (int i = 0; i < m; ++i) {
    check_source_ids(helps[i], m);
    check_source_ids(helped_by[i], m);
    const bool in_first = contains(first_block, i);
    if (in_first && !helps[i].empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "sources with an outstanding block-1 message cannot help");
    }
    if (!in_first && !helped_by[i].empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "only block-1 messages can be helped");
    }
    for (NodeId j : helps[i]) {
      if (!contains(first_block, j)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "help sets must lie in the first block");
      }
      if (!contains(helped_by[j], i)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "help relation mismatch: " + std::to_string(i) +
                        " helps " + std::to_string(j) +
                        " but is not listed among its helpers");
      }
    }
    for (NodeId j : helped_by[i]) {
      if (!contains(helps[j], i)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "help relation mismatch: " + std::to_string(j) +
                        " listed as helper of " + std::to_string(i) +
                        " without helping it");
      }
    }
  }
}

namespace {

struct TwoBlockMasks {
  Mask first = 0;
  Mask second = 0;
  std::vector<Mask> helped_by;
  double first_power = 0.0;
  double noise = 0.0;
};

TwoBlockMasks two_block_masks(const TwoBlockInstance& inst) {
  TwoBlockMasks m;
  const int n = inst.mac.size();
  m.first = to_mask(inst.first_block);
  m.second = (bit(n) - 1) & ~m.first;
  for (const NodeSet& s : inst.helped_by) m.helped_by.push_back(to_mask(s));
  m.first_power = masked_sum(inst.mac.powers, m.first);
  m.noise = inst.mac.noise + inst.mac.interference;
  return m;
}

double two_block_rhs(const TwoBlockInstance& inst, const TwoBlockMasks& m,
                     Mask s) {
  const Mask s1 = s & m.first;
  Mask s2 = s & m.second;
  for (Mask rest = s1; rest; rest &= rest - 1) {
    s2 |= m.helped_by[std::countr_zero(rest)] & m.second;
  }
  return capacity_bits(masked_sum(inst.mac.powers, s1), m.noise) +
         capacity_bits(masked_sum(inst.mac.powers, s2),
                       m.first_power + m.noise);
}

}  // namespace

double two_block_capacity(const TwoBlockInstance& inst, const NodeSet& subset) {
  inst.validate();
  check_source_ids(subset, inst.mac.size());
  return two_block_rhs(inst, two_block_masks(inst), to_mask(subset));
}

bool two_block_feasible(const TwoBlockInstance& inst, double epsilon) {
  inst.validate();
  const int m = inst.mac.size();
  if (m > kMaxTwoBlockSources) {
    throw Error(ErrorCode::kCapacityExceeded,
                "two_block_feasible limited to " +
                    std::to_string(kMaxTwoBlockSources) + " sources");
  }
  const TwoBlockMasks masks = two_block_masks(inst);
  for (Mask s = 1; s < bit(m); ++s) {
    if (!strictly_below(masked_sum(inst.mac.rates, s),
                        two_block_rhs(inst, masks, s), epsilon)) {
      return false;
    }
  }
  return true;
}

NodeSet KBlockInstance::sources() const {
  NodeSet out;
  for (int t = 0; t < static_cast<int>(outstanding_block.size()); ++t) {
    if (outstanding_block[t] > 0) out.push_back(t);
  }
  return out;
}

void KBlockInstance::validate() const {
  mac.validate();
  const int m = mac.size();
  if (m > kMaxPeelSources) {
    throw Error(ErrorCode::kCapacityExceeded,
                "K-block instances are limited to " +
                    std::to_string(kMaxPeelSources) + " transmitters");
  }
  if (blocks < 1) {
    throw Error(ErrorCode::kInvalidArgument, "K must be at least 1");
  }
  if (static_cast<int>(outstanding_block.size()) != m ||
      static_cast<int>(relays.size()) != m) {
    throw Error(ErrorCode::kInvalidArgument,
                "K-block fields must be given for every transmitter");
  }
  if (!opaque.empty() && static_cast<int>(opaque.size()) != m) {
    throw Error(ErrorCode::kInvalidArgument,
                "opaque flags must be given for every transmitter");
  }
  for (int t = 0; t < m; ++t) {
    const int k = outstanding_block[t];
    if (k < 0 || k > blocks) {
      throw Error(ErrorCode::kInvalidArgument,
                  "outstanding block out of range 0..K");
    }
    if (static_cast<int>(relays[t].size()) != blocks ||
        (!opaque.empty() && static_cast<int>(opaque[t].size()) != blocks)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "per-block fields must have K entries");
    }
    for (int beta = 1; beta <= blocks; ++beta) {
      const NodeSet& r = relays[t][beta - 1];
      check_source_ids(r, m);
      if (r != normalized(r)) {
        throw Error(ErrorCode::kInvalidArgument, "relay sets must be sorted");
      }
      for (NodeId j : r) {
        if (j == t) {
          throw Error(ErrorCode::kInvalidArgument,
                      "a transmitter relays its own message implicitly");
        }
        if (outstanding_block[j] < 1 || outstanding_block[j] >= beta) {
          throw Error(ErrorCode::kInvalidArgument,
                      "block " + std::to_string(beta) + " codeword of " +
                          std::to_string(t) +
                          " can only relay messages outstanding from an "
                          "earlier block");
        }
      }
    }
  }
}

KBlockInstance as_kblock(const TwoBlockInstance& inst) {
  inst.validate();
  KBlockInstance k;
  const int m = inst.mac.size();
  k.mac = inst.mac;
  k.blocks = 2;
  k.outstanding_block.assign(m, 2);
  k.relays.assign(m, std::vector<NodeSet>(2));
  for (NodeId i : inst.first_block) k.outstanding_block[i] = 1;
  for (int i = 0; i < m; ++i) k.relays[i][1] = inst.helps[i];
  return k;
}

KBlockInstance as_kblock(const MacInstance& inst) {
  KBlockInstance k;
  k.mac = inst;
  k.blocks = 1;
  k.outstanding_block.assign(inst.size(), 1);
  k.relays.assign(inst.size(), std::vector<NodeSet>(1));
  return k;
}

namespace {

class KBlockFamily {
 public:
  explicit KBlockFamily(const KBlockInstance& inst) : inst_(inst) {
    const int m = inst.mac.size();
    for (int t = 0; t < m; ++t) {
      if (inst.outstanding_block[t] > 0) sources_ |= bit(t);
    }
    trigger_.assign(m, std::vector<Mask>(inst.blocks, 0));
    always_noise_.assign(m, std::vector<bool>(inst.blocks, false));
    for (int t = 0; t < m; ++t) {
      const int k = inst.outstanding_block[t];
      for (int beta = 1; beta <= inst.blocks; ++beta) {
        Mask trig = to_mask(inst.relays[t][beta - 1]);
        if (k == beta) trig |= bit(t);
        trigger_[t][beta - 1] = trig;
        const bool opaque = !inst.opaque.empty() && inst.opaque[t][beta - 1];
        always_noise_[t][beta - 1] = opaque || (k > 0 && beta > k);
      }
    }
  }

  Mask sources() const { return sources_; }

  // Noise level per block when only `targets` are decoded.
  std::vector<double> block_noise(Mask targets,
                                  std::vector<Mask>* silent) const {
    const int m = inst_.mac.size();
    const Mask dropped = sources_ & ~targets;
    std::vector<double> noise(inst_.blocks,
                              inst_.mac.noise + inst_.mac.interference);
    silent->assign(inst_.blocks, 0);
    for (int beta = 0; beta < inst_.blocks; ++beta) {
      for (int t = 0; t < m; ++t) {
        if (always_noise_[t][beta] || (trigger_[t][beta] & dropped)) {
          noise[beta] += inst_.mac.powers[t];
          (*silent)[beta] |= bit(t);
        }
      }
    }
    return noise;
  }

  double capacity(Mask subset, const std::vector<double>& noise,
                  const std::vector<Mask>& silent) const {
    const int m = inst_.mac.size();
    double total = 0.0;
    for (int beta = 0; beta < inst_.blocks; ++beta) {
      double signal = 0.0;
      for (int t = 0; t < m; ++t) {
        if (!(silent[beta] & bit(t)) && (trigger_[t][beta] & subset)) {
          signal += inst_.mac.powers[t];
        }
      }
      if (signal > 0.0) total += capacity_bits(signal, noise[beta]);
    }
    return total;
  }

 private:
  const KBlockInstance& inst_;
  Mask sources_ = 0;
  std::vector<std::vector<Mask>> trigger_;
  std::vector<std::vector<bool>> always_noise_;
};

}  // namespace

double kblock_capacity(const KBlockInstance& inst, const NodeSet& targets,
                       const NodeSet& subset) {
  inst.validate();
  const KBlockFamily family(inst);
  const Mask t = to_mask(normalized(targets)) & family.sources();
  std::vector<Mask> silent;
  const std::vector<double> noise = family.block_noise(t, &silent);
  return family.capacity(to_mask(normalized(subset)), noise, silent);
}

bool kblock_feasible(const KBlockInstance& inst, double epsilon) {
  inst.validate();
  const KBlockFamily family(inst);
  const Mask sources = family.sources();
  if (std::popcount(sources) > kMaxFeasibilitySources) {
    throw Error(ErrorCode::kCapacityExceeded,
                "kblock_feasible limited to " +
                    std::to_string(kMaxFeasibilitySources) + " sources");
  }
  std::vector<Mask> silent;
  const std::vector<double> noise = family.block_noise(sources, &silent);
  for (Mask s = sources; s; s = (s - 1) & sources) {
    if (!strictly_below(masked_sum(inst.mac.rates, s),
                        family.capacity(s, noise, silent), epsilon)) {
      return false;
    }
  }
  return true;
}

KBlockResult kblock_decodable_subset(const KBlockInstance& inst,
                                     double epsilon) {
  inst.validate();
  const KBlockFamily family(inst);
  const Mask sources = family.sources();
  KBlockResult result;
  result.guarantee_based = inst.blocks > 2;
  result.sum_rate_condition = strictly_below(
      masked_sum(inst.mac.rates, sources),
      capacity_bits(masked_sum(inst.mac.powers, sources),
                    inst.mac.noise + inst.mac.interference),
      epsilon);
  // Block noise depends only on the candidate set; cache the last one.
  Mask cached_for = ~Mask{0};
  std::vector<double> noise;
  std::vector<Mask> silent;
  auto evaluate = [&](Mask s, Mask candidate) {
    if (candidate != cached_for) {
      noise = family.block_noise(candidate, &silent);
      cached_for = candidate;
    }
    return Evaluation{masked_sum(inst.mac.rates, s),
                      family.capacity(s, noise, silent)};
  };
  const PeelOutcome outcome =
      peel(sources, inst.mac.rates, inst.mac.powers, epsilon, evaluate);
  result.decodable = to_set(outcome.decodable);
  result.exhaustive = outcome.exhaustive;
  return result;
}

}  // namespace omnirelay
