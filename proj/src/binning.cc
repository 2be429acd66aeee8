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

#include "omnirelay/binning.h"

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "omnirelay/error.h"

namespace omnirelay {
namespace {

void check_sizes(const std::vector<int>& sizes) {
  if (sizes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "binning needs at least one message");
  }
  for (int s : sizes) {
    if (s < 1) {
      throw Error(ErrorCode::kInvalidArgument, "alphabet sizes must be >= 1");
    }
  }
}

long long vector_count(const std::vector<int>& sizes) {
  long long total = 1;
  for (int s : sizes) {
    total *= s;
    if (total > kMaxBinningVectors) {
      throw Error(ErrorCode::kCapacityExceeded,
                  "exhaustive binning check limited to " +
                      std::to_string(kMaxBinningVectors) + " vectors");
    }
  }
  return total;
}

bool advance(std::vector<int>& w, const std::vector<int>& sizes) {
  for (int q = static_cast<int>(w.size()) - 1; q >= 0; --q) {
    if (++w[q] < sizes[q]) return true;
    w[q] = 0;
  }
  return false;
}

}  // namespace

BinAssignment::BinAssignment(std::vector<int> sizes, int bin_count, Rule rule)
    : sizes_(std::move(sizes)), bin_count_(bin_count), rule_(std::move(rule)) {
  check_sizes(sizes_);
  if (bin_count_ < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bin count must be >= 1");
  }
}

int BinAssignment::bin(std::span<const int> message) const {
  if (static_cast<int>(message.size()) != arity()) {
    throw Error(ErrorCode::kInvalidArgument, "message vector has wrong length");
  }
  for (int j = 0; j < arity(); ++j) {
    if (message[j] < 0 || message[j] >= sizes_[j]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "coordinate " + std::to_string(j) + " out of range");
    }
  }
  if (modular_) {
    long long sum = 0;
    for (int w : message) sum += w;
    return static_cast<int>(sum % bin_count_);
  }
  const int b = rule_(message);
  if (b < 0 || b >= bin_count_) {
    throw Error(ErrorCode::kInvalidArgument, "binning rule left the bin range");
  }
  return b;
}

BinAssignment build_binning(std::vector<int> sizes) {
  check_sizes(sizes);
  BinAssignment b;
  b.bin_count_ = *std::max_element(sizes.begin(), sizes.end());
  b.sizes_ = std::move(sizes);
  b.modular_ = true;
  return b;
}

int decode_from_side_info(const BinAssignment& bins, int bin_index,
                          const std::map<int, int>& known, int target) {
  const int k = bins.arity();
  if (target < 0 || target >= k) {
    throw Error(ErrorCode::kInvalidArgument, "target coordinate out of range");
  }
  if (bin_index < 0 || bin_index >= bins.bin_count()) {
    throw Error(ErrorCode::kInvalidArgument, "bin index out of range");
  }
  if (static_cast<int>(known.size()) != k - 1 || known.contains(target)) {
    throw Error(ErrorCode::kInvalidArgument,
                "side information must cover every coordinate but the target");
  }
  std::vector<int> message(k, 0);
  for (const auto& [j, w] : known) {
    if (j < 0 || j >= k || w < 0 || w >= bins.sizes()[j]) {
      throw Error(ErrorCode::kInvalidArgument, "side information out of range");
    }
    message[j] = w;
  }
  if (bins.is_modular()) {
    const long long m = bins.bin_count();
    long long rest = 0;
    for (const auto& [j, w] : known) rest += w;
    const long long value = (((bin_index - rest) % m) + m) % m;
    if (value >= bins.sizes()[target]) {
      throw Error(ErrorCode::kDecode,
                  "recovered value " + std::to_string(value) +
                      " exceeds the alphabet of coordinate " +
                      std::to_string(target) + "; side information is corrupt");
    }
    return static_cast<int>(value);
  }
  int found = -1;
  for (int v = 0; v < bins.sizes()[target]; ++v) {
    message[target] = v;
    if (bins.bin(message) != bin_index) continue;
    if (found >= 0) {
      throw Error(ErrorCode::kDecode, "bin does not determine the target");
    }
    found = v;
  }
  if (found < 0) {
    throw Error(ErrorCode::kDecode,
                "no value is consistent with the bin and side information");
  }
  return found;
}

bool verify_binning_property(const BinAssignment& bins) {
  const std::vector<int>& sizes = bins.sizes();
  const long long total = vector_count(sizes);
  const int k = bins.arity();
  // seen[j] holds (bin, vector without coordinate j) keys.
  std::vector<std::unordered_set<uint64_t>> seen(k);
  std::vector<int> w(k, 0);
  for (long long count = 0; count < total; ++count) {
    const uint64_t b = static_cast<uint64_t>(bins.bin(w));
    for (int j = 0; j < k; ++j) {
      uint64_t rest = 0;
      for (int q = 0; q < k; ++q) {
        if (q != j) rest = rest * static_cast<uint64_t>(sizes[q]) + w[q];
      }
      if (!seen[j].insert(b * static_cast<uint64_t>(total) + rest).second) {
        return false;
      }
    }
    advance(w, sizes);
  }
  return true;
}

RoundTripSummary round_trip_all(const BinAssignment& bins) {
  const std::vector<int>& sizes = bins.sizes();
  RoundTripSummary summary;
  summary.vectors = vector_count(sizes);
  const int k = bins.arity();
  std::vector<int> w(k, 0);
  do {
    const int b = bins.bin(w);
    for (int target = 0; target < k; ++target) {
      std::map<int, int> known;
      for (int j = 0; j < k; ++j) {
        if (j != target) known.emplace(j, w[j]);
      }
      ++summary.decodes;
      try {
        if (decode_from_side_info(bins, b, known, target) != w[target]) {
          ++summary.failures;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDecode) throw;
        ++summary.failures;
      }
    }
  } while (advance(w, sizes));
  return summary;
}

}  // namespace omnirelay
