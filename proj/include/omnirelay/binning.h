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

#ifndef OMNIRELAY_BINNING_H_
#define OMNIRELAY_BINNING_H_

#include <functional>
#include <map>
#include <span>
#include <vector>

namespace omnirelay {

inline constexpr long long kMaxBinningVectors = 1'000'000;

// Maps message vectors (w_1..w_k), w_j in [0, sizes[j]), to a bin index in
// [0, bin_count). A receiver that knows all coordinates but one recovers the
// missing one from the bin index when no bin holds two vectors differing in a
// single coordinate.
class BinAssignment {
 public:
  using Rule = std::function<int(std::span<const int>)>;

  // Arbitrary rule; decoding then searches the bin.
  BinAssignment(std::vector<int> sizes, int bin_count, Rule rule);

  const std::vector<int>& sizes() const { return sizes_; }
  int arity() const { return static_cast<int>(sizes_.size()); }
  int bin_count() const { return bin_count_; }
  bool is_modular() const { return modular_; }

  int bin(std::span<const int> message) const;

 private:
  friend BinAssignment build_binning(std::vector<int> sizes);
  BinAssignment() = default;

  std::vector<int> sizes_;
  int bin_count_ = 0;
  bool modular_ = false;
  Rule rule_;
};

// bin(w) = (sum_j w_j) mod max_j sizes[j].
BinAssignment build_binning(std::vector<int> sizes);

// Recovers coordinate `target` from the bin index and the other coordinates
// in `known`. Throws kDecode when the side information is inconsistent with
// the bin.
int decode_from_side_info(const BinAssignment& bins, int bin_index,
                          const std::map<int, int>& known, int target);

// Exhaustive check of side-information decodability. Throws
// kCapacityExceeded when there are more than kMaxBinningVectors vectors.
bool verify_binning_property(const BinAssignment& bins);

struct RoundTripSummary {
  long long vectors = 0;
  long long decodes = 0;   // vectors * arity
  long long failures = 0;  // wrong value or kDecode thrown
};

// Bins every vector and decodes every coordinate back from the others.
// Same size limit as verify_binning_property.
RoundTripSummary round_trip_all(const BinAssignment& bins);

}  // namespace omnirelay

#endif  // OMNIRELAY_BINNING_H_
