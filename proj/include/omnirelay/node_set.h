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

#ifndef OMNIRELAY_NODE_SET_H_
#define OMNIRELAY_NODE_SET_H_

#include <algorithm>
#include <string>
#include <vector>

namespace omnirelay {

// Nodes are numbered 0..n-1 inside the library.
using NodeId = int;

// Sorted, duplicate-free list of node ids.
using NodeSet = std::vector<NodeId>;

inline NodeSet normalized(NodeSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool contains(const NodeSet& s, NodeId id) {
  return std::binary_search(s.begin(), s.end(), id);
}

inline bool is_subset(const NodeSet& sub, const NodeSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

inline NodeSet set_union(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

inline NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

inline NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

inline bool intersects(const NodeSet& a, const NodeSet& b) {
  return !set_intersection(a, b).empty();
}

// "{1,3,4}" with ids shifted by `offset` (1 for human-facing output).
std::string format_set(const NodeSet& s, int offset = 0);

}  // namespace omnirelay

#endif  // OMNIRELAY_NODE_SET_H_
