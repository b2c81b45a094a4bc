// Copyright 2026 The logdoc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "logdoc/isa.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace logdoc {

void IsaHierarchy::add(const std::string& child, const std::string& parent) {
  if (child == parent || subsumes(child, parent)) {
    throw IsaError("isa(" + child + "," + parent + ") closes a cycle");
  }
  auto& kids = children_[parent];
  if (std::find(kids.begin(), kids.end(), child) != kids.end()) return;
  kids.push_back(child);
  edges_.emplace_back(child, parent);
}

std::vector<std::string> IsaHierarchy::descendants(const std::string& c) const {
  std::vector<std::string> out{c};
  std::set<std::string> seen{c};
  std::deque<std::string> queue{c};
  while (!queue.empty()) {
    auto it = children_.find(queue.front());
    queue.pop_front();
    if (it == children_.end()) continue;
    for (const auto& kid : it->second) {
      if (seen.insert(kid).second) {
        out.push_back(kid);
        queue.push_back(kid);
      }
    }
  }
  return out;
}

bool IsaHierarchy::subsumes(const std::string& ancestor, const std::string& c) const {
  auto d = descendants(ancestor);
  return std::find(d.begin(), d.end(), c) != d.end();
}

}  // namespace logdoc
