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

#ifndef LOGDOC_ISA_HPP_
#define LOGDOC_ISA_HPP_

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace logdoc {

class IsaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Subsumption edges child -> parent over constants. Acyclic.
class IsaHierarchy {
 public:
  // Throws IsaError if the edge would close a cycle.
  void add(const std::string& child, const std::string& parent);

  bool empty() const { return edges_.empty(); }
  const std::vector<std::pair<std::string, std::string>>& edges() const { return edges_; }

  // c itself first, then every x with x isa+ c in breadth-first order.
  std::vector<std::string> descendants(const std::string& c) const;
  bool subsumes(const std::string& ancestor, const std::string& c) const;

 private:
  std::vector<std::pair<std::string, std::string>> edges_;
  std::map<std::string, std::vector<std::string>> children_;
};

}  // namespace logdoc

#endif  // LOGDOC_ISA_HPP_
