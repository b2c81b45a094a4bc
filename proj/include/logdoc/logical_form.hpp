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

#ifndef LOGDOC_LOGICAL_FORM_HPP_
#define LOGDOC_LOGICAL_FORM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logdoc/term.hpp"

namespace logdoc {

// Abstraction level of an atom in a mixed-level logical form.
enum class AtomLevel {
  kSupport = 0,  // object/2, property/2, relationship/3
  kLevel1 = 1,   // obligatory role fillers: eventuality/parameter predicates
  kLevel2 = 2,   // core modifiers
  kLevel3 = 3,   // circumstance/3
};

std::string level_name(AtomLevel level);

// Conjunction of atoms. `levels` is either empty (unclassified, e.g. a
// hand-written form) or parallel to `atoms`.
struct LogicalForm {
  std::vector<Atom> atoms;
  std::vector<AtomLevel> levels;

  bool empty() const { return atoms.empty(); }
  std::size_t size() const { return atoms.size(); }
  bool classified() const { return levels.size() == atoms.size(); }
  std::optional<AtomLevel> level_of(std::size_t i) const;
  bool ground() const;
  std::vector<std::string> variables() const;

  void append(const LogicalForm& other);
  // "a, b, c" in atom syntax.
  std::string str() const;

  friend bool operator==(const LogicalForm& a, const LogicalForm& b) {
    return a.atoms == b.atoms;
  }
};

LogicalForm parse_logical_form(std::string_view text);

// Issues Skolem constants sk-1, sk-2, ... ; never reuses an index.
class SkolemIssuer {
 public:
  explicit SkolemIssuer(std::int64_t next = 1) : next_(next) {}
  Term issue() { return Term::skolem(next_++); }
  std::int64_t next() const { return next_; }

  friend bool operator==(const SkolemIssuer& a, const SkolemIssuer& b) {
    return a.next_ == b.next_;
  }

 private:
  std::int64_t next_;
};

// Existential closure: each distinct free variable, in order of first
// occurrence, becomes a fresh Skolem constant.
LogicalForm skolemize(const LogicalForm& lf, SkolemIssuer& issuer);

// True iff a bijective variable renaming maps the atom set of a onto b.
bool alpha_equivalent(const LogicalForm& a, const LogicalForm& b);

}  // namespace logdoc

#endif  // LOGDOC_LOGICAL_FORM_HPP_
