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

#ifndef LOGDOC_KB_HPP_
#define LOGDOC_KB_HPP_

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "logdoc/logical_form.hpp"
#include "logdoc/term.hpp"

namespace logdoc {

// Back-pointer of a stored axiom: fragment (sentence/title/caption
// ordinal) within a document. Serialized as the suffix /Fragment/Document.
struct Provenance {
  int fragment = 0;
  int document = 0;

  std::string suffix() const;
  auto operator<=>(const Provenance&) const = default;
};

using FactId = std::size_t;

struct GroupRef {
  std::size_t group = 0;
  std::size_t alternative = 0;
  bool operator==(const GroupRef&) const = default;
};

struct StoredFact {
  FactId id = 0;
  Atom atom;
  Provenance prov;
  std::optional<GroupRef> group;

  // atom/F/D
  std::string str() const;
};

// Disjunction of the surviving readings of one ambiguous fragment.
struct ReadingGroup {
  std::string id;
  Provenance prov;
  std::vector<std::vector<FactId>> alternatives;
};

struct Rule {
  std::string id;
  HornClause clause;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.id == b.id && a.clause == b.clause;
  }
};

class KbError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed knowledge base file; the message starts with "line N:".
class KbFormatError : public KbError {
 public:
  KbFormatError(std::size_t line, const std::string& what)
      : KbError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using LookupEntry = std::variant<const StoredFact*, const Rule*>;

// Append-only clause base of provenance-tagged ground facts, reading
// groups and rules.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  // One reading gives plain facts, two or more give a ReadingGroup. The
  // readings must already be ground (Skolemized).
  std::vector<FactId> assert_fragment(int document, int fragment,
                                      const std::vector<LogicalForm>& readings,
                                      std::string source_text);
  void add_rule(Rule rule);

  // Facts then rules whose head matches, each in insertion order.
  std::vector<LookupEntry> lookup(const std::string& predicate, std::size_t arity) const;
  const std::vector<FactId>& facts_for(const std::string& key) const;
  const std::vector<FactId>& facts_for(const std::string& key, const Provenance& prov) const;

  const std::vector<StoredFact>& facts() const { return facts_; }
  const StoredFact& fact(FactId id) const { return facts_.at(id); }
  const std::vector<Rule>& rules() const { return rules_; }
  const Rule* find_rule(const std::string& id) const;
  const std::vector<ReadingGroup>& groups() const { return groups_; }
  const std::map<Provenance, std::string>& registry() const { return registry_; }
  const std::string* source_text(const Provenance& prov) const;
  bool has_document(int document) const;
  bool has_fragment(const Provenance& prov) const { return registry_.count(prov) != 0; }

  SkolemIssuer& skolems() { return skolems_; }
  const SkolemIssuer& skolems() const { return skolems_; }

  void write(std::ostream& out) const;
  static KnowledgeBase read(std::istream& in);
  // Writes to a temporary file beside path and renames it into place.
  void save(const std::string& path) const;
  static KnowledgeBase load(const std::string& path);

  friend bool operator==(const KnowledgeBase& a, const KnowledgeBase& b);

 private:
  FactId add_fact(const Atom& atom, const Provenance& prov, std::optional<GroupRef> group);

  std::vector<StoredFact> facts_;
  std::vector<Rule> rules_;
  std::vector<ReadingGroup> groups_;
  std::map<Provenance, std::string> registry_;
  SkolemIssuer skolems_;

  std::unordered_map<std::string, std::vector<FactId>> by_key_;
  std::map<std::pair<std::string, Provenance>, std::vector<FactId>> by_key_prov_;
};

}  // namespace logdoc

#endif  // LOGDOC_KB_HPP_
