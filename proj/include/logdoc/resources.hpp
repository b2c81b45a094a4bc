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

#ifndef LOGDOC_RESOURCES_HPP_
#define LOGDOC_RESOURCES_HPP_

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "logdoc/isa.hpp"
#include "logdoc/kb.hpp"
#include "logdoc/term.hpp"

namespace logdoc {

// Feature values are terms so rule patterns can share variables with
// builds. Lexical features are always ground.
using FeatureMap = std::map<std::string, Term>;

std::string features_str(const FeatureMap& f);

// Lowercased words and punctuation marks. Hyphens and apostrophes stay
// inside words.
std::vector<std::string> tokenize(std::string_view text);

struct LexEntry {
  std::string surface;
  std::string lemma;
  std::string category;
  FeatureMap features;
  std::vector<std::string> semtypes;

  std::string feature(const std::string& key) const;
  friend bool operator==(const LexEntry& a, const LexEntry& b) {
    return a.surface == b.surface && a.lemma == b.lemma && a.category == b.category &&
           a.features == b.features && a.semtypes == b.semtypes;
  }
};

class Lexicon {
 public:
  void add(LexEntry entry);
  const std::vector<LexEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Exact surface matches plus suffix-stripped forms whose lemma is a base
  // entry of the lexicon. Unknown words give an empty list.
  std::vector<LexEntry> analyze_word(const std::string& form) const;

  bool has_lemma(const std::string& lemma) const { return lemmas_.count(lemma) != 0; }
  bool has_semtype(const std::string& lemma, const std::string& type) const;
  std::vector<std::string> semtypes_of(const std::string& lemma) const;
  bool has_transitivity(const std::string& lemma, const std::string& tr) const;
  // Preferred lemma of a word for keyword indexing, if any.
  std::optional<std::string> lemma_of(const std::string& form) const;

  // Drops every semantic type declaration.
  Lexicon without_semtypes() const;

 private:
  std::vector<LexEntry> entries_;
  std::multimap<std::string, std::size_t> by_surface_;
  std::set<std::string> lemmas_;
};

// cat[f=V,...]/Sem inside a rule.
struct Constituent {
  std::string category;
  FeatureMap features;
  Term sem;
};

struct GrammarRule {
  std::string id;
  Constituent lhs;
  std::vector<Constituent> rhs;
  std::vector<Atom> guards;
  std::string location;  // file:line

  bool unary() const { return rhs.size() == 1; }
  std::vector<std::string> variables() const;
};

// Build template for lexical edges; the variable Lemma is bound to the
// entry's lemma.
struct LexTemplate {
  std::string category;
  FeatureMap features;
  Term build;
};

// A PP headed by prep whose object has semtype becomes relation(Object, Ev).
struct ModifierEntry {
  std::string prep;
  std::string semtype;
  std::string relation;
};

struct Grammar {
  std::vector<std::string> categories;
  std::vector<GrammarRule> rules;
  std::vector<LexTemplate> templates;
  std::vector<ModifierEntry> modifiers;

  bool has_category(const std::string& c) const;
  const GrammarRule* find_rule(const std::string& id) const;
  std::optional<std::string> modifier_for(const std::string& prep,
                                          const std::vector<std::string>& semtypes) const;
};

// Subtractive preference correction keyed by id. Several clauses may share
// an id; the first whose parameters unify and whose guards hold applies.
struct SpecRule {
  std::string id;
  std::vector<Term> params;
  std::vector<Atom> guards;
  double value = 0;
  std::string location;
};

struct SetPhrase {
  std::vector<std::string> words;  // lowercased surface tokens
  double value = 40;
};

struct SpecTable {
  std::vector<SpecRule> rules;
  std::vector<SetPhrase> phrases;

  bool has_rule(const std::string& id) const;
  // Value of the first matching clause, 0 when none applies.
  double evaluate(const std::string& id, const std::vector<Term>& args, const Lexicon& lex) const;
  std::optional<double> phrase_value(const std::vector<std::string>& words) const;
};

struct MeaningPostulate {
  std::string id;
  HornClause clause;  // carries level and weight

  Rule to_rule() const { return Rule{id, clause}; }
};

struct ResourceSet {
  Grammar grammar;
  Lexicon lexicon;
  SpecTable specs;
  std::vector<MeaningPostulate> postulates;
  IsaHierarchy isa;

  std::vector<Rule> postulate_rules() const;
};

// All load problems of one call, each prefixed with file:line.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(std::vector<std::string> messages);
  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
};

struct ResourcePaths {
  std::string grammar;
  std::string lexicon;
  std::string postulates;
  std::string specs;
  std::string isa;  // optional; empty means none
};

// Paths of the bundled toy resources.
ResourcePaths bundled_resource_paths();

ResourceSet load_resources(const ResourcePaths& paths);

// Text-level loaders; problems are appended to errors as "name:line: ...".
Lexicon parse_lexicon(std::string_view text, const std::string& name,
                      std::vector<std::string>& errors);
Grammar parse_grammar(std::string_view text, const std::string& name,
                      std::vector<std::string>& errors);
SpecTable parse_specs(std::string_view text, const std::string& name,
                      std::vector<std::string>& errors);
std::vector<MeaningPostulate> parse_postulates(std::string_view text, const std::string& name,
                                               std::vector<std::string>& errors);
IsaHierarchy parse_isa(std::string_view text, const std::string& name,
                       std::vector<std::string>& errors);

struct ResourceTexts {
  std::string grammar;
  std::string lexicon;
  std::string postulates;
  std::string specs;
  std::string isa;
};

// Parses and cross-validates; throws ResourceError on any problem.
ResourceSet build_resources(const ResourceTexts& texts);

}  // namespace logdoc

#endif  // LOGDOC_RESOURCES_HPP_
