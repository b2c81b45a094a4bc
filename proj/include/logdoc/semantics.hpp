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

#ifndef LOGDOC_SEMANTICS_HPP_
#define LOGDOC_SEMANTICS_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logdoc/chart.hpp"
#include "logdoc/logical_form.hpp"
#include "logdoc/resources.hpp"
#include "logdoc/term.hpp"

namespace logdoc {

class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Child builds do not unify with the rule's constituent patterns.
class CompositionError : public SemanticsError {
 public:
  CompositionError(const std::string& rule, const std::string& what)
      : SemanticsError("rule " + rule + ": " + what), rule_(rule) {}
  const std::string& rule() const { return rule_; }

 private:
  std::string rule_;
};

struct PredicateFamily {
  std::string predicate;
  std::size_t arity = 0;
  AtomLevel level = AtomLevel::kSupport;
  // Argument position of the eventuality referent, if any.
  std::optional<std::size_t> event_slot;
};

// Registered predicate families. Each (predicate, arity) appears once.
class SchemeTable {
 public:
  // Eventuality schemes (eventuality/4, action/5, the six-slot parameters
  // and the five-slot locative), the core modifiers, circumstance/3 and
  // the support predicates.
  static SchemeTable standard();

  // Throws SemanticsError if the pair is already registered.
  void add(PredicateFamily family);
  const PredicateFamily* find(const std::string& predicate, std::size_t arity) const;
  const std::vector<PredicateFamily>& families() const { return families_; }

 private:
  std::vector<PredicateFamily> families_;
};

// Throws SemanticsError "unknown predicate family: p/n".
AtomLevel classify_level(const Atom& atom, const SchemeTable& table);
// Returns lf with levels filled in.
LogicalForm classify(LogicalForm lf, const SchemeTable& table);

// Puts level-2 atoms in (Value, Eventuality) order: an atom whose first
// argument is the eventuality of some level-1 atom and whose second is
// not gets its arguments swapped.
LogicalForm normalize_modifier_order(LogicalForm lf, const SchemeTable& table);

// Instantiated build of the analysis root: lexical templates and rule
// patterns renamed by edge salt and combined by unification.
Term compose_build(const Analysis& analysis, const ResourceSet& res);

// Strips abstractions, flattens &, resolves @(F, Args...) to F(Args...),
// drops `true` and duplicate atoms.
LogicalForm flatten_build(const Term& build);

// Classified logical form of one reading; free variables remain.
LogicalForm compose(const Analysis& analysis, const ResourceSet& res,
                    const SchemeTable& table = SchemeTable::standard());

// One logical form per reading, alpha-equivalent readings merged, in
// reading order.
std::vector<LogicalForm> compose(const std::vector<Analysis>& readings, const ResourceSet& res,
                                 const SchemeTable& table = SchemeTable::standard());

// Closed-class words dropped by keyword fallback.
bool is_function_word(const std::string& word);

// object(lemma, Wn) for each content word; lemma from the lexicon when
// known, else the lowercased surface form. Variables are W<first_var>,
// W<first_var + 1>, ...
LogicalForm keyword_fallback(const std::vector<std::string>& tokens, const Lexicon& lexicon,
                             std::size_t first_var = 1);

// One atom per line, "atom.  % level N" (or "% support"; no tag when the
// form is unclassified).
std::string lf_debug_string(const LogicalForm& lf);

}  // namespace logdoc

#endif  // LOGDOC_SEMANTICS_HPP_
