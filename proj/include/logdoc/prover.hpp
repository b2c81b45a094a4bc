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

#ifndef LOGDOC_PROVER_HPP_
#define LOGDOC_PROVER_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logdoc/isa.hpp"
#include "logdoc/kb.hpp"
#include "logdoc/logical_form.hpp"
#include "logdoc/term.hpp"

namespace logdoc {

// Conjunctive query. Every literal is proved from the same fragment of
// the same document; the provenance variables are internal and never
// clash with variables of the literals.
struct Goal {
  std::vector<Atom> literals;

  static Goal from(const LogicalForm& lf) { return Goal{lf.atoms}; }
  bool empty() const { return literals.empty(); }
  std::vector<std::string> variables() const;
};

struct StagePolicy {
  std::string label;
  std::set<int> admitted_levels;
  // Rules without a level tag.
  bool admit_unleveled = false;
  bool use_isa = false;
  std::size_t max_inferences = 10000;
  int max_depth = 8;
  std::optional<double> rule_weight_cap;

  // Fact matching only.
  static StagePolicy direct();
  // Level-1 and level-2 rules.
  static StagePolicy level2();
  // All rules.
  static StagePolicy level3();
  // All rules plus isa expansion of query literals.
  static StagePolicy isa();

  bool admits(const HornClause& clause) const;
  bool admits_rules() const { return admit_unleveled || !admitted_levels.empty(); }
  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct ProofStep {
  enum class Kind { kFact, kRule, kIsa };
  Kind kind = Kind::kFact;
  // Selected literal, instantiated by the solution's substitution.
  Atom literal;
  FactId fact = 0;     // kFact
  std::string rule;    // kRule
  Atom variant;        // kIsa: replacement literal
};

struct ProofTrace {
  std::optional<Provenance> prov;
  std::vector<ProofStep> steps;
  std::size_t inferences = 0;  // search-wide count when the solution was found
  std::string stage;

  std::size_t rule_applications() const;
  std::vector<std::string> rules_used() const;
};

struct Solution {
  Substitution bindings;  // restricted to the goal's variables
  ProofTrace trace;
};

struct ProofResult {
  // One per (fragment, document), ordered by document, fragment, then
  // trace length.
  std::vector<Solution> solutions;
  bool truncated = false;
  std::size_t inferences = 0;
};

// Iterative-deepening SLD resolution over kb facts, kb rules and
// extra_rules (in that order) under the stage policy. Reading-group
// alternatives exclude each other within one proof; subgoals that are
// variants of an ancestor are pruned.
ProofResult prove(const Goal& goal, const KnowledgeBase& kb, const StagePolicy& policy,
                  const std::vector<Rule>& extra_rules = {}, const IsaHierarchy* isa = nullptr);

// Re-runs the recorded steps with leftmost selection. Returns the
// solution's bindings, or nullopt if some step does not apply.
std::optional<Solution> replay(const Goal& goal, const KnowledgeBase& kb, const ProofTrace& trace,
                               const std::vector<Rule>& extra_rules = {},
                               const IsaHierarchy* isa = nullptr);

// The atom followed by each variant with constants replaced by their isa
// descendants, in positional breadth-first order.
std::vector<Atom> subsumption_expand(const Atom& atom, const IsaHierarchy& isa);

// Numbered resolution steps with the clause used and its provenance.
std::string render_trace(const ProofTrace& trace, const KnowledgeBase& kb,
                         const std::vector<Rule>& extra_rules = {});

}  // namespace logdoc

#endif  // LOGDOC_PROVER_HPP_
