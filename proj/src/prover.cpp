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

#include "logdoc/prover.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <stdexcept>
#include <tuple>

namespace logdoc {

std::vector<std::string> Goal::variables() const {
  std::vector<std::string> out;
  for (const auto& a : literals) a.collect_variables(out);
  std::vector<std::string> unique;
  for (auto& v : out) {
    if (std::find(unique.begin(), unique.end(), v) == unique.end()) unique.push_back(v);
  }
  return unique;
}

StagePolicy StagePolicy::direct() {
  StagePolicy p;
  p.label = "direct";
  return p;
}

StagePolicy StagePolicy::level2() {
  StagePolicy p;
  p.label = "level2";
  p.admitted_levels = {1, 2};
  return p;
}

StagePolicy StagePolicy::level3() {
  StagePolicy p;
  p.label = "level3";
  p.admitted_levels = {1, 2, 3};
  p.admit_unleveled = true;
  return p;
}

StagePolicy StagePolicy::isa() {
  StagePolicy p = level3();
  p.label = "isa";
  p.use_isa = true;
  return p;
}

bool StagePolicy::admits(const HornClause& clause) const {
  if (rule_weight_cap && clause.weight > *rule_weight_cap) return false;
  if (!clause.level) return admit_unleveled;
  return admitted_levels.count(*clause.level) != 0;
}

void StagePolicy::validate() const {
  if (max_inferences == 0) throw std::invalid_argument("max_inferences must be positive");
  if (max_depth <= 0) throw std::invalid_argument("max_depth must be positive");
  if (rule_weight_cap && *rule_weight_cap < 0) {
    throw std::invalid_argument("rule_weight_cap must be non-negative");
  }
  for (int l : admitted_levels) {
    if (l < 1 || l > 3) throw std::invalid_argument("admitted_levels must be within {1,2,3}");
  }
}

std::size_t ProofTrace::rule_applications() const {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const ProofStep& s) {
    return s.kind == ProofStep::Kind::kRule;
  }));
}

std::vector<std::string> ProofTrace::rules_used() const {
  std::vector<std::string> out;
  for (const auto& s : steps) {
    if (s.kind == ProofStep::Kind::kRule &&
        std::find(out.begin(), out.end(), s.rule) == out.end()) {
      out.push_back(s.rule);
    }
  }
  return out;
}

std::vector<Atom> subsumption_expand(const Atom& atom, const IsaHierarchy& isa) {
  std::vector<Atom> out{atom};
  for (std::size_t i = 0; i < atom.arity(); ++i) {
    if (!atom.args[i].is_constant()) continue;
    auto below = isa.descendants(atom.args[i].name());
    if (below.size() < 2) continue;
    std::vector<Atom> next;
    for (const auto& d : below) {
      for (const auto& a : out) {
        Atom v = a;
        v.args[i] = Term::constant(d);
        next.push_back(std::move(v));
      }
    }
    out = std::move(next);
  }
  return out;
}

namespace {

// Goal variables get a '#' suffix and provenance variables a '#' prefix;
// no parsed or renamed variable carries either, so rule renaming never
// captures them.
Term mark(const Term& t) {
  if (t.is_variable()) return Term::variable(t.name() + "#");
  if (!t.is_compound()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(mark(a));
  return Term::compound(t.name(), std::move(args));
}

Atom mark(const Atom& a) {
  Atom out;
  out.predicate = a.predicate;
  for (const auto& t : a.args) out.args.push_back(mark(t));
  return out;
}

Term unmark(const Term& t) {
  if (t.is_variable()) {
    const std::string& n = t.name();
    return !n.empty() && n.back() == '#' ? Term::variable(n.substr(0, n.size() - 1)) : t;
  }
  if (!t.is_compound()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(unmark(a));
  return Term::compound(t.name(), std::move(args));
}

Atom unmark(const Atom& a) {
  Atom out;
  out.predicate = a.predicate;
  for (const auto& t : a.args) out.args.push_back(unmark(t));
  return out;
}

const Term kGoalFragment = Term::variable("#S");
const Term kGoalDocument = Term::variable("#D");

Atom with_prov(const Atom& a, const Term& s, const Term& d) {
  Atom out = a;
  out.args.push_back(s);
  out.args.push_back(d);
  return out;
}

bool is_variant(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate || a.arity() != b.arity()) return false;
  return alpha_equivalent(LogicalForm{{a}, {}}, LogicalForm{{b}, {}});
}

struct Ancestor {
  Atom atom;  // provenance appended
  std::shared_ptr<const Ancestor> parent;
};

struct Lit {
  Atom atom;
  Term s;
  Term d;
  int depth = 0;
  bool query = false;
  std::shared_ptr<const Ancestor> anc;
};

using Choices = std::vector<std::pair<std::size_t, std::size_t>>;

bool compatible(const Choices& ch, const GroupRef& g) {
  for (const auto& [group, alt] : ch) {
    if (group == g.group) return alt == g.alternative;
  }
  return true;
}

Choices with_choice(Choices ch, const GroupRef& g) {
  if (std::none_of(ch.begin(), ch.end(), [&](const auto& c) { return c.first == g.group; })) {
    ch.emplace_back(g.group, g.alternative);
  }
  return ch;
}

std::optional<Provenance> ground_prov(const Term& s, const Term& d) {
  auto f = s.as_integer();
  auto doc = d.as_integer();
  if (!s.is_constant() || !d.is_constant() || !f || !doc) return std::nullopt;
  return Provenance{static_cast<int>(*f), static_cast<int>(*doc)};
}

std::vector<Lit> initial_literals(const Goal& goal) {
  std::vector<Lit> out;
  for (const auto& a : goal.literals) {
    out.push_back(Lit{mark(a), kGoalFragment, kGoalDocument, 0, true, nullptr});
  }
  return out;
}

Solution make_solution(const Goal& goal, const Substitution& s, std::vector<ProofStep> steps,
                       std::optional<Provenance> prov, std::size_t inferences,
                       const std::string& stage) {
  Solution sol;
  for (const auto& v : goal.variables()) {
    Term value = unmark(s.apply(Term::variable(v + "#")));
    if (value != Term::variable(v)) sol.bindings.bind(v, value);
  }
  for (auto& st : steps) {
    st.literal = unmark(s.apply(st.literal));
    if (st.kind == ProofStep::Kind::kIsa) st.variant = unmark(s.apply(st.variant));
  }
  sol.trace.prov = prov;
  sol.trace.steps = std::move(steps);
  sol.trace.inferences = inferences;
  sol.trace.stage = stage;
  return sol;
}

class Search {
 public:
  Search(const Goal& goal, const KnowledgeBase& kb, const StagePolicy& policy,
         const std::vector<Rule>& extra, const IsaHierarchy* isa)
      : goal_(goal), kb_(kb), policy_(policy), isa_(isa) {
    if (policy.admits_rules()) {
      for (const auto& r : kb.rules()) {
        if (policy.admits(r.clause)) rules_.push_back(&r);
      }
      for (const auto& r : extra) {
        if (policy.admits(r.clause)) rules_.push_back(&r);
      }
    }
  }

  ProofResult run() {
    auto goals = initial_literals(goal_);
    for (int limit = 0; limit <= policy_.max_depth; ++limit) {
      limit_ = limit;
      cutoff_ = false;
      std::vector<ProofStep> steps;
      solve(goals, Substitution{}, Choices{}, steps);
      if (stop_ || !cutoff_) break;
    }
    ProofResult out;
    out.truncated = stop_;
    out.inferences = inferences_;
    out.solutions = std::move(solutions_);
    std::stable_sort(out.solutions.begin(), out.solutions.end(),
                     [](const Solution& a, const Solution& b) {
                       auto key = [](const Solution& s) {
                         return std::make_tuple(s.trace.prov ? s.trace.prov->document : 0,
                                                s.trace.prov ? s.trace.prov->fragment : 0,
                                                s.trace.steps.size());
                       };
                       return key(a) < key(b);
                     });
    return out;
  }

 private:
  bool count() {
    if (inferences_ >= policy_.max_inferences) {
      stop_ = true;
      return false;
    }
    ++inferences_;
    return true;
  }

  bool solved(const Substitution& s) const {
    auto prov = ground_prov(s.apply(kGoalFragment), s.apply(kGoalDocument));
    return prov && solved_.count(*prov);
  }

  void record(const Substitution& s, const std::vector<ProofStep>& steps) {
    Term sv = s.apply(kGoalFragment);
    Term dv = s.apply(kGoalDocument);
    auto prov = ground_prov(sv, dv);
    if (prov) {
      if (!solved_.insert(*prov).second) return;
    } else if (!goal_.empty() || trivial_done_) {
      return;
    } else {
      trivial_done_ = true;
    }
    solutions_.push_back(make_solution(goal_, s, steps, prov, inferences_, policy_.label));
  }

  void solve(const std::vector<Lit>& goals, const Substitution& s, const Choices& ch,
             std::vector<ProofStep>& steps) {
    if (stop_) return;
    if (goals.empty()) {
      record(s, steps);
      return;
    }
    const Lit& lit = goals.front();
    Atom cur = s.apply(lit.atom);
    Atom cur_prov = with_prov(cur, s.apply(lit.s), s.apply(lit.d));
    for (auto a = lit.anc; a; a = a->parent) {
      if (is_variant(s.apply(a->atom), cur_prov)) return;
    }
    std::vector<Lit> rest(goals.begin() + 1, goals.end());
    if (lit.query && policy_.use_isa && isa_) {
      // Only constants written in the query generalize, not values bound
      // by earlier literals.
      auto variants = subsumption_expand(lit.atom, *isa_);
      for (std::size_t i = 0; i < variants.size() && !stop_; ++i) {
        Atom v = s.apply(variants[i]);
        if (i > 0) steps.push_back(ProofStep{ProofStep::Kind::kIsa, cur, 0, {}, v});
        resolve(v, lit, rest, s, ch, steps);
        if (i > 0) steps.pop_back();
      }
    } else {
      resolve(cur, lit, rest, s, ch, steps);
    }
  }

  void resolve(const Atom& cur, const Lit& lit, const std::vector<Lit>& rest,
               const Substitution& s, const Choices& ch, std::vector<ProofStep>& steps) {
    Term sv = s.apply(lit.s);
    Term dv = s.apply(lit.d);
    auto prov = ground_prov(sv, dv);
    const auto& ids = prov ? kb_.facts_for(cur.key(), *prov) : kb_.facts_for(cur.key());
    for (FactId id : ids) {
      if (stop_) return;
      const StoredFact& f = kb_.fact(id);
      if (f.group && !compatible(ch, *f.group)) continue;
      auto s1 = unify(cur, f.atom, s);
      if (s1) s1 = unify(sv, Term::integer(f.prov.fragment), *s1);
      if (s1) s1 = unify(dv, Term::integer(f.prov.document), *s1);
      if (!s1 || !count()) continue;
      if (solved(*s1)) continue;
      steps.push_back(ProofStep{ProofStep::Kind::kFact, cur, id, {}, {}});
      solve(rest, *s1, f.group ? with_choice(ch, *f.group) : ch, steps);
      steps.pop_back();
    }
    for (const Rule* r : rules_) {
      if (stop_) return;
      const Atom& head = r->clause.head;
      if (head.predicate != cur.predicate || head.arity() != cur.arity()) continue;
      if (lit.depth + 1 > limit_) {
        cutoff_ = true;
        continue;
      }
      std::int64_t salt = ++salt_;
      HornClause c = rename_apart(r->clause, salt);
      Term rs = Term::variable("#S" + std::to_string(salt));
      Term rd = Term::variable("#D" + std::to_string(salt));
      auto s1 = unify(cur, c.head, s);
      if (s1) s1 = unify(sv, rs, *s1);
      if (s1) s1 = unify(dv, rd, *s1);
      if (!s1 || !count()) continue;
      auto anc = std::make_shared<const Ancestor>(Ancestor{with_prov(cur, sv, dv), lit.anc});
      std::vector<Lit> next;
      for (const auto& b : c.body) next.push_back(Lit{b, rs, rd, lit.depth + 1, false, anc});
      next.insert(next.end(), rest.begin(), rest.end());
      steps.push_back(ProofStep{ProofStep::Kind::kRule, cur, 0, r->id, {}});
      solve(next, *s1, ch, steps);
      steps.pop_back();
    }
  }

  const Goal& goal_;
  const KnowledgeBase& kb_;
  const StagePolicy& policy_;
  const IsaHierarchy* isa_;
  std::vector<const Rule*> rules_;

  int limit_ = 0;
  bool cutoff_ = false;
  bool stop_ = false;
  bool trivial_done_ = false;
  std::size_t inferences_ = 0;
  std::int64_t salt_ = 0;
  std::set<Provenance> solved_;
  std::vector<Solution> solutions_;
};

const Rule* find_rule(const std::string& id, const KnowledgeBase& kb,
                      const std::vector<Rule>& extra) {
  if (const Rule* r = kb.find_rule(id)) return r;
  for (const auto& r : extra) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

}  // namespace

ProofResult prove(const Goal& goal, const KnowledgeBase& kb, const StagePolicy& policy,
                  const std::vector<Rule>& extra_rules, const IsaHierarchy* isa) {
  policy.validate();
  return Search(goal, kb, policy, extra_rules, isa).run();
}

std::optional<Solution> replay(const Goal& goal, const KnowledgeBase& kb, const ProofTrace& trace,
                               const std::vector<Rule>& extra_rules, const IsaHierarchy* isa) {
  std::vector<Lit> goals = initial_literals(goal);
  Substitution s;
  Choices ch;
  std::vector<ProofStep> steps;
  std::optional<Atom> variant;
  std::int64_t salt = 0;
  for (const auto& step : trace.steps) {
    if (goals.empty()) return std::nullopt;
    Lit lit = goals.front();
    Atom cur = variant ? *variant : s.apply(lit.atom);
    Term sv = s.apply(lit.s);
    Term dv = s.apply(lit.d);
    std::optional<Substitution> s1;
    switch (step.kind) {
      case ProofStep::Kind::kIsa: {
        if (!isa || variant) return std::nullopt;
        auto variants = subsumption_expand(lit.atom, *isa);
        for (std::size_t i = 1; i < variants.size(); ++i) {
          Atom v = s.apply(variants[i]);
          if (unify(mark(step.variant), v, s)) {
            variant = v;
            break;
          }
        }
        if (!variant) return std::nullopt;
        steps.push_back(ProofStep{ProofStep::Kind::kIsa, cur, 0, {}, *variant});
        continue;
      }
      case ProofStep::Kind::kFact: {
        if (step.fact >= kb.facts().size()) return std::nullopt;
        const StoredFact& f = kb.fact(step.fact);
        if (f.group && !compatible(ch, *f.group)) return std::nullopt;
        s1 = unify(cur, f.atom, s);
        if (s1) s1 = unify(sv, Term::integer(f.prov.fragment), *s1);
        if (s1) s1 = unify(dv, Term::integer(f.prov.document), *s1);
        if (!s1) return std::nullopt;
        if (f.group) ch = with_choice(ch, *f.group);
        goals.erase(goals.begin());
        steps.push_back(ProofStep{ProofStep::Kind::kFact, cur, step.fact, {}, {}});
        break;
      }
      case ProofStep::Kind::kRule: {
        const Rule* r = find_rule(step.rule, kb, extra_rules);
        if (!r) return std::nullopt;
        HornClause c = rename_apart(r->clause, ++salt);
        Term rs = Term::variable("#S" + std::to_string(salt));
        Term rd = Term::variable("#D" + std::to_string(salt));
        s1 = unify(cur, c.head, s);
        if (s1) s1 = unify(sv, rs, *s1);
        if (s1) s1 = unify(dv, rd, *s1);
        if (!s1) return std::nullopt;
        std::vector<Lit> next;
        for (const auto& b : c.body) next.push_back(Lit{b, rs, rd, lit.depth + 1, false, nullptr});
        next.insert(next.end(), goals.begin() + 1, goals.end());
        goals = std::move(next);
        steps.push_back(ProofStep{ProofStep::Kind::kRule, cur, 0, step.rule, {}});
        break;
      }
    }
    s = std::move(*s1);
    variant.reset();
  }
  if (!goals.empty() || variant) return std::nullopt;
  auto prov = ground_prov(s.apply(kGoalFragment), s.apply(kGoalDocument));
  if (prov != trace.prov) return std::nullopt;
  return make_solution(goal, s, std::move(steps), prov, trace.inferences, trace.stage);
}

std::string render_trace(const ProofTrace& trace, const KnowledgeBase& kb,
                         const std::vector<Rule>& extra_rules) {
  std::string out;
  std::string suffix = trace.prov ? trace.prov->suffix() : "";
  std::size_t n = 0;
  for (const auto& st : trace.steps) {
    out += std::to_string(++n) + ". ";
    switch (st.kind) {
      case ProofStep::Kind::kFact:
        out += "fact " + std::to_string(st.fact) + ": " + kb.fact(st.fact).str();
        break;
      case ProofStep::Kind::kRule: {
        out += "rule " + st.rule;
        const Rule* r = find_rule(st.rule, kb, extra_rules);
        if (r && r->clause.level) out += " (level " + std::to_string(*r->clause.level) + ")";
        out += ": " + st.literal.str() + suffix;
        if (r) out += " <- " + r->clause.str();
        break;
      }
      case ProofStep::Kind::kIsa:
        out += "isa: " + st.literal.str() + " -> " + st.variant.str();
        break;
    }
    out += "\n";
  }
  return out;
}

}  // namespace logdoc
