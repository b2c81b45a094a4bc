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

#include "logdoc/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace logdoc {

SchemeTable SchemeTable::standard() {
  SchemeTable t;
  auto add = [&t](const char* p, std::size_t n, AtomLevel level, std::optional<std::size_t> ev) {
    t.add(PredicateFamily{p, n, level, ev});
  };
  add("eventuality", 4, AtomLevel::kLevel1, 1);
  add("action", 5, AtomLevel::kLevel1, 0);
  add("locative", 5, AtomLevel::kLevel1, 1);
  for (const char* p : {"locative", "temporal", "active", "objective", "dative", "ambient"}) {
    add(p, 6, AtomLevel::kLevel1, 0);
  }
  for (const char* p :
       {"purpose", "method", "tool", "beneficiary", "manner", "time", "location"}) {
    add(p, 2, AtomLevel::kLevel2, 1);
  }
  add("circumstance", 3, AtomLevel::kLevel3, std::nullopt);
  add("object", 2, AtomLevel::kSupport, std::nullopt);
  add("property", 2, AtomLevel::kSupport, std::nullopt);
  add("relationship", 3, AtomLevel::kSupport, std::nullopt);
  return t;
}

void SchemeTable::add(PredicateFamily family) {
  if (find(family.predicate, family.arity)) {
    throw SemanticsError("predicate family registered twice: " + family.predicate + "/" +
                         std::to_string(family.arity));
  }
  families_.push_back(std::move(family));
}

const PredicateFamily* SchemeTable::find(const std::string& predicate, std::size_t arity) const {
  for (const auto& f : families_) {
    if (f.predicate == predicate && f.arity == arity) return &f;
  }
  return nullptr;
}

AtomLevel classify_level(const Atom& atom, const SchemeTable& table) {
  const PredicateFamily* f = table.find(atom.predicate, atom.arity());
  if (!f) throw SemanticsError("unknown predicate family: " + atom.key());
  return f->level;
}

LogicalForm classify(LogicalForm lf, const SchemeTable& table) {
  lf.levels.clear();
  for (const auto& a : lf.atoms) lf.levels.push_back(classify_level(a, table));
  return lf;
}

LogicalForm normalize_modifier_order(LogicalForm lf, const SchemeTable& table) {
  std::set<Term> events;
  for (const auto& a : lf.atoms) {
    const PredicateFamily* f = table.find(a.predicate, a.arity());
    if (f && f->level == AtomLevel::kLevel1 && f->event_slot) events.insert(a.args[*f->event_slot]);
  }
  for (auto& a : lf.atoms) {
    const PredicateFamily* f = table.find(a.predicate, a.arity());
    if (!f || f->level != AtomLevel::kLevel2) continue;
    if (events.count(a.args[0]) && !events.count(a.args[1])) std::swap(a.args[0], a.args[1]);
  }
  return lf;
}

namespace {

class Composer {
 public:
  Composer(const Chart& chart, const ResourceSet& res) : chart_(chart), res_(res) {}

  Term build(EdgeId id) {
    const Edge& e = chart_.edge(id);
    if (e.lexical()) return lexical_build(e);
    const GrammarRule& rule = res_.grammar.rules.at(static_cast<std::size_t>(e.rule_index));
    for (const auto& [var, value] : e.bindings.bindings()) {
      auto s = unify(Term::variable(var), value, s_);
      if (!s) throw CompositionError(rule.id, "inconsistent bindings for " + var);
      s_ = std::move(*s);
    }
    for (std::size_t i = 0; i < e.children.size(); ++i) {
      Term child = build(e.children[i]);
      Term pattern = s_.apply(rename_apart(rule.rhs[i].sem, e.salt));
      auto s = unify(pattern, child, s_);
      if (!s) {
        throw CompositionError(rule.id, "build of constituent " + std::to_string(i + 1) + " (" +
                                            rule.rhs[i].category + ") does not unify: " +
                                            pattern.str() + " vs " + s_.apply(child).str());
      }
      s_ = std::move(*s);
    }
    return s_.apply(rename_apart(rule.lhs.sem, e.salt));
  }

 private:
  Term lexical_build(const Edge& e) {
    if (e.template_index < 0) return Term();
    const LexTemplate& t = res_.grammar.templates.at(static_cast<std::size_t>(e.template_index));
    Term lemma_var = Term::variable("Lemma_" + std::to_string(e.salt));
    Term b = rename_apart(t.build, e.salt);
    auto s = unify(lemma_var, Term::constant(e.lemma), s_);
    if (s) s_ = std::move(*s);
    return s_.apply(b);
  }

  const Chart& chart_;
  const ResourceSet& res_;
  Substitution s_;
};

void flatten_into(const Term& t, std::vector<Atom>& out) {
  if (t.is_compound() && t.name() == "&" && t.arity() == 2) {
    flatten_into(t.args()[0], out);
    flatten_into(t.args()[1], out);
    return;
  }
  if (t.is_constant() && t.name() == "true") return;
  if (t.is_compound() && t.name() == "@") {
    if (t.arity() == 0 || !t.args()[0].is_constant()) {
      throw SemanticsError("unresolved application slot: " + t.str());
    }
    std::vector<Term> args(t.args().begin() + 1, t.args().end());
    out.emplace_back(t.args()[0].name(), std::move(args));
    return;
  }
  if (t.is_compound() && t.name() == "l" && t.arity() == 2) {
    flatten_into(t.args()[1], out);
    return;
  }
  auto atom = Atom::from_term(t);
  if (!atom) throw SemanticsError("build body is not an atom: " + t.str());
  out.push_back(std::move(*atom));
}

}  // namespace

Term compose_build(const Analysis& analysis, const ResourceSet& res) {
  Composer c(*analysis.chart, res);
  return c.build(analysis.root);
}

LogicalForm flatten_build(const Term& build) {
  std::vector<Atom> atoms;
  flatten_into(build, atoms);
  LogicalForm lf;
  for (auto& a : atoms) {
    if (std::find(lf.atoms.begin(), lf.atoms.end(), a) == lf.atoms.end()) {
      lf.atoms.push_back(std::move(a));
    }
  }
  return lf;
}

LogicalForm compose(const Analysis& analysis, const ResourceSet& res, const SchemeTable& table) {
  return classify(flatten_build(compose_build(analysis, res)), table);
}

std::vector<LogicalForm> compose(const std::vector<Analysis>& readings, const ResourceSet& res,
                                 const SchemeTable& table) {
  std::vector<LogicalForm> out;
  for (const auto& r : readings) {
    LogicalForm lf = compose(r, res, table);
    bool seen = std::any_of(out.begin(), out.end(),
                            [&](const LogicalForm& o) { return alpha_equivalent(o, lf); });
    if (!seen) out.push_back(std::move(lf));
  }
  return out;
}

bool is_function_word(const std::string& word) {
  static const std::set<std::string> kStop = {
      // articles and determiners
      "a", "an", "the", "this", "that", "these", "those", "some", "any", "every", "each", "no",
      // prepositions
      "of", "in", "on", "at", "with", "for", "by", "from", "to", "against", "into", "onto",
      "about", "over", "under", "between", "through", "during", "without", "within", "as",
      // conjunctions
      "and", "or", "but", "nor", "if", "because", "while", "whether", "than",
      // pronouns
      "i", "me", "my", "you", "your", "he", "him", "his", "she", "her", "it", "its", "we", "us",
      "our", "they", "them", "their", "who", "whom", "whose", "which", "what",
      // auxiliaries and particles
      "is", "are", "was", "were", "be", "been", "do", "does", "did", "not"};
  return kStop.count(word) != 0;
}

LogicalForm keyword_fallback(const std::vector<std::string>& tokens, const Lexicon& lexicon,
                             std::size_t first_var) {
  LogicalForm lf;
  std::size_t next = first_var;
  for (const auto& tok : tokens) {
    std::string w;
    for (char ch : tok) w += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (w.empty() || is_function_word(w)) continue;
    if (!std::isalnum(static_cast<unsigned char>(w[0]))) continue;
    std::string lemma = lexicon.lemma_of(w).value_or(w);
    lf.atoms.emplace_back("object", std::vector<Term>{Term::constant(lemma),
                                                      Term::variable("W" + std::to_string(next++))});
    lf.levels.push_back(AtomLevel::kSupport);
  }
  return lf;
}

std::string lf_debug_string(const LogicalForm& lf) {
  std::string out;
  for (std::size_t i = 0; i < lf.atoms.size(); ++i) {
    out += lf.atoms[i].str() + ".";
    if (auto level = lf.level_of(i)) {
      out += *level == AtomLevel::kSupport ? "  % support" : "  % level " + level_name(*level);
    }
    out += "\n";
  }
  return out;
}

}  // namespace logdoc
