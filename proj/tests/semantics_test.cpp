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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <functional>
#include <map>
#include <memory>

#include "logdoc/semantics.hpp"
#include "oracles/beta_oracle.hpp"

using namespace logdoc;
using namespace logdoc::testing;

namespace {

const ResourceSet& bundled() {
  static const ResourceSet rs = load_resources(bundled_resource_paths());
  return rs;
}

std::vector<Analysis> readings(const std::string& text, const ResourceSet& rs = bundled()) {
  ScoreConfig cfg;
  auto chart = parse(tokenize(text), rs, cfg);
  return filter_readings(full_analyses(chart), cfg);
}

LogicalForm best_lf(const std::string& text) {
  auto rs = readings(text);
  REQUIRE_FALSE(rs.empty());
  return compose(rs.front(), bundled());
}

bool has_atom(const LogicalForm& lf, const std::string& pattern) {
  Atom want = parse_atom(pattern);
  for (const auto& a : lf.atoms) {
    if (unify(a, want)) return true;
  }
  return false;
}

std::vector<std::string> fixture_sentences() {
  std::ifstream in(std::string(LOGDOC_FIXTURE_DIR) + "/sentences.txt");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') out.push_back(line);
  }
  return out;
}


}  // namespace

TEST_CASE("ditransitive action core with time, manner and location") {
  LogicalForm lf = best_lf("On Tuesday, John furtively gave Mary an apple in the courtyard");
  LogicalForm want = parse_logical_form(
      "action(E, give, john, A, mary), object(apple, A), location(C, E), object(courtyard, C), "
      "time(tuesday, E), manner(furtive, E)");
  CHECK(alpha_equivalent(lf, want));
  REQUIRE(lf.classified());
  for (std::size_t i = 0; i < lf.size(); ++i) {
    CAPTURE(lf.atoms[i].str());
    const std::string& p = lf.atoms[i].predicate;
    AtomLevel want_level = p == "action"                     ? AtomLevel::kLevel1
                           : p == "object"                   ? AtomLevel::kSupport
                                                             : AtomLevel::kLevel2;
    CHECK(lf.levels[i] == want_level);
  }
}

TEST_CASE("nominal compound and unanalysed prepositions at level 3") {
  LogicalForm lf = best_lf("On Tuesday, John gave Mary a nice computer table against her will");
  LogicalForm want = parse_logical_form(
      "action(E, give, john, T, mary), object(table, T), object(computer, C), object(will, W), "
      "property(nice, T), time(tuesday, E), circumstance(by_with_for, T, C), "
      "circumstance(against, E, W), circumstance(of, W, her)");
  CHECK(alpha_equivalent(lf, want));
  CHECK(has_atom(lf, "circumstance(by_with_for, T, C)"));
}

TEST_CASE("single noun phrase leaves its referent free") {
  LogicalForm lf = best_lf("a dog");
  REQUIRE(lf.size() == 1);
  CHECK(lf.atoms[0].predicate == "object");
  CHECK(lf.atoms[0].args[0] == Term::constant("dog"));
  CHECK(lf.atoms[0].args[1].is_variable());
  CHECK_FALSE(lf.ground());
}

TEST_CASE("passage and query forms") {
  CHECK(alpha_equivalent(best_lf("Natural language question answering systems"),
                         parse_logical_form("property(natural, L), object(language, L), "
                                            "object(system, S), eventuality(answer, E, S, Q), "
                                            "object(question, Q), "
                                            "circumstance(by_with_for, S, L)")));
  CHECK(alpha_equivalent(best_lf("Natural language questions"),
                         parse_logical_form("property(natural, L), object(language, L), "
                                            "object(question, Q), "
                                            "circumstance(by_with_for, Q, L)")));
  CHECK(alpha_equivalent(best_lf("Peter beats John"),
                         parse_logical_form("eventuality(beat, E, peter, john)")));
}

TEST_CASE("classify_level") {
  const SchemeTable t = SchemeTable::standard();
  CHECK(classify_level(parse_atom("eventuality(answer,E,S,Q)"), t) == AtomLevel::kLevel1);
  CHECK(classify_level(parse_atom("action(E,give,john,A,mary)"), t) == AtomLevel::kLevel1);
  CHECK(classify_level(parse_atom("locative(E,roll,S,P,G,A)"), t) == AtomLevel::kLevel1);
  CHECK(classify_level(parse_atom("locative(give,E,john,T,mary)"), t) == AtomLevel::kLevel1);
  CHECK(classify_level(parse_atom("time(tuesday1,E)"), t) == AtomLevel::kLevel2);
  for (const char* p : {"purpose", "method", "tool", "beneficiary", "manner", "location"}) {
    CHECK(classify_level(Atom(p, {Term::variable("X"), Term::variable("E")}), t) ==
          AtomLevel::kLevel2);
  }
  CHECK(classify_level(parse_atom("circumstance(by_with_for,X,Y)"), t) == AtomLevel::kLevel3);
  CHECK(classify_level(parse_atom("object(dog,X)"), t) == AtomLevel::kSupport);
  CHECK(classify_level(parse_atom("relationship(in,X,Y)"), t) == AtomLevel::kSupport);
  CHECK_THROWS_WITH_AS(classify_level(parse_atom("representation(X,Y)"), t),
                       doctest::Contains("unknown predicate family"), SemanticsError);
  CHECK_THROWS_AS(classify_level(parse_atom("time(X,Y,Z)"), t), SemanticsError);
  SchemeTable dup = t;
  CHECK_THROWS_AS(dup.add(PredicateFamily{"object", 2, AtomLevel::kSupport, std::nullopt}),
                  SemanticsError);
}

TEST_CASE("modifier argument order is normalized to value first") {
  const SchemeTable t = SchemeTable::standard();
  LogicalForm lf = parse_logical_form("locative(give, e1, john, t, mary), time(e1, tuesday)");
  LogicalForm n = normalize_modifier_order(lf, t);
  CHECK(n.atoms[1] == parse_atom("time(tuesday, e1)"));
  CHECK(normalize_modifier_order(n, t) == n);
}

TEST_CASE("composition agrees with beta reduction") {
  std::vector<std::string> sentences = fixture_sentences();
  for (const char* extra : {"john sleeps", "the operator tested her program",
                            "a computer in the courtyard", "the system answers questions"}) {
    sentences.push_back(extra);
  }
  ScoreConfig cfg;
  cfg.n_best = 0;
  std::size_t checked = 0;
  std::set<std::string> rules_seen;
  for (const auto& s : sentences) {
    CAPTURE(s);
    auto chart = parse(tokenize(s), bundled(), cfg);
    auto full = full_analyses(chart);
    REQUIRE_FALSE(full.empty());
    for (const auto& a : full) {
      CAPTURE(chart->tree(a.root));
      LogicalForm composed = compose(a, bundled());
      LogicalForm oracle = BetaOracle(*chart, bundled()).lf(a.root);
      CHECK(alpha_equivalent(composed, oracle));
      for (EdgeId id = 0; id < chart->edges().size(); ++id) {
        if (!chart->edge(id).lexical()) rules_seen.insert(chart->edge(id).rule);
      }
      ++checked;
    }
  }
  CHECK(checked >= 10);
  for (const auto& r : bundled().grammar.rules) {
    CAPTURE(r.id);
    CHECK(rules_seen.count(r.id) == 1);
  }
}

TEST_CASE("every composed atom classifies") {
  ScoreConfig cfg;
  cfg.n_best = 0;
  const SchemeTable t = SchemeTable::standard();
  for (const auto& s : fixture_sentences()) {
    CAPTURE(s);
    auto chart = parse(tokenize(s), bundled(), cfg);
    auto cover = extract_fragments(chart, cfg);
    for (const auto& a : cover.analyses) {
      LogicalForm lf;
      REQUIRE_NOTHROW(lf = compose(a, bundled()));
      CHECK(lf.classified());
      for (const auto& atom : lf.atoms) CHECK_NOTHROW(classify_level(atom, t));
    }
  }
}

TEST_CASE("alpha-equivalent readings are merged") {
  auto rs = readings("a nice computer table");
  REQUIRE_FALSE(rs.empty());
  std::vector<Analysis> twice = {rs[0], rs[0]};
  CHECK(compose(twice, bundled()).size() == 1);
  ScoreConfig cfg;
  cfg.n_best = 0;
  auto chart = parse(tokenize("a new characterization of attachment preferences in english"),
                     bundled(), cfg);
  auto all = full_analyses(chart);
  auto lfs = compose(all, bundled());
  CHECK(lfs.size() <= all.size());
  for (std::size_t i = 0; i < lfs.size(); ++i) {
    for (std::size_t j = i + 1; j < lfs.size(); ++j) CHECK_FALSE(alpha_equivalent(lfs[i], lfs[j]));
  }
}

TEST_CASE("ill-typed grammar reports the rule") {
  ResourceTexts texts;
  texts.lexicon = "dog n\n";
  texts.grammar =
      "CATEGORY n np.\n"
      "LEX n: l(X, object(Lemma, X)).\n"
      "RULE bad_np: np/l(X, B) -> n/l(X, l(Y, B)).\n";
  ResourceSet rs = build_resources(texts);
  auto chart = parse({"dog"}, rs, ScoreConfig{});
  auto full = full_analyses(chart);
  REQUIRE(full.size() == 1);
  try {
    compose(full[0], rs);
    FAIL("expected CompositionError");
  } catch (const CompositionError& e) {
    CHECK(e.rule() == "bad_np");
    CHECK(std::string(e.what()).find("rule bad_np") == 0);
  }
}

TEST_CASE("flatten_build") {
  CHECK(flatten_build(parse_term("l(X, &(object(dog, X), &(true, object(dog, X))))")) ==
        parse_logical_form("object(dog, X)"));
  CHECK(flatten_build(parse_term("l(E, &(@(time, t, E), manner(quick, E)))")) ==
        parse_logical_form("time(t, E), manner(quick, E)"));
  CHECK(flatten_build(parse_term("l(john, true)")).empty());
  CHECK_THROWS_AS(flatten_build(parse_term("@(R, a, b)")), SemanticsError);
}

TEST_CASE("keyword fallback") {
  const Lexicon& lex = bundled().lexicon;
  LogicalForm one = keyword_fallback({"backtracking"}, lex);
  REQUIRE(one.size() == 1);
  CHECK(one.atoms[0].predicate == "object");
  CHECK(one.atoms[0].args[0] == Term::constant("backtrack"));
  CHECK(one.atoms[0].args[1].is_variable());
  LogicalForm unknown = keyword_fallback({"backtracking"}, Lexicon{});
  REQUIRE(unknown.size() == 1);
  CHECK(unknown.atoms[0].args[0] == Term::constant("backtracking"));
  CHECK(keyword_fallback({}, lex).empty());

  LogicalForm passage =
      keyword_fallback(tokenize("Natural language question answering systems"), lex);
  for (const char* w : {"language", "question", "system"}) {
    CAPTURE(w);
    CHECK(has_atom(passage, std::string("object(") + w + ", X)"));
  }
  LogicalForm sentence = keyword_fallback(
      tokenize("On Tuesday, John gave Mary a nice computer table against her will"), lex);
  CHECK_FALSE(has_atom(sentence, "object(on, X)"));
  CHECK_FALSE(has_atom(sentence, "object(her, X)"));
  CHECK_FALSE(has_atom(sentence, "object(a, X)"));
  CHECK(has_atom(sentence, "object(give, X)"));
  std::set<std::string> vars;
  for (const auto& a : sentence.atoms) vars.insert(a.args[1].name());
  CHECK(vars.size() == sentence.size());
}

TEST_CASE("fallback yields only support atoms") {
  const SchemeTable t = SchemeTable::standard();
  for (const auto& s : fixture_sentences()) {
    LogicalForm lf = keyword_fallback(tokenize(s), bundled().lexicon);
    REQUIRE(lf.classified());
    for (std::size_t i = 0; i < lf.size(); ++i) {
      CHECK(lf.atoms[i].key() == "object/2");
      CHECK(classify_level(lf.atoms[i], t) == AtomLevel::kSupport);
      CHECK(lf.levels[i] == AtomLevel::kSupport);
    }
  }
}

TEST_CASE("debug print tags levels") {
  LogicalForm lf = classify(parse_logical_form("time(t, E), object(dog, X)"),
                            SchemeTable::standard());
  CHECK(lf_debug_string(lf) == "time(t,E).  % level 2\nobject(dog,X).  % support\n");
  CHECK(lf_debug_string(parse_logical_form("foo(a)")) == "foo(a).\n");
}
