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

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "logdoc/retrieval.hpp"
#include "logdoc/semantics.hpp"

using namespace logdoc;

namespace {

const char* kTitleAtoms =
    "property(natural,sk-28), object(system,sk-30), object(language,sk-28), "
    "circumstance(by_with_for,sk-30,sk-28), object(question,sk-29), "
    "eventuality(answer,sk-31,sk-30,sk-29)";

const char* kSkolemAxioms =
    "representation(R,L), language(L), share(R,S), base(G,U), structure(S,Y), goal(G,R), "
    "formalism(G,F), grammar(F,Z), unification(U)";

const char* kConjunctiveQuery = "representation(R,L), language(L), share(R,S), structure(S,Y)";

const ResourceSet& bundled() {
  static const ResourceSet rs = load_resources(bundled_resource_paths());
  return rs;
}

// Skolem constants become variables so stored atoms compare up to
// Skolem numbering.
LogicalForm unground(const std::vector<Atom>& atoms) {
  LogicalForm lf;
  for (const auto& a : atoms) {
    std::vector<Term> args;
    for (const auto& t : a.args) {
      args.push_back(t.is_skolem() ? Term::variable("K" + std::to_string(t.skolem_index())) : t);
    }
    lf.atoms.emplace_back(a.predicate, std::move(args));
  }
  return lf;
}

std::vector<Atom> atoms_of(const KnowledgeBase& kb, int document) {
  std::vector<Atom> out;
  for (const auto& f : kb.facts()) {
    if (f.prov.document == document) out.push_back(f.atom);
  }
  return out;
}

std::vector<std::pair<int, int>> hits(const QueryResult& r) {
  std::vector<std::pair<int, int>> out;
  for (const auto& p : r.passages) out.emplace_back(p.document, p.fragment);
  return out;
}

QueryForms forms(const char* text) { return QueryForms{{parse_logical_form(text)}, false}; }

Rule leveled(const std::string& id, const char* text, int level) {
  HornClause c = parse_clause(text);
  c.level = level;
  return Rule{id, c};
}

// Every rule a trace uses is admitted at the stage it is labelled with.
bool stage_minimal(const Passage& p, const KnowledgeBase& kb, const std::vector<Rule>& extra) {
  StagePolicy policy = StagePolicy::direct();
  switch (p.stage) {
    case Stage::kDirect:
    case Stage::kKeyword: policy = StagePolicy::direct(); break;
    case Stage::kLevel2: policy = StagePolicy::level2(); break;
    case Stage::kLevel3: policy = StagePolicy::level3(); break;
    case Stage::kIsa: policy = StagePolicy::isa(); break;
  }
  for (const auto& step : p.trace.steps) {
    if (step.kind == ProofStep::Kind::kIsa && !policy.use_isa) return false;
    if (step.kind != ProofStep::Kind::kRule) continue;
    const Rule* r = kb.find_rule(step.rule);
    for (const auto& e : extra) {
      if (!r && e.id == step.rule) r = &e;
    }
    if (!r || !policy.admits(r->clause)) return false;
  }
  return true;
}

const char* kTimeQuery =
    "time(T, E), eventuality(answer, E, A, Q), circumstance(by_with_for, Q, L)";
const char* kTimeDirect =
    "time(tuesday, E), eventuality(answer, E, A, Q), circumstance(by_with_for, Q, L)";
const char* kTimeLevel2 =
    "circumstance(on, E, tuesday), eventuality(answer, E, A, Q), circumstance(by_with_for, Q, L)";
const char* kTimeLevel3 =
    "circumstance(on, E, tuesday), eventuality(answer, E, A, Q), circumstance(by_with_for, A, L)";

const char* kToolQuery = "object(computer, C), tool(C, E), eventuality(answer, E, A, Q)";
const char* kToolDirect = "object(computer, C), tool(C, E), eventuality(answer, E, A, Q)";
const char* kToolLevel2 =
    "object(computer, C), circumstance(with, E, C), eventuality(answer, E, A, Q)";
const char* kToolIsa = "object(laptop, C), tool(C, E), eventuality(answer, E, A, Q)";

}  // namespace

TEST_CASE("fragments split at sentence ends followed by a capital") {
  CHECK(split_fragments("") == std::vector<std::string>{});
  CHECK(split_fragments("One sentence. Another one! A third? yes") ==
        std::vector<std::string>{"One sentence.", "Another one!", "A third? yes"});
  CHECK(split_fragments("Version 2.5 is out. 3 bugs remain.") ==
        std::vector<std::string>{"Version 2.5 is out.", "3 bugs remain."});
  CHECK(split_fragments("A Title Line\n\n  The body starts here.  \n") ==
        std::vector<std::string>{"A Title Line", "The body starts here."});
  CHECK(split_fragments("e.g. this stays whole") ==
        std::vector<std::string>{"e.g. this stays whole"});
}

TEST_CASE("indexing the title yields its six atoms") {
  KnowledgeBase kb;
  auto rep = index_document(kb, 11, "Natural language question answering systems", bundled(), {});
  CHECK(rep.document == 11);
  CHECK(rep.fragments == 1);
  CHECK(rep.readings == 1);
  CHECK(rep.fallback_tokens == 0);
  CHECK(rep.facts == 6);
  CHECK(alpha_equivalent(unground(atoms_of(kb, 11)),
                         unground(parse_logical_form(kTitleAtoms).atoms)));
  for (const auto& f : kb.facts()) CHECK(f.prov == Provenance{1, 11});
  REQUIRE(kb.source_text({1, 11}));
  CHECK(*kb.source_text({1, 11}) == "Natural language question answering systems");
}

TEST_CASE("sentences of a document are numbered fragments") {
  KnowledgeBase kb;
  auto rep = index_document(kb, 4, "Peter beats John. John sleeps.", bundled(), {});
  CHECK(rep.fragments == 2);
  CHECK(kb.has_fragment({1, 4}));
  CHECK(kb.has_fragment({2, 4}));
  CHECK(*kb.source_text({2, 4}) == "John sleeps.");
  CHECK(rep.fallback_tokens == 0);
}

TEST_CASE("empty document gives an empty report") {
  KnowledgeBase kb;
  auto rep = index_document(kb, 1, "", bundled(), {});
  CHECK(rep.fragments == 0);
  CHECK(rep.facts == 0);
  CHECK(kb.facts().empty());
  auto rep2 = index_document(kb, 2, " \n . \n", bundled(), {});
  CHECK(rep2.fragments == 0);
}

TEST_CASE("unknown words fall back to object atoms") {
  KnowledgeBase kb;
  auto rep = index_document(kb, 7, "The zorblat quinxes a frobnitz", bundled(), {});
  CHECK(rep.fragments == 1);
  CHECK(rep.fallback_tokens == 3);
  CHECK(rep.facts == 3);
  std::set<std::string> lemmas;
  for (const auto& f : kb.facts()) {
    CHECK(f.atom.predicate == "object");
    CHECK(f.atom.arity() == 2);
    CHECK(f.atom.args[1].is_skolem());
    lemmas.insert(f.atom.args[0].name());
  }
  CHECK(lemmas == std::set<std::string>{"zorblat", "quinxes", "frobnitz"});
}

TEST_CASE("partial parses keep the analysed pieces") {
  KnowledgeBase kb;
  auto rep = index_document(kb, 8, "zorblat the operator tested her program", bundled(), {});
  CHECK(rep.fallback_tokens == 1);
  bool has_event = false;
  for (const auto& f : kb.facts()) {
    has_event = has_event || f.atom.predicate == "eventuality" || f.atom.predicate == "action";
  }
  CHECK(has_event);
}

TEST_CASE("duplicate document ids are rejected") {
  KnowledgeBase kb;
  index_document(kb, 3, "Peter beats John.", bundled(), {});
  CHECK_THROWS_AS(index_document(kb, 3, "John sleeps.", bundled(), {}), RetrievalError);
  CHECK_THROWS_AS(index_document(kb, 0, "John sleeps.", bundled(), {}), RetrievalError);
}

TEST_CASE("title query escalates to level 3 and retrieves the title") {
  KnowledgeBase kb;
  index_document(kb, 11, "Natural language question answering systems", bundled(), {});
  auto r = answer_query(kb, "Natural language questions", bundled(), {}, {});
  REQUIRE(r.passages.size() == 1);
  const Passage& p = r.passages[0];
  CHECK(p.document == 11);
  CHECK(p.fragment == 1);
  CHECK(p.stage == Stage::kLevel3);
  CHECK(p.trace.rules_used() == std::vector<std::string>{"bwf_agent"});
  CHECK(r.stages_run ==
        std::vector<Stage>{Stage::kDirect, Stage::kLevel2, Stage::kLevel3, Stage::kIsa});
  CHECK(render_passage(p) == "11:1 [level3] Natural language question answering systems");
  CHECK(stage_minimal(p, kb, bundled().postulate_rules()));
}

TEST_CASE("more than M direct hits stop at the direct stage") {
  KnowledgeBase kb;
  kb.add_rule(leveled("tongue_language", "language(X) <- tongue(X)", 2));
  index_logical_fragment(kb, 3, 1, parse_logical_form(kSkolemAxioms), "skolemized axioms");
  for (int d = 100; d < 116; ++d) {
    index_logical_fragment(kb, d, 1, parse_logical_form(kConjunctiveQuery), "match");
  }
  index_logical_fragment(kb, 200, 1,
                         parse_logical_form("representation(R,L), tongue(L), share(R,S), "
                                            "structure(S,Y)"),
                         "needs a postulate");
  auto r = answer_forms(kb, forms(kConjunctiveQuery), bundled().postulate_rules(), &bundled().isa, {});
  CHECK(r.stages_run == std::vector<Stage>{Stage::kDirect});
  CHECK(r.passages.size() == 17);
  for (const auto& p : r.passages) {
    CHECK(p.stage == Stage::kDirect);
    CHECK(p.trace.rule_applications() == 0);
    CHECK(p.document != 200);
  }
  CHECK(r.passages.front().document == 3);
}

TEST_CASE("direct hits between N and M are returned unescalated") {
  KnowledgeBase kb;
  kb.add_rule(leveled("tongue_language", "language(X) <- tongue(X)", 2));
  for (int d = 1; d <= 15; ++d) {
    index_logical_fragment(kb, d, 1, parse_logical_form(kConjunctiveQuery), "match");
  }
  index_logical_fragment(kb, 30, 1,
                         parse_logical_form("representation(R,L), tongue(L), share(R,S), "
                                            "structure(S,Y)"),
                         "needs a postulate");
  auto r = answer_forms(kb, forms(kConjunctiveQuery), {}, nullptr, {});
  CHECK(r.stages_run == std::vector<Stage>{Stage::kDirect});
  CHECK(r.passages.size() == 15);

  VDConfig band;
  band.escalate_in_band = true;
  auto e = answer_forms(kb, forms(kConjunctiveQuery), {}, nullptr, band);
  CHECK(e.stages_run == std::vector<Stage>{Stage::kDirect, Stage::kLevel2, Stage::kLevel3});
  REQUIRE(e.passages.size() == 16);
  CHECK(e.passages.back().document == 30);
  CHECK(e.passages.back().stage == Stage::kLevel2);
}

TEST_CASE("nine direct hits escalate through level 2 and level 3") {
  KnowledgeBase kb;
  for (int d = 1; d <= 9; ++d) {
    index_logical_fragment(kb, d, 1, parse_logical_form(kTimeDirect), "direct");
  }
  index_logical_fragment(kb, 20, 1, parse_logical_form(kTimeLevel3), "both levels");
  index_logical_fragment(kb, 21, 1, parse_logical_form(kTimeLevel3), "both levels");
  auto rules = bundled().postulate_rules();
  auto r = answer_forms(kb, forms(kTimeQuery), rules, &bundled().isa, {});
  CHECK(r.stages_run == std::vector<Stage>{Stage::kDirect, Stage::kLevel2, Stage::kLevel3});
  REQUIRE(r.passages.size() == 11);
  for (int i = 0; i < 9; ++i) CHECK(r.passages[i].stage == Stage::kDirect);
  for (int i = 9; i < 11; ++i) {
    const Passage& p = r.passages[i];
    CHECK(p.stage == Stage::kLevel3);
    auto used = p.trace.rules_used();
    CHECK(std::find(used.begin(), used.end(), "time_on") != used.end());
    CHECK(std::find(used.begin(), used.end(), "bwf_agent") != used.end());
  }
  for (const auto& p : r.passages) CHECK(stage_minimal(p, kb, rules));
}

TEST_CASE("level-2 hits that reach N skip level 3") {
  KnowledgeBase kb;
  for (int d = 1; d <= 9; ++d) {
    index_logical_fragment(kb, d, 1, parse_logical_form(kTimeDirect), "direct");
  }
  index_logical_fragment(kb, 20, 1, parse_logical_form(kTimeLevel2), "level 2");
  index_logical_fragment(kb, 21, 1, parse_logical_form(kTimeLevel3), "level 3");
  auto r = answer_forms(kb, forms(kTimeQuery), bundled().postulate_rules(), &bundled().isa, {});
  CHECK(r.stages_run == std::vector<Stage>{Stage::kDirect, Stage::kLevel2});
  REQUIRE(r.passages.size() == 10);
  CHECK(r.passages.back().document == 20);
  CHECK(r.passages.back().stage == Stage::kLevel2);
}

TEST_CASE("fewer than O hits after level 3 enable isa expansion") {
  KnowledgeBase kb;
  index_logical_fragment(kb, 1, 1, parse_logical_form(kToolDirect), "direct");
  index_logical_fragment(kb, 2, 1, parse_logical_form(kToolDirect), "direct");
  index_logical_fragment(kb, 3, 1, parse_logical_form(kToolLevel2), "level 2");
  index_logical_fragment(kb, 4, 1, parse_logical_form(kToolLevel2), "level 2");
  index_logical_fragment(kb, 5, 1, parse_logical_form(kToolIsa), "laptop");
  auto rules = bundled().postulate_rules();
  auto r = answer_forms(kb, forms(kToolQuery), rules, &bundled().isa, {});
  CHECK(r.stages_run ==
        std::vector<Stage>{Stage::kDirect, Stage::kLevel2, Stage::kLevel3, Stage::kIsa});
  REQUIRE(r.passages.size() == 5);
  const Passage& p = r.passages.back();
  CHECK(p.document == 5);
  CHECK(p.stage == Stage::kIsa);
  bool isa_step = false;
  for (const auto& s : p.trace.steps) isa_step = isa_step || s.kind == ProofStep::Kind::kIsa;
  CHECK(isa_step);
  for (const auto& q : r.passages) CHECK(stage_minimal(q, kb, rules));

  // With O hits after level 3 the hierarchy is not consulted.
  index_logical_fragment(kb, 6, 1, parse_logical_form(kToolLevel2), "level 2");
  auto o = answer_forms(kb, forms(kToolQuery), rules, &bundled().isa, {});
  CHECK(o.stages_run == std::vector<Stage>{Stage::kDirect, Stage::kLevel2, Stage::kLevel3});
  CHECK(o.passages.size() == 5);
}

TEST_CASE("empty knowledge base attempts every stage") {
  KnowledgeBase kb;
  auto r = answer_query(kb, "Natural language questions", bundled(), {}, {});
  CHECK(r.passages.empty());
  CHECK(r.stages_run ==
        std::vector<Stage>{Stage::kDirect, Stage::kLevel2, Stage::kLevel3, Stage::kIsa});
}

TEST_CASE("queries without content words are rejected") {
  KnowledgeBase kb;
  CHECK_THROWS_WITH_AS(answer_query(kb, "the of a", bundled(), {}, {}), "empty query",
                       RetrievalError);
  CHECK_THROWS_WITH_AS(answer_query(kb, "  ?", bundled(), {}, {}), "empty query",
                       RetrievalError);
}

TEST_CASE("ambiguous query readings are unioned") {
  KnowledgeBase kb;
  index_logical_fragment(kb, 1, 1, parse_logical_form("p(a)"), "p");
  index_logical_fragment(kb, 2, 1, parse_logical_form("q(a)"), "q");
  index_logical_fragment(kb, 3, 1, parse_logical_form("p(a), q(a)"), "both");
  QueryForms q{{parse_logical_form("p(X)"), parse_logical_form("q(X)")}, false};
  auto r = answer_forms(kb, q, {}, nullptr, {});
  CHECK(hits(r) == std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 1}});
  CHECK(r.passages[0].query_reading == 0);
  CHECK(r.passages[1].query_reading == 1);
  CHECK(r.passages[2].query_reading == 0);
}

TEST_CASE("an empty grammar degenerates to conjunctive keyword matching") {
  ResourceSet kw = bundled();
  kw.grammar = Grammar{};
  // Words without isa descendants, so the hierarchy adds nothing.
  const std::vector<std::string> vocab = {"system",  "question", "program", "operator",
                                          "machine", "table",    "sentence", "problem"};
  std::mt19937 rng(20261014);
  for (int round = 0; round < 20; ++round) {
    KnowledgeBase kb;
    std::map<std::pair<int, int>, std::set<std::string>> words;
    for (int d = 1; d <= 4; ++d) {
      std::string text;
      for (int f = 1; f <= 3; ++f) {
        std::string sentence = "The";
        std::size_t len = 1 + rng() % 4;
        for (std::size_t i = 0; i < len; ++i) {
          const std::string& w = vocab[rng() % vocab.size()];
          sentence += " " + w;
          words[{d, f}].insert(w);
        }
        text += sentence + ". ";
      }
      auto rep = index_document(kb, d, text, kw, {});
      CHECK(rep.fragments == 3);
      CHECK(rep.fallback_tokens == rep.facts);
    }
    std::set<std::string> query;
    std::string qtext = "the";
    std::size_t qlen = 1 + rng() % 2;
    for (std::size_t i = 0; i < qlen; ++i) {
      const std::string& w = vocab[rng() % vocab.size()];
      qtext += " " + w;
      query.insert(w);
    }
    std::vector<std::pair<int, int>> expected;
    for (const auto& [key, ws] : words) {
      if (std::includes(ws.begin(), ws.end(), query.begin(), query.end())) {
        expected.push_back(key);
      }
    }
    auto r = answer_query(kb, qtext, kw, {}, {});
    CHECK(r.keyword);
    CHECK(hits(r) == expected);
    for (const auto& p : r.passages) CHECK(p.stage == Stage::kKeyword);
  }
}

TEST_CASE("identical inputs give identical passage lists") {
  auto run = [] {
    KnowledgeBase kb;
    index_document(kb, 11, "Natural language question answering systems", bundled(), {});
    index_document(kb, 12, "The operator tested the programs on the system. John sleeps.",
                   bundled(), {});
    auto r = answer_query(kb, "Natural language questions", bundled(), {}, {});
    std::string out;
    for (const auto& p : r.passages) {
      out += render_passage(p) + "\n" + render_trace(p.trace, kb, bundled().postulate_rules());
    }
    return out;
  };
  std::string first = run();
  CHECK_FALSE(first.empty());
  CHECK(run() == first);
}

TEST_CASE("threshold configuration is validated") {
  VDConfig vd;
  CHECK(vd.m == 15);
  CHECK(vd.n == 10);
  CHECK(vd.o == 5);
  CHECK(vd.m * 1 == vd.o * 3);
  CHECK(vd.n * 1 == vd.o * 2);
  CHECK_NOTHROW(vd.validate());
  VDConfig bad = vd;
  bad.n = 15;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = vd;
  bad.o = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = vd;
  bad.o = 10;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = vd;
  bad.max_depth = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK(parse_stage("level2") == Stage::kLevel2);
  CHECK_FALSE(parse_stage("level4").has_value());
}
