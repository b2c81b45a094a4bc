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

#include <filesystem>
#include <sstream>

#include "logdoc/kb.hpp"

using namespace logdoc;

namespace {

const char* kSkolemAxioms =
    "representation(sk-1,sk-2), language(sk-2), share(sk-1,sk-3), base(sk-5,sk-8), "
    "structure(sk-3,sk-4), goal(sk-5,sk-1), formalism(sk-5,sk-6), grammar(sk-6,sk-7), "
    "unification(sk-8)";

const char* kTitleAtoms =
    "property(natural,sk-28), object(system,sk-30), object(language,sk-28), "
    "circumstance(by_with_for,sk-30,sk-28), object(question,sk-29), "
    "eventuality(answer,sk-31,sk-30,sk-29)";

KnowledgeBase roundtrip(const KnowledgeBase& kb) {
  std::stringstream ss;
  kb.write(ss);
  return KnowledgeBase::read(ss);
}

}  // namespace

TEST_CASE("assert_fragment tags every atom with its back-pointer") {
  KnowledgeBase kb;
  auto ids = kb.assert_fragment(3, 1, {parse_logical_form(kSkolemAxioms)}, "skolemized axioms");
  CHECK(ids.size() == 9);
  CHECK(kb.fact(ids[0]).str() == "representation(sk-1,sk-2)/1/3");
  CHECK(kb.fact(ids[1]).str() == "language(sk-2)/1/3");
  CHECK(kb.groups().empty());
  CHECK(*kb.source_text({1, 3}) == "skolemized axioms");
  CHECK_THROWS_WITH_AS(kb.assert_fragment(3, 1, {parse_logical_form("p(a)")}, ""),
                       "fragment already indexed", KbError);
  CHECK_THROWS_AS(kb.assert_fragment(4, 1, {}, ""), KbError);
  CHECK_THROWS_AS(kb.assert_fragment(4, 1, {parse_logical_form("p(X)")}, ""), KbError);
  CHECK(kb.facts().size() == 9);
}

TEST_CASE("lookup is exact and in insertion order") {
  KnowledgeBase kb;
  kb.assert_fragment(11, 1, {parse_logical_form(kTitleAtoms)}, "Natural language question answering systems");
  auto objects = kb.lookup("object", 2);
  REQUIRE(objects.size() == 3);
  CHECK(std::get<const StoredFact*>(objects[0])->atom.str() == "object(system,sk-30)");
  CHECK(std::get<const StoredFact*>(objects[2])->atom.str() == "object(question,sk-29)");
  CHECK(kb.lookup("unknown", 9).empty());
  CHECK(kb.lookup("object", 3).empty());

  kb.add_rule({"bwf", parse_clause("circumstance(by_with_for,O1,O2) <- "
                                   "eventuality(A,E,Ag,O1), circumstance(by_with_for,Ag,O2)")});
  auto circ = kb.lookup("circumstance", 3);
  REQUIRE(circ.size() == 2);
  CHECK(std::holds_alternative<const StoredFact*>(circ[0]));
  CHECK(std::holds_alternative<const Rule*>(circ[1]));
}

TEST_CASE("lookup counts one fact per asserted fragment") {
  KnowledgeBase kb;
  for (int i = 1; i <= 25; ++i) kb.assert_fragment(1 + i % 4, i, {parse_logical_form("p(a)")}, "");
  CHECK(kb.lookup("p", 1).size() == 25);
  CHECK(kb.facts_for("p/1", {5, 2}).size() == 1);
}

TEST_CASE("ambiguous fragments become one reading group") {
  KnowledgeBase kb;
  kb.assert_fragment(2, 1, {parse_logical_form("p(sk-1)"), parse_logical_form("q(sk-2), r(sk-2)")},
                     "ambiguous");
  REQUIRE(kb.groups().size() == 1);
  const auto& g = kb.groups()[0];
  CHECK(g.alternatives.size() == 2);
  CHECK(g.alternatives[1].size() == 2);
  CHECK(kb.fact(g.alternatives[1][0]).group->alternative == 1);
  CHECK(g.prov == Provenance{1, 2});
}

TEST_CASE("save and load are observationally equal") {
  KnowledgeBase empty;
  CHECK(roundtrip(empty) == empty);

  KnowledgeBase kb;
  SkolemIssuer& issuer = kb.skolems();
  auto lf = skolemize(parse_logical_form("representation(R,L), language(L)"), issuer);
  kb.assert_fragment(3, 1, {lf}, "A structure sharing\nrepresentation");
  kb.assert_fragment(2, 1, {parse_logical_form("p(sk-9)"), parse_logical_form("q(sk-10)")}, "two");
  kb.assert_fragment(2, 2, {parse_logical_form("'odd name'(x)")}, "quoted");
  Rule r{"bridge", parse_clause("eventuality(T,E,A,O) <- action(E,T,A,O,G)")};
  r.clause.level = 1;
  r.clause.weight = 0.5;
  kb.add_rule(r);

  auto copy = roundtrip(kb);
  CHECK(copy == kb);
  CHECK(copy.skolems().issue() == kb.skolems().issue());

  std::stringstream ss;
  kb.write(ss);
  CHECK(ss.str().find("FACT language(sk-2)/1/3") != std::string::npos);

  auto path = std::filesystem::temp_directory_path() / "logdoc_kb_store_test.kb";
  kb.save(path.string());
  CHECK(KnowledgeBase::load(path.string()) == kb);
  std::filesystem::remove(path);
}

TEST_CASE("malformed files report the line") {
  auto expect_line = [](const std::string& text, std::size_t line) {
    std::stringstream ss(text);
    try {
      KnowledgeBase::read(ss);
      FAIL("expected a format error");
    } catch (const KbFormatError& e) {
      CHECK(e.line() == line);
      CHECK(std::string(e.what()).rfind("line " + std::to_string(line) + ":", 0) == 0);
    }
  };
  expect_line("SKOLEM 3\nFACT p(a)/1/1\n", 2);  // provenance not registered
  expect_line("TEXT 1 1 x\nFACT p(a)\n", 2);
  expect_line("TEXT 1 1 x\nFACT p(X)/1/1\n", 2);
  expect_line("% c\nBOGUS\n", 2);
  expect_line("TEXT 1 1 x\nGROUP g1 BEGIN\nALT\nFACT p(a)/1/1\nEND\n", 2);
  expect_line("RULE r1 2 1 p(X <-\n", 1);
}
