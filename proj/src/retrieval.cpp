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

#include "logdoc/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>
#include <utility>

#include "logdoc/semantics.hpp"

namespace logdoc {

void VDConfig::validate() const {
  if (o == 0) throw std::invalid_argument("o must be positive");
  if (n <= o) throw std::invalid_argument("n must be greater than o");
  if (m <= n) throw std::invalid_argument("m must be greater than n");
  if (max_inferences == 0) throw std::invalid_argument("max_inferences must be positive");
  if (max_depth <= 0) throw std::invalid_argument("max_depth must be positive");
  if (rule_weight_cap && *rule_weight_cap < 0) {
    throw std::invalid_argument("rule_weight_cap must be non-negative");
  }
}

StagePolicy VDConfig::policy(StagePolicy base) const {
  base.max_inferences = max_inferences;
  base.max_depth = max_depth;
  base.rule_weight_cap = rule_weight_cap;
  return base;
}

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::kDirect: return "direct";
    case Stage::kLevel2: return "level2";
    case Stage::kLevel3: return "level3";
    case Stage::kIsa: return "isa";
    case Stage::kKeyword: return "keyword";
  }
  return "direct";
}

std::optional<Stage> parse_stage(std::string_view name) {
  for (Stage s : {Stage::kDirect, Stage::kLevel2, Stage::kLevel3, Stage::kIsa, Stage::kKeyword}) {
    if (stage_name(s) == name) return s;
  }
  return std::nullopt;
}

namespace {

// Keyword hits are direct hits of a keyword query.
int stage_rank(Stage s) { return s == Stage::kKeyword ? 0 : static_cast<int>(s); }

bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Tokens of a fragment without sentence-final punctuation.
std::vector<std::string> fragment_tokens(std::string_view text) {
  auto tokens = tokenize(text);
  while (!tokens.empty() && tokens.back().size() == 1 && is_terminator(tokens.back()[0])) {
    tokens.pop_back();
  }
  return tokens;
}

struct Analysed {
  std::vector<LogicalForm> readings;
  std::size_t fallback_tokens = 0;
  bool keyword = false;
};

// Full parse: one form per surviving reading. Otherwise one form joining
// the greedy cover pieces and keyword atoms for uncovered tokens.
Analysed analyse_tokens(const std::vector<std::string>& tokens, const ResourceSet& res,
                        const ScoreConfig& cfg) {
  Analysed out;
  if (tokens.empty()) return out;
  auto chart = parse(tokens, res, cfg);
  FragmentCover cover = extract_fragments(chart, cfg);
  if (cover.full && !cover.analyses.empty()) {
    out.readings = compose(cover.analyses, res);
    return out;
  }
  LogicalForm joined;
  for (const auto& piece : cover.analyses) joined.append(compose(piece, res));
  std::vector<std::string> rest;
  for (std::size_t pos : cover.uncovered) rest.push_back(tokens.at(pos));
  LogicalForm fallback = keyword_fallback(rest, res.lexicon);
  out.fallback_tokens = fallback.size();
  out.keyword = cover.analyses.empty();
  joined.append(fallback);
  out.readings.push_back(std::move(joined));
  return out;
}

}  // namespace

std::vector<std::string> split_fragments(std::string_view text) {
  std::vector<std::string> out;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    std::size_t begin = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (!is_terminator(line[i])) continue;
      std::size_t j = i + 1;
      if (j >= line.size() || !std::isspace(static_cast<unsigned char>(line[j]))) continue;
      while (j < line.size() && std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j < line.size() && (std::isupper(static_cast<unsigned char>(line[j])) ||
                              std::isdigit(static_cast<unsigned char>(line[j])))) {
        std::string s = trim(line.substr(begin, i + 1 - begin));
        if (!s.empty()) out.push_back(std::move(s));
        begin = j;
      }
    }
    std::string s = trim(line.substr(begin));
    if (!s.empty()) out.push_back(std::move(s));
    line_start = line_end + 1;
  }
  return out;
}

IndexReport index_document(KnowledgeBase& kb, int document, std::string_view text,
                           const ResourceSet& res, const ScoreConfig& cfg) {
  if (document <= 0) throw RetrievalError("document id must be positive");
  if (kb.has_document(document)) {
    throw RetrievalError("document " + std::to_string(document) + " is already indexed");
  }
  IndexReport report;
  report.document = document;
  int fragment = 0;
  for (const auto& sentence : split_fragments(text)) {
    auto tokens = fragment_tokens(sentence);
    if (tokens.empty()) continue;
    Analysed a;
    try {
      a = analyse_tokens(tokens, res, cfg);
    } catch (const SemanticsError& e) {
      throw RetrievalError("document " + std::to_string(document) + " fragment " +
                           std::to_string(fragment + 1) + ": " + e.what());
    }
    std::vector<LogicalForm> ground;
    for (const auto& lf : a.readings) ground.push_back(skolemize(lf, kb.skolems()));
    ++fragment;
    auto ids = kb.assert_fragment(document, fragment, ground, sentence);
    ++report.fragments;
    report.readings += ground.size();
    report.fallback_tokens += a.fallback_tokens;
    report.facts += ids.size();
  }
  return report;
}

IndexReport index_logical_fragment(KnowledgeBase& kb, int document, int fragment,
                                   const LogicalForm& lf, std::string text) {
  LogicalForm ground = skolemize(lf, kb.skolems());
  auto ids = kb.assert_fragment(document, fragment, {ground}, std::move(text));
  IndexReport report;
  report.document = document;
  report.fragments = 1;
  report.readings = 1;
  report.facts = ids.size();
  return report;
}

QueryForms analyze_query(std::string_view text, const ResourceSet& res, const ScoreConfig& cfg) {
  Analysed a = analyse_tokens(fragment_tokens(text), res, cfg);
  QueryForms q;
  q.keyword = a.keyword;
  for (auto& lf : a.readings) {
    if (!lf.empty()) q.forms.push_back(std::move(lf));
  }
  if (q.forms.empty()) throw RetrievalError("empty query");
  return q;
}

QueryResult answer_query(const KnowledgeBase& kb, std::string_view query, const ResourceSet& res,
                         const VDConfig& vd, const ScoreConfig& cfg) {
  return answer_forms(kb, analyze_query(query, res, cfg), res.postulate_rules(), &res.isa, vd);
}

QueryResult answer_forms(const KnowledgeBase& kb, const QueryForms& query,
                         const std::vector<Rule>& rules, const IsaHierarchy* isa,
                         const VDConfig& vd) {
  vd.validate();
  if (query.forms.empty()) throw RetrievalError("empty query");
  std::vector<Rule> extras;
  for (const auto& r : rules) {
    if (!kb.find_rule(r.id)) extras.push_back(r);
  }

  QueryResult result;
  result.forms = query.forms;
  result.keyword = query.keyword;
  std::map<Provenance, Passage> found;
  auto run = [&](const StagePolicy& base, Stage stage) {
    result.stages_run.push_back(stage);
    StagePolicy policy = vd.policy(base);
    Stage label = stage == Stage::kDirect && query.keyword ? Stage::kKeyword : stage;
    for (std::size_t i = 0; i < query.forms.size(); ++i) {
      ProofResult pr = prove(Goal::from(query.forms[i]), kb, policy, extras, isa);
      result.truncated = result.truncated || pr.truncated;
      for (auto& sol : pr.solutions) {
        const Provenance prov = *sol.trace.prov;
        if (found.count(prov)) continue;
        Passage p;
        p.document = prov.document;
        p.fragment = prov.fragment;
        if (const std::string* t = kb.source_text(prov)) p.text = *t;
        p.stage = label;
        p.trace = std::move(sol.trace);
        p.query_reading = i;
        found.emplace(prov, std::move(p));
      }
    }
  };

  run(StagePolicy::direct(), Stage::kDirect);
  const std::size_t direct = found.size();
  if (direct <= vd.m) {
    const bool band = vd.escalate_in_band;
    if (direct < vd.n || band) {
      run(StagePolicy::level2(), Stage::kLevel2);
      if (found.size() < vd.n || band) run(StagePolicy::level3(), Stage::kLevel3);
    }
    if (found.size() < vd.o) run(StagePolicy::isa(), Stage::kIsa);
  }

  for (auto& [prov, p] : found) result.passages.push_back(std::move(p));
  std::stable_sort(result.passages.begin(), result.passages.end(),
                   [](const Passage& a, const Passage& b) {
                     if (stage_rank(a.stage) != stage_rank(b.stage)) {
                       return stage_rank(a.stage) < stage_rank(b.stage);
                     }
                     return std::pair(a.document, a.fragment) < std::pair(b.document, b.fragment);
                   });
  return result;
}

std::string render_passage(const Passage& p) {
  std::string text = p.text;
  std::replace(text.begin(), text.end(), '\n', ' ');
  return std::to_string(p.document) + ":" + std::to_string(p.fragment) + " [" +
         stage_name(p.stage) + "] " + text;
}

}  // namespace logdoc
