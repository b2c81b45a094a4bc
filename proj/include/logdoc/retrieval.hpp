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

#ifndef LOGDOC_RETRIEVAL_HPP_
#define LOGDOC_RETRIEVAL_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "logdoc/chart.hpp"
#include "logdoc/kb.hpp"
#include "logdoc/logical_form.hpp"
#include "logdoc/prover.hpp"
#include "logdoc/resources.hpp"

namespace logdoc {

class RetrievalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Result-count thresholds of the staged strategy, M > N > O.
struct VDConfig {
  std::size_t m = 15;
  std::size_t n = 10;
  std::size_t o = 5;
  // Escalate when N <= direct hits <= M.
  bool escalate_in_band = false;
  std::size_t max_inferences = 10000;
  int max_depth = 8;
  std::optional<double> rule_weight_cap;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
  StagePolicy policy(StagePolicy base) const;
};

enum class Stage { kDirect, kLevel2, kLevel3, kIsa, kKeyword };

std::string stage_name(Stage s);
std::optional<Stage> parse_stage(std::string_view name);

struct Passage {
  int document = 0;
  int fragment = 0;
  std::string text;
  Stage stage = Stage::kDirect;
  ProofTrace trace;
  std::size_t query_reading = 0;  // index into QueryResult::forms
};

struct IndexReport {
  int document = 0;
  std::size_t fragments = 0;
  std::size_t readings = 0;
  std::size_t fallback_tokens = 0;
  std::size_t facts = 0;
};

// Sentences end at '.', '?' or '!' followed by whitespace and a capital
// letter or digit; lines without terminal punctuation are fragments of
// their own. Empty lines separate fragments.
std::vector<std::string> split_fragments(std::string_view text);

// Parses, composes, Skolemizes and asserts every fragment of the
// document. Throws RetrievalError if the document id is already indexed.
IndexReport index_document(KnowledgeBase& kb, int document, std::string_view text,
                           const ResourceSet& res, const ScoreConfig& cfg);

// Asserts a hand-written logical form as one fragment.
IndexReport index_logical_fragment(KnowledgeBase& kb, int document, int fragment,
                                   const LogicalForm& lf, std::string text);

struct QueryForms {
  std::vector<LogicalForm> forms;
  // No analysis covered any token: the forms are keyword fallback.
  bool keyword = false;
};

// Throws RetrievalError "empty query" if nothing content-bearing remains.
QueryForms analyze_query(std::string_view text, const ResourceSet& res, const ScoreConfig& cfg);

struct QueryResult {
  std::vector<LogicalForm> forms;
  bool keyword = false;
  // Ordered by stage, then document, then fragment.
  std::vector<Passage> passages;
  std::vector<Stage> stages_run;
  bool truncated = false;
};

QueryResult answer_query(const KnowledgeBase& kb, std::string_view query, const ResourceSet& res,
                         const VDConfig& vd, const ScoreConfig& cfg);

// Staged proof of already analysed query forms. Rules are the KB's own
// followed by `rules` whose ids the KB does not define.
QueryResult answer_forms(const KnowledgeBase& kb, const QueryForms& query,
                         const std::vector<Rule>& rules, const IsaHierarchy* isa,
                         const VDConfig& vd);

// "doc:frag [stage] text" with newlines in the text replaced by spaces.
std::string render_passage(const Passage& p);

}  // namespace logdoc

#endif  // LOGDOC_RETRIEVAL_HPP_
