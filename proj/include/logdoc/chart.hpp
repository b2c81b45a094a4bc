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

#ifndef LOGDOC_CHART_HPP_
#define LOGDOC_CHART_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "logdoc/resources.hpp"
#include "logdoc/term.hpp"

namespace logdoc {

enum class FilterMode { kFirstN, kWithinPct, kCluster };

struct ScoreConfig {
  double rew = 2.25;
  double pen = 15;
  double default_lex_value = 0;
  std::size_t n_best = 1;  // 0 disables pruning
  FilterMode filter = FilterMode::kCluster;
  double cluster_threshold = 0.897;
  std::size_t first_n = 1;
  double within_pct = 90;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// (sum of child values - spec) / rew + pen. Lower is more preferred.
double score(const std::vector<double>& child_values, double spec, const ScoreConfig& cfg);

// min(|a|,|b|) / max(|a|,|b|), 1 when both are zero.
double cluster_coefficient(double a, double b);

using EdgeId = std::size_t;

struct Edge {
  EdgeId id = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string category;
  FeatureMap features;
  double value = 0;
  std::vector<EdgeId> children;
  std::string rule;  // empty for lexical edges
  int rule_index = -1;
  // Lexical edges only.
  std::string surface;
  std::string lemma;
  int template_index = -1;
  // Rule variables are renamed with `salt`; `bindings` holds the feature
  // and guard bindings under that renaming.
  std::int64_t salt = 0;
  Substitution bindings;
  int unary_depth = 0;
  bool alive = true;

  bool lexical() const { return rule_index < 0; }
  std::size_t length() const { return end - start; }
  // Cohort key component: category plus num, form and tr.
  std::string signature() const;
};

// Result of matching one grammar rule against a child sequence.
struct RuleMatch {
  FeatureMap features;
  Substitution bindings;
  double spec = 0;
  double value = 0;
};

// Lexical edges of one token: one per lexicon analysis, value default_lex_value.
std::vector<Edge> lexical_edges(const std::string& token, std::size_t position,
                                const ResourceSet& res, const ScoreConfig& cfg);

// Feature unification, guard evaluation and scoring of `rule` over
// `children`, which must be adjacent and cover tokens[start, end).
std::optional<RuleMatch> match_rule(const GrammarRule& rule, std::int64_t salt,
                                    const std::vector<const Edge*>& children,
                                    const std::vector<std::string>& tokens,
                                    const ResourceSet& res, const ScoreConfig& cfg);

inline constexpr int kMaxUnaryDepth = 4;

class Chart {
 public:
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_.at(id); }
  std::vector<EdgeId> alive_edges() const;
  std::size_t alive_count() const;

  // Bracketed derivation, e.g. "(np_det the:det (cnp_n dog:n))".
  std::string tree(EdgeId id) const;
  // One edge per line: id, span, category, value, rule, children.
  std::string dump() const;

 private:
  friend std::shared_ptr<const Chart> parse(const std::vector<std::string>&,
                                            const ResourceSet&, const ScoreConfig&);
  std::vector<std::string> tokens_;
  std::vector<Edge> edges_;
};

// Bottom-up chart over span lengths 1..n; within a span, edges leave a
// value-ordered agenda and unary rules close over them. Each
// (span, signature) cohort keeps its n_best lowest distinct values, ties
// included.
std::shared_ptr<const Chart> parse(const std::vector<std::string>& tokens,
                                   const ResourceSet& res, const ScoreConfig& cfg);

struct Analysis {
  std::shared_ptr<const Chart> chart;
  EdgeId root = 0;
  double value = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t reading = 0;

  const Edge& edge() const { return chart->edge(root); }
};

// Maximal live full-span edges (not a child of another live full-span
// edge), ascending by value then edge id.
std::vector<Analysis> full_analyses(const std::shared_ptr<const Chart>& chart);

// Input must be ascending by value.
std::vector<Analysis> filter_readings(const std::vector<Analysis>& ranked, const ScoreConfig& cfg);

struct FragmentCover {
  std::vector<Analysis> analyses;
  std::vector<std::size_t> uncovered;  // token positions with no meaningful edge
  bool full = false;
};

// Filtered full analyses when the whole input parses; otherwise a
// left-to-right greedy cover by the longest edges that carry a build.
FragmentCover extract_fragments(const std::shared_ptr<const Chart>& chart, const ScoreConfig& cfg);

}  // namespace logdoc

#endif  // LOGDOC_CHART_HPP_
