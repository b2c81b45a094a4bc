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

#include "logdoc/chart.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace logdoc {

namespace {

constexpr double kTieEpsilon = 1e-9;

bool same_value(double a, double b) {
  return std::fabs(a - b) <= kTieEpsilon * std::max({1.0, std::fabs(a), std::fabs(b)});
}

FeatureMap rename_features(const FeatureMap& f, std::int64_t salt) {
  FeatureMap out;
  for (const auto& [k, v] : f) out.emplace(k, rename_apart(v, salt));
  return out;
}

// Pattern keys missing from `actual` only match variables.
bool unify_features(const FeatureMap& pattern, const FeatureMap& actual, Substitution& s) {
  for (const auto& [key, pv] : pattern) {
    auto it = actual.find(key);
    if (it == actual.end()) {
      if (!s.apply(pv).is_variable()) return false;
      continue;
    }
    auto next = unify(pv, it->second, s);
    if (!next) return false;
    s = std::move(*next);
  }
  return true;
}

bool template_matches(const LexTemplate& t, const LexEntry& e) {
  if (t.category != e.category) return false;
  for (const auto& [key, value] : t.features) {
    auto it = e.features.find(key);
    if (it == e.features.end() || it->second != value) return false;
  }
  return true;
}

std::optional<std::string> constant_name(const Term& t) {
  if (t.is_constant()) return t.name();
  return std::nullopt;
}

}  // namespace

void ScoreConfig::validate() const {
  if (!(rew > 1)) throw std::invalid_argument("rew must be greater than 1");
  if (!(pen > 0)) throw std::invalid_argument("pen must be positive");
  if (!(cluster_threshold > 0 && cluster_threshold <= 1)) {
    throw std::invalid_argument("cluster threshold must lie in (0,1]");
  }
  if (!(within_pct > 0 && within_pct <= 100)) {
    throw std::invalid_argument("within-pct must lie in (0,100]");
  }
  if (first_n == 0) throw std::invalid_argument("first-n must be positive");
}

double score(const std::vector<double>& child_values, double spec, const ScoreConfig& cfg) {
  double sum = 0;
  for (double v : child_values) sum += v;
  return (sum - spec) / cfg.rew + cfg.pen;
}

double cluster_coefficient(double a, double b) {
  double x = std::fabs(a), y = std::fabs(b);
  if (x == 0 && y == 0) return 1;
  return std::min(x, y) / std::max(x, y);
}

std::string Edge::signature() const {
  std::string out = category;
  for (const char* key : {"num", "form", "tr"}) {
    auto it = features.find(key);
    out += '|';
    out += it != features.end() && it->second.ground() ? it->second.str() : "_";
  }
  return out;
}

std::vector<Edge> lexical_edges(const std::string& token, std::size_t position,
                                const ResourceSet& res, const ScoreConfig& cfg) {
  std::vector<Edge> out;
  for (const auto& entry : res.lexicon.analyze_word(token)) {
    Edge e;
    e.start = position;
    e.end = position + 1;
    e.category = entry.category;
    e.features = entry.features;
    e.features["head"] = Term::constant(entry.lemma);
    e.surface = token;
    e.lemma = entry.lemma;
    e.value = cfg.default_lex_value;
    const auto& templates = res.grammar.templates;
    for (std::size_t i = 0; i < templates.size(); ++i) {
      if (template_matches(templates[i], entry)) {
        e.template_index = static_cast<int>(i);
        break;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::optional<RuleMatch> match_rule(const GrammarRule& rule, std::int64_t salt,
                                    const std::vector<const Edge*>& children,
                                    const std::vector<std::string>& tokens,
                                    const ResourceSet& res, const ScoreConfig& cfg) {
  if (children.size() != rule.rhs.size() || children.empty()) return std::nullopt;
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (children[i]->category != rule.rhs[i].category) return std::nullopt;
    if (i > 0 && children[i]->start != children[i - 1]->end) return std::nullopt;
  }
  Substitution s;
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (!unify_features(rename_features(rule.rhs[i].features, salt), children[i]->features, s)) {
      return std::nullopt;
    }
  }

  RuleMatch m;
  const Lexicon& lex = res.lexicon;
  for (const auto& raw : rule.guards) {
    Atom g = s.apply(rename_apart(raw, salt));
    const std::string& p = g.predicate;
    if (p == "combine") continue;
    if (p == "spec") {
      std::vector<Term> args(g.args.begin() + 1, g.args.end());
      m.spec += res.specs.evaluate(g.args[0].name(), args, lex);
      continue;
    }
    auto a = constant_name(g.args[0]);
    auto b = constant_name(g.args[1]);
    if (p == "semtype") {
      if (!a || !b || !lex.has_semtype(*a, *b)) return std::nullopt;
    } else if (p == "transitivity") {
      if (!a || !b || !lex.has_transitivity(*a, *b)) return std::nullopt;
    } else if (p == "modifier") {
      if (!a || !b) return std::nullopt;
      auto rel = res.grammar.modifier_for(*a, lex.semtypes_of(*b));
      if (!rel) return std::nullopt;
      auto next = unify(g.args[2], Term::constant(*rel), s);
      if (!next) return std::nullopt;
      s = std::move(*next);
    } else if (p == "nomodifier") {
      if (a && b && res.grammar.modifier_for(*a, lex.semtypes_of(*b))) return std::nullopt;
    } else {
      return std::nullopt;
    }
  }

  if (children.size() >= 2) {
    std::size_t start = children.front()->start, end = children.back()->end;
    if (end <= tokens.size()) {
      std::vector<std::string> words(tokens.begin() + start, tokens.begin() + end);
      if (auto v = res.specs.phrase_value(words)) m.spec += *v;
    }
  }

  for (const auto& [key, value] : rename_features(rule.lhs.features, salt)) {
    Term t = s.apply(value);
    if (!t.is_variable()) m.features.emplace(key, std::move(t));
  }
  std::vector<double> values;
  for (const Edge* c : children) values.push_back(c->value);
  m.value = score(values, m.spec, cfg);
  m.bindings = std::move(s);
  return m;
}

std::vector<EdgeId> Chart::alive_edges() const {
  std::vector<EdgeId> out;
  for (const auto& e : edges_) {
    if (e.alive) out.push_back(e.id);
  }
  return out;
}

std::size_t Chart::alive_count() const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.alive; }));
}

std::string Chart::tree(EdgeId id) const {
  const Edge& e = edges_.at(id);
  if (e.lexical()) return e.surface + ":" + e.signature();
  std::string out = "(" + e.rule;
  for (EdgeId c : e.children) out += " " + tree(c);
  return out + ")";
}

std::string Chart::dump() const {
  std::ostringstream out;
  for (const auto& e : edges_) {
    if (!e.alive) continue;
    out << e.id << " [" << e.start << "," << e.end << ") " << e.category;
    if (!e.features.empty()) out << "[" << features_str(e.features) << "]";
    out << " " << e.value << " " << (e.lexical() ? "lex:" + e.surface : e.rule);
    for (EdgeId c : e.children) out << " " << c;
    out << "\n";
  }
  return out.str();
}

namespace {

struct Pending {
  Edge edge;
  std::size_t seq;
};

struct PendingOrder {
  bool operator()(const Pending& a, const Pending& b) const {
    if (a.edge.value != b.edge.value) return a.edge.value > b.edge.value;
    return a.seq > b.seq;
  }
};

class ChartBuilder {
 public:
  ChartBuilder(std::vector<Edge>& edges, const std::vector<std::string>& tokens,
               const ResourceSet& res, const ScoreConfig& cfg)
      : edges_(edges), tokens_(tokens), res_(res), cfg_(cfg), by_start_(tokens.size()) {
    for (std::size_t i = 0; i < res.grammar.rules.size(); ++i) {
      (res.grammar.rules[i].unary() ? unary_ : nary_).push_back(i);
    }
  }

  void run() {
    std::size_t n = tokens_.size();
    for (std::size_t len = 1; len <= n; ++len) {
      for (std::size_t i = 0; i + len <= n; ++i) build_span(i, i + len);
    }
  }

 private:
  void build_span(std::size_t start, std::size_t end) {
    std::priority_queue<Pending, std::vector<Pending>, PendingOrder> agenda;
    auto push = [&](Edge e) { agenda.push(Pending{std::move(e), seq_++}); };

    if (end - start == 1) {
      for (auto& e : lexical_edges(tokens_[start], start, res_, cfg_)) {
        e.salt = next_salt_++;
        push(std::move(e));
      }
    } else {
      for (std::size_t r : nary_) {
        std::vector<const Edge*> seq;
        std::int64_t salt = next_salt_++;
        enumerate(r, start, end, seq, salt, push);
      }
    }

    span_first_ = edges_.size();
    std::map<std::string, std::vector<EdgeId>> cohorts;
    while (!agenda.empty()) {
      Pending p = agenda.top();
      agenda.pop();
      Edge& cand = p.edge;
      bool orphan = std::any_of(cand.children.begin(), cand.children.end(),
                                [&](EdgeId c) { return !edges_[c].alive; });
      if (orphan) continue;
      auto& members = cohorts[cand.signature()];
      if (!admit(cand.value, members)) continue;

      cand.id = edges_.size();
      edges_.push_back(cand);
      members.push_back(cand.id);
      by_start_[start].push_back(cand.id);

      const Edge& kept = edges_.back();
      if (kept.unary_depth >= kMaxUnaryDepth) continue;
      EdgeId child_id = kept.id;
      for (std::size_t r : unary_) {
        const GrammarRule& rule = res_.grammar.rules[r];
        if (rule.rhs[0].category != edges_[child_id].category) continue;
        std::int64_t salt = next_salt_++;
        auto m = match_rule(rule, salt, {&edges_[child_id]}, tokens_, res_, cfg_);
        if (!m) continue;
        push(make_edge(r, salt, {child_id}, std::move(*m), edges_[child_id].unary_depth + 1));
      }
    }
  }

  // Applies the cohort policy; may evict the current worst value.
  bool admit(double value, std::vector<EdgeId>& members) {
    if (cfg_.n_best == 0) return true;
    std::vector<double> values;
    for (EdgeId id : members) {
      if (!edges_[id].alive) continue;
      double v = edges_[id].value;
      if (std::none_of(values.begin(), values.end(), [&](double x) { return same_value(x, v); })) {
        values.push_back(v);
      }
    }
    if (std::any_of(values.begin(), values.end(), [&](double x) { return same_value(x, value); })) {
      return true;
    }
    if (values.size() < cfg_.n_best) return true;
    double worst = *std::max_element(values.begin(), values.end());
    if (value >= worst) return false;
    for (EdgeId id : members) {
      if (edges_[id].alive && same_value(edges_[id].value, worst)) kill(id);
    }
    return true;
  }

  // Marks an edge dead together with the same-span edges built on it.
  void kill(EdgeId id) {
    edges_[id].alive = false;
    for (std::size_t k = span_first_; k < edges_.size(); ++k) {
      Edge& e = edges_[k];
      if (!e.alive) continue;
      if (std::find(e.children.begin(), e.children.end(), id) != e.children.end()) kill(k);
    }
  }

  template <typename Push>
  void enumerate(std::size_t r, std::size_t pos, std::size_t end,
                 std::vector<const Edge*>& seq, std::int64_t salt, Push& push) {
    const GrammarRule& rule = res_.grammar.rules[r];
    std::size_t idx = seq.size();
    std::size_t remaining = rule.rhs.size() - idx - 1;
    if (pos >= end) return;
    for (EdgeId id : by_start_[pos]) {
      const Edge& e = edges_[id];
      if (!e.alive || e.category != rule.rhs[idx].category) continue;
      if (remaining == 0 ? e.end != end : e.end + remaining > end) continue;
      seq.push_back(&e);
      if (remaining == 0) {
        if (auto m = match_rule(rule, salt, seq, tokens_, res_, cfg_)) {
          std::vector<EdgeId> ids;
          for (const Edge* c : seq) ids.push_back(c->id);
          push(make_edge(r, salt, std::move(ids), std::move(*m), 0));
        }
      } else {
        enumerate(r, e.end, end, seq, salt, push);
      }
      seq.pop_back();
    }
  }

  Edge make_edge(std::size_t r, std::int64_t salt, std::vector<EdgeId> children, RuleMatch m,
                 int depth) {
    const GrammarRule& rule = res_.grammar.rules[r];
    Edge e;
    e.start = edges_[children.front()].start;
    e.end = edges_[children.back()].end;
    e.category = rule.lhs.category;
    e.features = std::move(m.features);
    e.value = m.value;
    e.children = std::move(children);
    e.rule = rule.id;
    e.rule_index = static_cast<int>(r);
    e.salt = salt;
    e.bindings = std::move(m.bindings);
    e.unary_depth = depth;
    return e;
  }

  std::vector<Edge>& edges_;
  const std::vector<std::string>& tokens_;
  const ResourceSet& res_;
  const ScoreConfig& cfg_;
  std::vector<std::vector<EdgeId>> by_start_;
  std::vector<std::size_t> unary_, nary_;
  std::size_t span_first_ = 0;
  std::size_t seq_ = 0;
  std::int64_t next_salt_ = 1;
};

}  // namespace

std::shared_ptr<const Chart> parse(const std::vector<std::string>& tokens, const ResourceSet& res,
                                   const ScoreConfig& cfg) {
  auto chart = std::make_shared<Chart>();
  chart->tokens_ = tokens;
  ChartBuilder(chart->edges_, chart->tokens_, res, cfg).run();
  return chart;
}

std::vector<Analysis> full_analyses(const std::shared_ptr<const Chart>& chart) {
  std::vector<Analysis> out;
  std::size_t n = chart->tokens().size();
  if (n == 0) return out;
  std::set<EdgeId> used;
  std::vector<EdgeId> full;
  for (const auto& e : chart->edges()) {
    if (!e.alive || e.start != 0 || e.end != n) continue;
    full.push_back(e.id);
    used.insert(e.children.begin(), e.children.end());
  }
  for (EdgeId id : full) {
    if (used.count(id)) continue;
    const Edge& e = chart->edge(id);
    out.push_back(Analysis{chart, id, e.value, 0, n, 0});
  }
  std::stable_sort(out.begin(), out.end(), [](const Analysis& a, const Analysis& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.root < b.root;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].reading = i;
  return out;
}

std::vector<Analysis> filter_readings(const std::vector<Analysis>& ranked, const ScoreConfig& cfg) {
  std::vector<Analysis> out;
  if (ranked.empty()) return out;
  switch (cfg.filter) {
    case FilterMode::kFirstN:
      out.assign(ranked.begin(), ranked.begin() + std::min(cfg.first_n, ranked.size()));
      break;
    case FilterMode::kWithinPct:
      for (const auto& a : ranked) {
        if (cluster_coefficient(ranked.front().value, a.value) >= cfg.within_pct / 100) {
          out.push_back(a);
        }
      }
      break;
    case FilterMode::kCluster:
      out.push_back(ranked.front());
      for (std::size_t i = 1; i < ranked.size(); ++i) {
        if (cluster_coefficient(ranked[i - 1].value, ranked[i].value) < cfg.cluster_threshold) {
          break;
        }
        out.push_back(ranked[i]);
      }
      break;
  }
  return out;
}

FragmentCover extract_fragments(const std::shared_ptr<const Chart>& chart,
                                const ScoreConfig& cfg) {
  FragmentCover cover;
  auto full = full_analyses(chart);
  if (!full.empty()) {
    cover.analyses = filter_readings(full, cfg);
    cover.full = true;
    return cover;
  }
  std::size_t n = chart->tokens().size();
  std::size_t pos = 0;
  while (pos < n) {
    const Edge* best = nullptr;
    for (const auto& e : chart->edges()) {
      if (!e.alive || e.start != pos) continue;
      if (e.lexical() && e.template_index < 0) continue;
      if (!best || e.end > best->end || (e.end == best->end && e.value < best->value)) {
        best = &e;
      }
    }
    if (!best) {
      cover.uncovered.push_back(pos++);
      continue;
    }
    cover.analyses.push_back(Analysis{chart, best->id, best->value, best->start, best->end,
                                      cover.analyses.size()});
    pos = best->end;
  }
  return cover;
}

}  // namespace logdoc
