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

#include "logdoc/resources.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>

namespace logdoc {

namespace {

const std::string kPunctuation = ",.;:!?()\"[]{}";

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Removes a trailing % comment that is not inside a quoted constant.
std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\'') quoted = !quoted;
    if (line[i] == '%' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

struct Statement {
  std::string text;
  std::size_t line = 0;
};

// Statements end with a '.' at the end of a line and may span lines.
std::vector<Statement> split_statements(std::string_view text, const std::string& name,
                                        std::vector<std::string>& errors) {
  std::vector<Statement> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  Statement cur;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (cur.text.empty()) {
      cur.line = lineno;
    } else {
      cur.text += ' ';
    }
    cur.text += line;
    if (line.back() == '.') {
      out.push_back(std::move(cur));
      cur = Statement{};
    }
  }
  if (!cur.text.empty()) {
    errors.push_back(name + ":" + std::to_string(cur.line) + ": unterminated statement");
  }
  return out;
}

std::string where(const std::string& name, std::size_t line) {
  return name + ":" + std::to_string(line);
}

void collect(const FeatureMap& f, std::vector<std::string>& vars) {
  for (const auto& [k, v] : f) v.collect_variables(vars);
}

FeatureMap read_features(TermReader& r) {
  FeatureMap f;
  if (!r.consume('[')) return f;
  if (r.consume(']')) return f;
  do {
    std::string key = r.read_identifier();
    r.expect('=');
    f[key] = r.read_term();
  } while (r.consume(','));
  r.expect(']');
  return f;
}

Constituent read_constituent(TermReader& r, std::size_t& anon) {
  Constituent c;
  c.category = r.read_identifier();
  c.features = read_features(r);
  if (r.consume('/')) {
    c.sem = r.read_term();
  } else {
    c.sem = Term::variable("_S" + std::to_string(++anon));
  }
  return c;
}

bool known_guard(const Atom& g) {
  const std::string& p = g.predicate;
  std::size_t n = g.arity();
  return (p == "semtype" && n == 2) || (p == "transitivity" && n == 2) ||
         (p == "spec" && n >= 1) || (p == "combine" && n == 0) ||
         (p == "modifier" && n == 3) || (p == "nomodifier" && n == 2);
}

bool ground_constant(const Term& t) { return t.is_constant(); }

bool spec_guard_holds(const Atom& g, const Substitution& s, const Lexicon& lex) {
  Term a = s.apply(g.args[0]);
  Term b = s.apply(g.args[1]);
  if (!ground_constant(a) || !ground_constant(b)) return false;
  if (g.predicate == "semtype") return lex.has_semtype(a.name(), b.name());
  return lex.has_transitivity(a.name(), b.name());
}

std::string read_file(const std::string& path, std::vector<std::string>& errors) {
  std::ifstream in(path);
  if (!in) {
    errors.push_back("cannot open " + path);
    return {};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string features_str(const FeatureMap& f) {
  std::string out;
  for (const auto& [k, v] : f) {
    if (!out.empty()) out += ",";
    out += k + "=" + v.str();
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(lower(std::move(cur)));
    cur.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (kPunctuation.find(c) != std::string::npos) {
      flush();
      out.emplace_back(1, c);
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

std::string LexEntry::feature(const std::string& key) const {
  auto it = features.find(key);
  return it == features.end() ? std::string() : it->second.str();
}

void Lexicon::add(LexEntry entry) {
  by_surface_.emplace(entry.surface, entries_.size());
  lemmas_.insert(entry.lemma);
  entries_.push_back(std::move(entry));
}

std::vector<LexEntry> Lexicon::analyze_word(const std::string& form) const {
  std::vector<LexEntry> out;
  auto push = [&out](LexEntry e) {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
  };
  auto range = by_surface_.equal_range(form);
  for (auto it = range.first; it != range.second; ++it) push(entries_[it->second]);

  struct Candidate {
    std::string stem;
    std::string category;
    FeatureMap features;
  };
  std::vector<Candidate> cands;
  auto plural = [&](const std::string& stem) {
    cands.push_back({stem, "n", {{"num", Term::constant("pl")}}});
    cands.push_back(
        {stem, "v", {{"form", Term::constant("finite")}, {"num", Term::constant("sg")}}});
  };
  auto verbal = [&](const std::string& stem, const char* form_value) {
    FeatureMap f{{"form", Term::constant(form_value)}};
    cands.push_back({stem, "v", f});
    cands.push_back({stem + "e", "v", f});
    std::size_t n = stem.size();
    if (n >= 2 && stem[n - 1] == stem[n - 2] &&
        !std::strchr("aeiou", stem[n - 1])) {
      cands.push_back({stem.substr(0, n - 1), "v", f});
    }
  };
  auto ends = [&form](std::string_view suffix) {
    return form.size() > suffix.size() + 1 &&
           form.compare(form.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends("ies")) plural(form.substr(0, form.size() - 3) + "y");
  if (ends("es")) plural(form.substr(0, form.size() - 2));
  if (ends("s") && !ends("ss")) plural(form.substr(0, form.size() - 1));
  if (ends("ing")) verbal(form.substr(0, form.size() - 3), "gerund");
  if (ends("ied")) {
    cands.push_back({form.substr(0, form.size() - 3) + "y", "v",
                     {{"form", Term::constant("finite")}}});
  }
  if (ends("ed")) verbal(form.substr(0, form.size() - 2), "finite");

  for (const auto& c : cands) {
    auto base = by_surface_.equal_range(c.stem);
    for (auto it = base.first; it != base.second; ++it) {
      const LexEntry& e = entries_[it->second];
      if (e.category != c.category || e.lemma != e.surface) continue;
      LexEntry d = e;
      d.surface = form;
      for (const auto& [k, v] : c.features) d.features[k] = v;
      push(std::move(d));
    }
  }
  return out;
}

bool Lexicon::has_semtype(const std::string& lemma, const std::string& type) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const LexEntry& e) {
    return e.lemma == lemma &&
           std::find(e.semtypes.begin(), e.semtypes.end(), type) != e.semtypes.end();
  });
}

std::vector<std::string> Lexicon::semtypes_of(const std::string& lemma) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (e.lemma != lemma) continue;
    for (const auto& t : e.semtypes) {
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
  }
  return out;
}

bool Lexicon::has_transitivity(const std::string& lemma, const std::string& tr) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const LexEntry& e) {
    return e.lemma == lemma && e.category == "v" && e.feature("tr") == tr;
  });
}

std::optional<std::string> Lexicon::lemma_of(const std::string& form) const {
  auto entries = analyze_word(form);
  if (entries.empty()) return std::nullopt;
  for (const char* cat : {"n", "v"}) {
    for (const auto& e : entries) {
      if (e.category == cat) return e.lemma;
    }
  }
  return entries.front().lemma;
}

Lexicon Lexicon::without_semtypes() const {
  Lexicon out;
  for (auto e : entries_) {
    e.semtypes.clear();
    out.add(std::move(e));
  }
  return out;
}

std::vector<std::string> GrammarRule::variables() const {
  std::vector<std::string> vars;
  collect(lhs.features, vars);
  lhs.sem.collect_variables(vars);
  for (const auto& c : rhs) {
    collect(c.features, vars);
    c.sem.collect_variables(vars);
  }
  for (const auto& g : guards) g.collect_variables(vars);
  return vars;
}

bool Grammar::has_category(const std::string& c) const {
  return std::find(categories.begin(), categories.end(), c) != categories.end();
}

const GrammarRule* Grammar::find_rule(const std::string& id) const {
  for (const auto& r : rules) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::optional<std::string> Grammar::modifier_for(const std::string& prep,
                                                 const std::vector<std::string>& semtypes) const {
  for (const auto& m : modifiers) {
    if (m.prep == prep &&
        std::find(semtypes.begin(), semtypes.end(), m.semtype) != semtypes.end()) {
      return m.relation;
    }
  }
  return std::nullopt;
}

bool SpecTable::has_rule(const std::string& id) const {
  return std::any_of(rules.begin(), rules.end(), [&](const SpecRule& r) { return r.id == id; });
}

double SpecTable::evaluate(const std::string& id, const std::vector<Term>& args,
                           const Lexicon& lex) const {
  for (const auto& r : rules) {
    if (r.id != id || r.params.size() != args.size()) continue;
    std::optional<Substitution> s = Substitution{};
    for (std::size_t i = 0; i < args.size() && s; ++i) s = unify(r.params[i], args[i], *s);
    if (!s) continue;
    bool ok = std::all_of(r.guards.begin(), r.guards.end(),
                          [&](const Atom& g) { return spec_guard_holds(g, *s, lex); });
    if (ok) return r.value;
  }
  return 0;
}

std::optional<double> SpecTable::phrase_value(const std::vector<std::string>& words) const {
  for (const auto& p : phrases) {
    if (p.words == words) return p.value;
  }
  return std::nullopt;
}

std::vector<Rule> ResourceSet::postulate_rules() const {
  std::vector<Rule> out;
  for (const auto& p : postulates) out.push_back(p.to_rule());
  return out;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += "\n";
    out += p;
  }
  return out;
}

}  // namespace

ResourceError::ResourceError(std::vector<std::string> messages)
    : std::runtime_error(join(messages)), messages_(std::move(messages)) {}

ResourcePaths bundled_resource_paths() {
  std::string dir = LOGDOC_DATA_DIR;
  return {dir + "/grammar.txt", dir + "/lexicon.txt", dir + "/postulates.txt",
          dir + "/spec.txt", dir + "/isa.txt"};
}

Lexicon parse_lexicon(std::string_view text, const std::string& name,
                      std::vector<std::string>& errors) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '%') continue;
    std::istringstream fields(line);
    LexEntry e;
    if (!(fields >> e.surface >> e.category)) {
      errors.push_back(where(name, lineno) + ": expected 'surface category'");
      continue;
    }
    e.surface = lower(e.surface);
    e.lemma = e.surface;
    std::string kv;
    bool ok = true;
    while (fields >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size()) {
        errors.push_back(where(name, lineno) + ": expected key=value, got '" + kv + "'");
        ok = false;
        break;
      }
      std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
      if (key == "lemma") {
        e.lemma = value;
      } else if (key == "sem") {
        std::istringstream types(value);
        std::string t;
        while (std::getline(types, t, ',')) {
          if (!t.empty()) e.semtypes.push_back(t);
        }
      } else {
        e.features[key] = Term::constant(value);
      }
    }
    if (!ok) continue;
    if (e.category == "n" && !e.features.count("num")) e.features["num"] = Term::constant("sg");
    if (e.category == "v") {
      if (!e.features.count("form")) e.features["form"] = Term::constant("finite");
      if (!e.features.count("tr")) e.features["tr"] = Term::constant("tr");
    }
    lex.add(std::move(e));
  }
  return lex;
}

Grammar parse_grammar(std::string_view text, const std::string& name,
                      std::vector<std::string>& errors) {
  Grammar g;
  std::vector<std::pair<std::string, std::string>> category_refs;  // (category, location)
  std::size_t anon = 0;
  for (const auto& st : split_statements(text, name, errors)) {
    std::string loc = where(name, st.line);
    TermReader r(st.text, anon * 1000);
    try {
      std::string kw = r.read_identifier();
      if (kw == "CATEGORY") {
        while (!r.consume('.')) g.categories.push_back(r.read_identifier());
        continue;
      }
      if (kw == "MODIFIER") {
        ModifierEntry m;
        m.prep = r.read_identifier();
        m.semtype = r.read_identifier();
        m.relation = r.read_identifier();
        r.expect('.');
        g.modifiers.push_back(m);
        continue;
      }
      if (kw == "LEX") {
        LexTemplate t;
        t.category = r.read_identifier();
        t.features = read_features(r);
        r.expect(':');
        t.build = r.read_term();
        r.expect('.');
        category_refs.emplace_back(t.category, loc);
        g.templates.push_back(std::move(t));
        continue;
      }
      if (kw != "RULE") r.fail("unknown statement '" + kw + "'");
      GrammarRule rule;
      rule.location = loc;
      rule.id = r.read_identifier();
      r.expect(':');
      rule.lhs = read_constituent(r, anon);
      if (!r.consume_token("->")) r.fail("expected '->'");
      do {
        rule.rhs.push_back(read_constituent(r, anon));
      } while (r.consume(','));
      if (r.consume('{')) {
        if (!r.consume('}')) {
          rule.guards = r.read_atom_list();
          r.expect('}');
        }
      }
      r.expect('.');
      if (!r.at_end()) r.fail("trailing input");

      if (g.find_rule(rule.id)) errors.push_back(loc + ": duplicate rule id " + rule.id);
      category_refs.emplace_back(rule.lhs.category, loc + ": rule " + rule.id);
      for (const auto& c : rule.rhs) {
        category_refs.emplace_back(c.category, loc + ": rule " + rule.id);
      }
      for (const auto& gd : rule.guards) {
        if (!known_guard(gd)) {
          errors.push_back(loc + ": rule " + rule.id + ": unknown guard " + gd.key());
        }
      }
      std::vector<std::string> bound;
      collect(rule.lhs.features, bound);
      for (const auto& c : rule.rhs) {
        collect(c.features, bound);
        c.sem.collect_variables(bound);
      }
      for (const auto& gd : rule.guards) gd.collect_variables(bound);
      std::vector<std::string> used;
      rule.lhs.sem.collect_variables(used);
      for (const auto& v : used) {
        if (std::find(bound.begin(), bound.end(), v) == bound.end()) {
          errors.push_back(loc + ": rule " + rule.id + ": semantic build variable " + v +
                           " not bound");
          break;
        }
      }
      g.rules.push_back(std::move(rule));
    } catch (const SyntaxError& e) {
      errors.push_back(loc + ": " + e.what() + " at column " + std::to_string(e.column()));
    }
    ++anon;
  }
  for (const auto& [cat, loc] : category_refs) {
    if (!g.has_category(cat)) errors.push_back(loc + ": unknown category " + cat);
  }
  return g;
}

SpecTable parse_specs(std::string_view text, const std::string& name,
                      std::vector<std::string>& errors) {
  SpecTable table;
  for (const auto& st : split_statements(text, name, errors)) {
    std::string loc = where(name, st.line);
    TermReader r(st.text);
    try {
      std::string kw = r.read_identifier();
      if (kw == "PHRASE") {
        SetPhrase p;
        while (!r.at_end() && r.peek() != '.') {
          char c = r.peek();
          if (std::isdigit(static_cast<unsigned char>(c))) {
            p.value = r.read_number();
            break;
          }
          p.words.push_back(lower(r.read_identifier()));
        }
        r.expect('.');
        if (p.words.size() < 2) errors.push_back(loc + ": a set phrase needs two or more words");
        if (p.value < 0) errors.push_back(loc + ": negative phrase value");
        table.phrases.push_back(std::move(p));
        continue;
      }
      if (kw != "SPEC") r.fail("unknown statement '" + kw + "'");
      SpecRule rule;
      rule.location = loc;
      Term head = r.read_term();
      if (head.is_variable() || head.is_skolem()) r.fail("expected spec rule head");
      rule.id = head.name();
      rule.params = head.args();
      rule.value = r.read_number();
      if (r.consume(':')) rule.guards = r.read_atom_list();
      r.expect('.');
      if (rule.value < 0) errors.push_back(loc + ": spec rule " + rule.id + ": negative value");
      for (const auto& gd : rule.guards) {
        if ((gd.predicate != "semtype" && gd.predicate != "transitivity") || gd.arity() != 2) {
          errors.push_back(loc + ": spec rule " + rule.id + ": unknown guard " + gd.key());
        }
      }
      table.rules.push_back(std::move(rule));
    } catch (const SyntaxError& e) {
      errors.push_back(loc + ": " + e.what() + " at column " + std::to_string(e.column()));
    }
  }
  return table;
}

std::vector<MeaningPostulate> parse_postulates(std::string_view text, const std::string& name,
                                               std::vector<std::string>& errors) {
  std::vector<MeaningPostulate> out;
  for (const auto& st : split_statements(text, name, errors)) {
    std::string loc = where(name, st.line);
    TermReader r(st.text);
    try {
      std::string kw = r.read_identifier();
      if (kw != "POSTULATE") r.fail("unknown statement '" + kw + "'");
      MeaningPostulate p;
      p.id = r.read_identifier();
      double level = r.read_number();
      double weight = r.read_number();
      r.expect(':');
      p.clause = parse_clause(r.rest());
      if (level != 1 && level != 2 && level != 3) {
        errors.push_back(loc + ": postulate " + p.id + ": level must be 1, 2 or 3");
      }
      if (weight < 0) errors.push_back(loc + ": postulate " + p.id + ": negative weight");
      if (p.clause.body.empty()) errors.push_back(loc + ": postulate " + p.id + ": empty body");
      p.clause.level = static_cast<int>(level);
      p.clause.weight = weight;
      bool dup = std::any_of(out.begin(), out.end(),
                             [&](const MeaningPostulate& q) { return q.id == p.id; });
      if (dup) errors.push_back(loc + ": duplicate postulate id " + p.id);
      out.push_back(std::move(p));
    } catch (const SyntaxError& e) {
      errors.push_back(loc + ": " + e.what());
    }
  }
  return out;
}

IsaHierarchy parse_isa(std::string_view text, const std::string& name,
                       std::vector<std::string>& errors) {
  IsaHierarchy isa;
  for (const auto& st : split_statements(text, name, errors)) {
    std::string loc = where(name, st.line);
    try {
      Atom a = parse_atom(st.text.substr(0, st.text.size() - 1));
      if (a.predicate != "isa" || a.arity() != 2 || !a.args[0].is_constant() ||
          !a.args[1].is_constant()) {
        errors.push_back(loc + ": expected isa(child, parent)");
        continue;
      }
      isa.add(a.args[0].name(), a.args[1].name());
    } catch (const SyntaxError& e) {
      errors.push_back(loc + ": " + e.what());
    } catch (const IsaError& e) {
      errors.push_back(loc + ": " + e.what());
    }
  }
  return isa;
}

namespace {

ResourceSet build(const ResourceTexts& t, const ResourcePaths& names,
                  std::vector<std::string>& errors) {
  ResourceSet rs;
  rs.grammar = parse_grammar(t.grammar, names.grammar, errors);
  rs.lexicon = parse_lexicon(t.lexicon, names.lexicon, errors);
  rs.specs = parse_specs(t.specs, names.specs, errors);
  rs.postulates = parse_postulates(t.postulates, names.postulates, errors);
  rs.isa = parse_isa(t.isa, names.isa.empty() ? "isa" : names.isa, errors);
  for (const auto& rule : rs.grammar.rules) {
    for (const auto& gd : rule.guards) {
      if (gd.predicate != "spec") continue;
      const Term& id = gd.args[0];
      if (!id.is_constant() || !rs.specs.has_rule(id.name())) {
        errors.push_back(rule.location + ": rule " + rule.id + ": unknown spec rule " +
                         id.str());
      }
    }
  }
  return rs;
}

}  // namespace

ResourceSet build_resources(const ResourceTexts& texts) {
  std::vector<std::string> errors;
  ResourceSet rs = build(texts, {"grammar", "lexicon", "postulates", "spec", "isa"}, errors);
  if (!errors.empty()) throw ResourceError(errors);
  return rs;
}

ResourceSet load_resources(const ResourcePaths& paths) {
  std::vector<std::string> errors;
  ResourceTexts texts;
  texts.grammar = read_file(paths.grammar, errors);
  texts.lexicon = read_file(paths.lexicon, errors);
  texts.postulates = read_file(paths.postulates, errors);
  texts.specs = read_file(paths.specs, errors);
  if (!paths.isa.empty()) texts.isa = read_file(paths.isa, errors);
  if (!errors.empty()) throw ResourceError(errors);
  ResourceSet rs = build(texts, paths, errors);
  if (!errors.empty()) throw ResourceError(errors);
  return rs;
}

}  // namespace logdoc
