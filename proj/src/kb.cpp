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

#include "logdoc/kb.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace logdoc {

namespace {

const std::vector<FactId> kNoFacts;

std::string escape_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '\\') {
      out += "\\\\";
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape_text(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      ++i;
      out += s[i] == 'n' ? '\n' : s[i];
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string format_weight(double w) {
  std::ostringstream os;
  os.precision(17);
  os << w;
  return os.str();
}

// "atom/F/D" -> atom and provenance.
std::pair<Atom, Provenance> parse_fact_text(const std::string& text, std::size_t line) {
  auto second = text.rfind('/');
  if (second == std::string::npos || second == 0) throw KbFormatError(line, "missing /F/D suffix");
  auto first = text.rfind('/', second - 1);
  if (first == std::string::npos) throw KbFormatError(line, "missing /F/D suffix");
  Provenance prov;
  try {
    std::size_t used = 0;
    std::string f = text.substr(first + 1, second - first - 1);
    std::string d = text.substr(second + 1);
    prov.fragment = std::stoi(f, &used);
    if (used != f.size()) throw std::invalid_argument(f);
    prov.document = std::stoi(d, &used);
    if (used != d.size()) throw std::invalid_argument(d);
  } catch (const std::logic_error&) {
    throw KbFormatError(line, "bad provenance suffix");
  }
  try {
    Atom atom = parse_atom(text.substr(0, first));
    if (!atom.ground()) throw KbFormatError(line, "fact is not ground: " + atom.str());
    return {std::move(atom), prov};
  } catch (const SyntaxError& e) {
    throw KbFormatError(line, e.what());
  }
}

}  // namespace

std::string Provenance::suffix() const {
  return "/" + std::to_string(fragment) + "/" + std::to_string(document);
}

std::string StoredFact::str() const { return atom.str() + prov.suffix(); }

FactId KnowledgeBase::add_fact(const Atom& atom, const Provenance& prov,
                               std::optional<GroupRef> group) {
  FactId id = facts_.size();
  facts_.push_back(StoredFact{id, atom, prov, group});
  std::string key = atom.key();
  by_key_[key].push_back(id);
  by_key_prov_[{key, prov}].push_back(id);
  return id;
}

std::vector<FactId> KnowledgeBase::assert_fragment(int document, int fragment,
                                                   const std::vector<LogicalForm>& readings,
                                                   std::string source_text) {
  if (readings.empty()) throw KbError("no readings for fragment");
  if (document <= 0 || fragment <= 0) throw KbError("fragment and document ids must be positive");
  Provenance prov{fragment, document};
  if (registry_.count(prov)) throw KbError("fragment already indexed");
  for (const auto& lf : readings) {
    for (const auto& a : lf.atoms) {
      if (!a.ground()) throw KbError("fact is not ground: " + a.str());
    }
  }
  registry_.emplace(prov, std::move(source_text));
  std::vector<FactId> ids;
  if (readings.size() == 1) {
    for (const auto& a : readings.front().atoms) ids.push_back(add_fact(a, prov, std::nullopt));
    return ids;
  }
  ReadingGroup group;
  group.id = "g" + std::to_string(groups_.size() + 1);
  group.prov = prov;
  std::size_t gi = groups_.size();
  for (std::size_t alt = 0; alt < readings.size(); ++alt) {
    std::vector<FactId> alt_ids;
    for (const auto& a : readings[alt].atoms) {
      alt_ids.push_back(add_fact(a, prov, GroupRef{gi, alt}));
    }
    ids.insert(ids.end(), alt_ids.begin(), alt_ids.end());
    group.alternatives.push_back(std::move(alt_ids));
  }
  groups_.push_back(std::move(group));
  return ids;
}

void KnowledgeBase::add_rule(Rule rule) {
  if (find_rule(rule.id)) throw KbError("duplicate rule id " + rule.id);
  rules_.push_back(std::move(rule));
}

std::vector<LookupEntry> KnowledgeBase::lookup(const std::string& predicate,
                                               std::size_t arity) const {
  std::vector<LookupEntry> out;
  for (FactId id : facts_for(predicate + "/" + std::to_string(arity))) out.push_back(&facts_[id]);
  for (const auto& r : rules_) {
    if (r.clause.head.predicate == predicate && r.clause.head.arity() == arity) out.push_back(&r);
  }
  return out;
}

const std::vector<FactId>& KnowledgeBase::facts_for(const std::string& key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? kNoFacts : it->second;
}

const std::vector<FactId>& KnowledgeBase::facts_for(const std::string& key,
                                                    const Provenance& prov) const {
  auto it = by_key_prov_.find({key, prov});
  return it == by_key_prov_.end() ? kNoFacts : it->second;
}

const Rule* KnowledgeBase::find_rule(const std::string& id) const {
  for (const auto& r : rules_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const std::string* KnowledgeBase::source_text(const Provenance& prov) const {
  auto it = registry_.find(prov);
  return it == registry_.end() ? nullptr : &it->second;
}

bool KnowledgeBase::has_document(int document) const {
  // Provenance orders by fragment first, so scan.
  for (const auto& [prov, text] : registry_) {
    if (prov.document == document) return true;
  }
  return false;
}

void KnowledgeBase::write(std::ostream& out) const {
  out << "% logdoc knowledge base\n";
  out << "SKOLEM " << skolems_.next() << "\n";
  for (const auto& [prov, text] : registry_) {
    out << "TEXT " << prov.fragment << " " << prov.document << " " << escape_text(text) << "\n";
  }
  std::size_t i = 0;
  while (i < facts_.size()) {
    const StoredFact& f = facts_[i];
    if (!f.group) {
      out << "FACT " << f.str() << "\n";
      ++i;
      continue;
    }
    const ReadingGroup& g = groups_[f.group->group];
    out << "GROUP " << g.id << " BEGIN\n";
    for (const auto& alt : g.alternatives) {
      out << "ALT\n";
      for (FactId id : alt) out << "FACT " << facts_[id].str() << "\n";
      i += alt.size();
    }
    out << "END\n";
  }
  for (const auto& r : rules_) {
    out << "RULE " << r.id << " "
        << (r.clause.level ? std::to_string(*r.clause.level) : std::string("-")) << " "
        << format_weight(r.clause.weight) << " " << r.clause.str() << "\n";
  }
}

KnowledgeBase KnowledgeBase::read(std::istream& in) {
  KnowledgeBase kb;
  std::string line;
  std::size_t lineno = 0;
  // Open group state.
  std::optional<ReadingGroup> group;
  std::size_t group_line = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    std::string rest;
    std::getline(ls, rest);
    if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
    if (keyword == "SKOLEM") {
      try {
        kb.skolems_ = SkolemIssuer(std::stoll(rest));
      } catch (const std::logic_error&) {
        throw KbFormatError(lineno, "bad SKOLEM counter");
      }
    } else if (keyword == "TEXT") {
      std::istringstream ts(rest);
      Provenance prov;
      if (!(ts >> prov.fragment >> prov.document)) throw KbFormatError(lineno, "bad TEXT line");
      std::string text;
      std::getline(ts, text);
      if (!text.empty() && text[0] == ' ') text.erase(0, 1);
      if (!kb.registry_.emplace(prov, unescape_text(text)).second) {
        throw KbFormatError(lineno, "duplicate fragment " + prov.suffix());
      }
    } else if (keyword == "FACT") {
      auto [atom, prov] = parse_fact_text(rest, lineno);
      if (!kb.registry_.count(prov)) {
        throw KbFormatError(lineno, "fact provenance " + prov.suffix() + " not in registry");
      }
      if (group) {
        if (group->alternatives.empty()) throw KbFormatError(lineno, "FACT before ALT in group");
        if (group->prov.document == 0) group->prov = prov;
        if (group->prov != prov) throw KbFormatError(lineno, "group mixes provenances");
        FactId id = kb.add_fact(atom, prov,
                                GroupRef{kb.groups_.size(), group->alternatives.size() - 1});
        group->alternatives.back().push_back(id);
      } else {
        kb.add_fact(atom, prov, std::nullopt);
      }
    } else if (keyword == "GROUP") {
      std::istringstream gs(rest);
      std::string id, begin;
      gs >> id >> begin;
      if (group) throw KbFormatError(lineno, "nested GROUP");
      if (id.empty() || begin != "BEGIN") throw KbFormatError(lineno, "expected GROUP id BEGIN");
      group = ReadingGroup{id, Provenance{}, {}};
      group_line = lineno;
    } else if (keyword == "ALT") {
      if (!group) throw KbFormatError(lineno, "ALT outside GROUP");
      group->alternatives.emplace_back();
    } else if (keyword == "END") {
      if (!group) throw KbFormatError(lineno, "END outside GROUP");
      if (group->alternatives.size() < 2) {
        throw KbFormatError(group_line, "group needs at least two alternatives");
      }
      kb.groups_.push_back(std::move(*group));
      group.reset();
    } else if (keyword == "RULE") {
      std::istringstream rs(rest);
      std::string id, level, weight;
      rs >> id >> level >> weight;
      std::string clause_text;
      std::getline(rs, clause_text);
      Rule r;
      r.id = id;
      try {
        r.clause = parse_clause(clause_text);
        if (level != "-") r.clause.level = std::stoi(level);
        r.clause.weight = std::stod(weight);
      } catch (const SyntaxError& e) {
        throw KbFormatError(lineno, e.what());
      } catch (const std::logic_error&) {
        throw KbFormatError(lineno, "bad RULE level or weight");
      }
      if (kb.find_rule(id)) throw KbFormatError(lineno, "duplicate rule id " + id);
      kb.rules_.push_back(std::move(r));
    } else {
      throw KbFormatError(lineno, "unknown record '" + keyword + "'");
    }
  }
  if (group) throw KbFormatError(group_line, "unterminated GROUP");
  return kb;
}

void KnowledgeBase::save(const std::string& path) const {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw KbError("cannot write " + tmp);
    write(out);
    out.flush();
    if (!out) throw KbError("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw KbError("cannot replace " + path);
  }
}

KnowledgeBase KnowledgeBase::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw KbError("cannot open " + path);
  return read(in);
}

bool operator==(const KnowledgeBase& a, const KnowledgeBase& b) {
  if (a.facts_.size() != b.facts_.size()) return false;
  for (std::size_t i = 0; i < a.facts_.size(); ++i) {
    const auto& x = a.facts_[i];
    const auto& y = b.facts_[i];
    if (x.atom != y.atom || x.prov != y.prov || x.group != y.group) return false;
  }
  if (a.groups_.size() != b.groups_.size()) return false;
  for (std::size_t i = 0; i < a.groups_.size(); ++i) {
    if (a.groups_[i].id != b.groups_[i].id || a.groups_[i].prov != b.groups_[i].prov ||
        a.groups_[i].alternatives != b.groups_[i].alternatives) {
      return false;
    }
  }
  return a.rules_ == b.rules_ && a.registry_ == b.registry_ && a.skolems_ == b.skolems_;
}

}  // namespace logdoc
