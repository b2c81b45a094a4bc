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

#include "logdoc/logical_form.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace logdoc {

std::string level_name(AtomLevel level) {
  switch (level) {
    case AtomLevel::kLevel1:
      return "1";
    case AtomLevel::kLevel2:
      return "2";
    case AtomLevel::kLevel3:
      return "3";
    default:
      return "support";
  }
}

std::optional<AtomLevel> LogicalForm::level_of(std::size_t i) const {
  if (!classified() || i >= levels.size()) return std::nullopt;
  return levels[i];
}

bool LogicalForm::ground() const {
  return std::all_of(atoms.begin(), atoms.end(), [](const Atom& a) { return a.ground(); });
}

std::vector<std::string> LogicalForm::variables() const {
  std::vector<std::string> out;
  for (const auto& a : atoms) a.collect_variables(out);
  return out;
}

void LogicalForm::append(const LogicalForm& other) {
  bool keep_levels = classified() && other.classified();
  atoms.insert(atoms.end(), other.atoms.begin(), other.atoms.end());
  if (keep_levels) {
    levels.insert(levels.end(), other.levels.begin(), other.levels.end());
  } else {
    levels.clear();
  }
}

std::string LogicalForm::str() const {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += ", ";
    out += atoms[i].str();
  }
  return out;
}

LogicalForm parse_logical_form(std::string_view text) {
  LogicalForm lf;
  lf.atoms = parse_conjunction(text);
  return lf;
}

namespace {

Term skolemize_term(const Term& t, std::map<std::string, Term>& seen, SkolemIssuer& issuer) {
  if (t.is_variable()) {
    auto it = seen.find(t.name());
    if (it == seen.end()) it = seen.emplace(t.name(), issuer.issue()).first;
    return it->second;
  }
  if (!t.is_compound()) return t;
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(skolemize_term(a, seen, issuer));
  return Term::compound(t.name(), std::move(args));
}

using VarMap = std::map<std::string, std::string>;

bool match_term(const Term& a, const Term& b, VarMap& fwd, VarMap& back) {
  if (a.is_variable() != b.is_variable()) return false;
  if (a.is_variable()) {
    auto f = fwd.find(a.name());
    auto r = back.find(b.name());
    if (f == fwd.end() && r == back.end()) {
      fwd.emplace(a.name(), b.name());
      back.emplace(b.name(), a.name());
      return true;
    }
    return f != fwd.end() && r != back.end() && f->second == b.name() &&
           r->second == a.name();
  }
  if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return false;
  if (a.is_skolem() && a.skolem_index() != b.skolem_index()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!match_term(a.args()[i], b.args()[i], fwd, back)) return false;
  }
  return true;
}

bool match_from(const std::vector<Atom>& as, const std::vector<Atom>& bs, std::size_t i,
                std::vector<bool>& used, VarMap& fwd, VarMap& back) {
  if (i == as.size()) return true;
  for (std::size_t j = 0; j < bs.size(); ++j) {
    if (used[j] || bs[j].predicate != as[i].predicate || bs[j].arity() != as[i].arity()) {
      continue;
    }
    VarMap f = fwd, r = back;
    bool ok = true;
    for (std::size_t k = 0; k < as[i].arity() && ok; ++k) {
      ok = match_term(as[i].args[k], bs[j].args[k], f, r);
    }
    if (!ok) continue;
    used[j] = true;
    if (match_from(as, bs, i + 1, used, f, r)) return true;
    used[j] = false;
  }
  return false;
}

std::vector<Atom> unique_atoms(const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  return out;
}

}  // namespace

LogicalForm skolemize(const LogicalForm& lf, SkolemIssuer& issuer) {
  std::map<std::string, Term> seen;
  LogicalForm out;
  out.levels = lf.levels;
  for (const auto& atom : lf.atoms) {
    Atom a;
    a.predicate = atom.predicate;
    for (const auto& t : atom.args) a.args.push_back(skolemize_term(t, seen, issuer));
    out.atoms.push_back(std::move(a));
  }
  return out;
}

bool alpha_equivalent(const LogicalForm& a, const LogicalForm& b) {
  auto as = unique_atoms(a.atoms);
  auto bs = unique_atoms(b.atoms);
  if (as.size() != bs.size()) return false;
  // Most constrained first: atoms with more constants.
  std::stable_sort(as.begin(), as.end(), [](const Atom& x, const Atom& y) {
    auto consts = [](const Atom& at) {
      return std::count_if(at.args.begin(), at.args.end(),
                           [](const Term& t) { return !t.is_variable(); });
    };
    return consts(x) > consts(y);
  });
  std::vector<bool> used(bs.size(), false);
  VarMap fwd, back;
  return match_from(as, bs, 0, used, fwd, back);
}

}  // namespace logdoc
