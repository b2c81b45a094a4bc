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

#include "logdoc/term.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace logdoc {

namespace {

bool is_ident_start(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) { return is_ident_start(c) || c == '-'; }

bool is_skolem_name(std::string_view s) {
  if (s.size() < 4 || s.substr(0, 3) != "sk-") return false;
  return std::all_of(s.begin() + 3, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_variable_name(std::string_view s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

int compare(const Term& a, const Term& b);

int compare_args(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (int c = compare(a[i], b[i]); c != 0) return c;
  }
  return 0;
}

int compare(const Term& a, const Term& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  switch (a.kind()) {
    case Term::Kind::kSkolem:
      if (a.skolem_index() == b.skolem_index()) return 0;
      return a.skolem_index() < b.skolem_index() ? -1 : 1;
    case Term::Kind::kCompound:
      if (a.name() != b.name()) return a.name() < b.name() ? -1 : 1;
      return compare_args(a.args(), b.args());
    default:
      if (a.name() == b.name()) return 0;
      return a.name() < b.name() ? -1 : 1;
  }
}

void print(const Term& t, std::string& out);

void print_args(const std::vector<Term>& args, std::string& out) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    print(args[i], out);
  }
  out += ')';
}

bool is_conj(const Term& t) { return t.is_compound() && t.name() == "&" && t.arity() == 2; }

void print(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::kVariable:
      out += t.name();
      break;
    case Term::Kind::kConstant:
      out += quote_if_needed(t.name());
      break;
    case Term::Kind::kSkolem:
      out += "sk-";
      out += std::to_string(t.skolem_index());
      break;
    case Term::Kind::kCompound:
      if (is_conj(t)) {
        const Term& lhs = t.args()[0];
        if (is_conj(lhs)) out += '(';
        print(lhs, out);
        if (is_conj(lhs)) out += ')';
        out += " & ";
        print(t.args()[1], out);
      } else {
        out += t.name() == "@" ? "@" : quote_if_needed(t.name());
        print_args(t.args(), out);
      }
      break;
  }
}

Term rename_term(const Term& t, const std::string& suffix) {
  switch (t.kind()) {
    case Term::Kind::kVariable:
      return Term::variable(t.name() + suffix);
    case Term::Kind::kCompound: {
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const auto& a : t.args()) args.push_back(rename_term(a, suffix));
      return Term::compound(t.name(), std::move(args));
    }
    default:
      return t;
  }
}

}  // namespace

Term Term::variable(std::string name) {
  Term t;
  t.kind_ = Kind::kVariable;
  t.name_ = std::move(name);
  return t;
}

Term Term::constant(std::string name) {
  Term t;
  t.kind_ = Kind::kConstant;
  t.name_ = std::move(name);
  return t;
}

Term Term::skolem(std::int64_t index) {
  Term t;
  t.kind_ = Kind::kSkolem;
  t.name_.clear();
  t.index_ = index;
  return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return constant(std::move(functor));
  Term t;
  t.kind_ = Kind::kCompound;
  t.name_ = std::move(functor);
  t.args_ = std::move(args);
  return t;
}

std::optional<std::int64_t> Term::as_integer() const {
  if (kind_ != Kind::kConstant || name_.empty()) return std::nullopt;
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(name_.data(), name_.data() + name_.size(), v);
  if (ec != std::errc() || p != name_.data() + name_.size()) return std::nullopt;
  return v;
}

bool Term::ground() const {
  if (kind_ == Kind::kVariable) return false;
  return std::all_of(args_.begin(), args_.end(), [](const Term& a) { return a.ground(); });
}

bool Term::contains_variable(const std::string& name) const {
  if (kind_ == Kind::kVariable) return name_ == name;
  return std::any_of(args_.begin(), args_.end(),
                     [&](const Term& a) { return a.contains_variable(name); });
}

void Term::collect_variables(std::vector<std::string>& out) const {
  if (kind_ == Kind::kVariable) {
    if (std::find(out.begin(), out.end(), name_) == out.end()) out.push_back(name_);
    return;
  }
  for (const auto& a : args_) a.collect_variables(out);
}

std::string Term::str() const {
  std::string out;
  print(*this, out);
  return out;
}

bool operator==(const Term& a, const Term& b) { return compare(a, b) == 0; }
bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

bool Atom::ground() const {
  return std::all_of(args.begin(), args.end(), [](const Term& a) { return a.ground(); });
}

void Atom::collect_variables(std::vector<std::string>& out) const {
  for (const auto& a : args) a.collect_variables(out);
}

std::string Atom::str() const {
  std::string out = quote_if_needed(predicate);
  if (!args.empty()) print_args(args, out);
  return out;
}

std::optional<Atom> Atom::from_term(const Term& t) {
  if (t.is_compound()) return Atom(t.name(), t.args());
  if (t.is_constant()) return Atom(t.name(), {});
  return std::nullopt;
}

bool operator<(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  return compare_args(a.args, b.args) < 0;
}

std::vector<std::string> HornClause::variables() const {
  std::vector<std::string> out;
  head.collect_variables(out);
  for (const auto& b : body) b.collect_variables(out);
  return out;
}

std::string HornClause::str() const {
  std::string out = head.str();
  if (!body.empty()) {
    out += " <- ";
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (i) out += ", ";
      out += body[i].str();
    }
  }
  return out;
}

const Term* Substitution::find(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

void Substitution::bind(const std::string& var, const Term& t) {
  Substitution single;
  single.bindings_.emplace(var, t);
  for (auto& [name, value] : bindings_) {
    if (value.contains_variable(var)) value = single.apply(value);
  }
  bindings_[var] = t;
}

Term Substitution::apply(const Term& t) const {
  if (bindings_.empty()) return t;
  switch (t.kind()) {
    case Term::Kind::kVariable: {
      const Term* b = find(t.name());
      return b ? *b : t;
    }
    case Term::Kind::kCompound: {
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const auto& a : t.args()) args.push_back(apply(a));
      return Term::compound(t.name(), std::move(args));
    }
    default:
      return t;
  }
}

Atom Substitution::apply(const Atom& a) const {
  Atom out;
  out.predicate = a.predicate;
  out.args.reserve(a.args.size());
  for (const auto& t : a.args) out.args.push_back(apply(t));
  return out;
}

Substitution Substitution::restrict(const std::vector<std::string>& vars) const {
  Substitution out;
  for (const auto& v : vars) {
    if (const Term* b = find(v)) out.bindings_.emplace(v, *b);
  }
  return out;
}

std::string Substitution::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : bindings_) {
    if (!first) out += ", ";
    first = false;
    out += name + "->" + value.str();
  }
  return out + "}";
}

namespace {

bool unify_into(const Term& a, const Term& b, Substitution& s) {
  Term x = s.apply(a);
  Term y = s.apply(b);
  if (x.is_variable() && y.is_variable() && x.name() == y.name()) return true;
  if (x.is_variable()) {
    if (y.contains_variable(x.name())) return false;
    s.bind(x.name(), y);
    return true;
  }
  if (y.is_variable()) {
    if (x.contains_variable(y.name())) return false;
    s.bind(y.name(), x);
    return true;
  }
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Term::Kind::kConstant:
      return x.name() == y.name();
    case Term::Kind::kSkolem:
      return x.skolem_index() == y.skolem_index();
    case Term::Kind::kCompound:
      if (x.name() != y.name() || x.arity() != y.arity()) return false;
      for (std::size_t i = 0; i < x.arity(); ++i) {
        if (!unify_into(x.args()[i], y.args()[i], s)) return false;
      }
      return true;
    default:
      return false;
  }
}

}  // namespace

std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s) {
  Substitution out = s;
  if (!unify_into(a, b, out)) return std::nullopt;
  return out;
}

std::optional<Substitution> unify(const Atom& a, const Atom& b, const Substitution& s) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
  Substitution out = s;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!unify_into(a.args[i], b.args[i], out)) return std::nullopt;
  }
  return out;
}

Term rename_apart(const Term& t, std::int64_t salt) {
  return rename_term(t, "_" + std::to_string(salt));
}

Atom rename_apart(const Atom& a, std::int64_t salt) {
  const std::string suffix = "_" + std::to_string(salt);
  Atom out;
  out.predicate = a.predicate;
  for (const auto& t : a.args) out.args.push_back(rename_term(t, suffix));
  return out;
}

HornClause rename_apart(const HornClause& c, std::int64_t salt) {
  HornClause out;
  out.head = rename_apart(c.head, salt);
  for (const auto& b : c.body) out.body.push_back(rename_apart(b, salt));
  out.level = c.level;
  out.weight = c.weight;
  return out;
}

// ---------------------------------------------------------------------------
// Reading.

void TermReader::skip_space() {
  while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
}

bool TermReader::at_end() {
  skip_space();
  return pos_ >= text_.size();
}

char TermReader::peek() {
  skip_space();
  return pos_ < text_.size() ? text_[pos_] : '\0';
}

bool TermReader::consume(char c) {
  if (peek() == c) {
    ++pos_;
    return true;
  }
  return false;
}

void TermReader::expect(char c) {
  if (!consume(c)) fail(std::string("expected '") + c + "'");
}

bool TermReader::consume_token(std::string_view tok) {
  skip_space();
  if (text_.substr(pos_, tok.size()) == tok) {
    pos_ += tok.size();
    return true;
  }
  return false;
}

void TermReader::fail(const std::string& msg) const {
  std::ostringstream os;
  os << msg << " at column " << (pos_ + 1);
  throw SyntaxError(os.str(), pos_ + 1);
}

std::string TermReader::read_identifier() {
  skip_space();
  std::size_t start = pos_;
  if (pos_ < text_.size() && is_ident_start(text_[pos_])) {
    ++pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    // A trailing hyphen belongs to whatever follows.
    while (pos_ > start + 1 && text_[pos_ - 1] == '-') --pos_;
  }
  if (pos_ == start) fail("expected identifier");
  return std::string(text_.substr(start, pos_ - start));
}

double TermReader::read_number() {
  skip_space();
  std::size_t start = pos_;
  if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
  while (pos_ < text_.size() &&
         (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
    ++pos_;
  }
  // Do not swallow a statement-terminating period.
  while (pos_ > start && text_[pos_ - 1] == '.') --pos_;
  std::string num(text_.substr(start, pos_ - start));
  try {
    std::size_t used = 0;
    double v = std::stod(num, &used);
    if (used != num.size()) fail("malformed number");
    return v;
  } catch (const std::logic_error&) {
    pos_ = start;
    fail("expected number");
  }
}

Term TermReader::read_primary() {
  char c = peek();
  if (c == '(') {
    ++pos_;
    Term inner = read_term();
    expect(')');
    return inner;
  }
  std::string name;
  bool quoted = false;
  if (c == '\'') {
    ++pos_;
    quoted = true;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated quoted constant");
      char ch = text_[pos_++];
      if (ch == '\\' && pos_ < text_.size()) {
        name += text_[pos_++];
      } else if (ch == '\'') {
        break;
      } else {
        name += ch;
      }
    }
  } else if (c == '@' || c == '&') {
    ++pos_;
    name = std::string(1, c);
    if (peek() != '(') fail("expected '(' after functor");
  } else {
    name = read_identifier();
  }
  if (pos_ < text_.size() && text_[pos_] == '(') {
    ++pos_;
    std::vector<Term> args;
    if (!consume(')')) {
      do {
        args.push_back(read_term());
      } while (consume(','));
      expect(')');
    }
    return Term::compound(name, std::move(args));
  }
  if (quoted) return Term::constant(name);
  if (name == "_") return Term::variable("_G" + std::to_string(++anon_));
  if (is_variable_name(name)) return Term::variable(name);
  if (is_skolem_name(name)) return Term::skolem(std::stoll(name.substr(3)));
  return Term::constant(name);
}

Term TermReader::read_term() {
  Term lhs = read_primary();
  if (peek() == '&') {
    ++pos_;
    Term rhs = read_term();
    return Term::compound("&", {std::move(lhs), std::move(rhs)});
  }
  return lhs;
}

Atom TermReader::read_atom() {
  std::size_t start = pos_;
  Term t = read_primary();
  auto atom = Atom::from_term(t);
  if (!atom || t.name() == "&") {
    pos_ = start;
    fail("expected atom");
  }
  return *atom;
}

std::vector<Atom> TermReader::read_atom_list() {
  std::vector<Atom> out;
  out.push_back(read_atom());
  while (consume(',')) out.push_back(read_atom());
  return out;
}

Term parse_term(std::string_view text) {
  TermReader r(text);
  Term t = r.read_term();
  if (!r.at_end()) r.fail("trailing input");
  return t;
}

Atom parse_atom(std::string_view text) {
  TermReader r(text);
  Atom a = r.read_atom();
  if (!r.at_end()) r.fail("trailing input");
  return a;
}

std::vector<Atom> parse_conjunction(std::string_view text) {
  TermReader r(text);
  if (r.at_end()) return {};
  auto atoms = r.read_atom_list();
  r.consume('.');
  if (!r.at_end()) r.fail("trailing input");
  return atoms;
}

HornClause parse_clause(std::string_view text) {
  TermReader r(text);
  HornClause c;
  c.head = r.read_atom();
  if (r.consume_token("<-") || r.consume_token(":-")) c.body = r.read_atom_list();
  r.consume('.');
  if (!r.at_end()) r.fail("trailing input");
  return c;
}

std::string quote_if_needed(const std::string& name) {
  bool plain = !name.empty() && is_ident_start(name[0]) && !is_variable_name(name) &&
               !is_skolem_name(name) && name.back() != '-' &&
               std::all_of(name.begin(), name.end(), is_ident_char);
  if (plain) return name;
  std::string out = "'";
  for (char c : name) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

}  // namespace logdoc
