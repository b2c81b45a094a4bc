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

#ifndef LOGDOC_TERM_HPP_
#define LOGDOC_TERM_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace logdoc {

// First-order term. Variables start uppercase (or '_'), constants lowercase
// or digits, Skolem constants print as sk-N.
class Term {
 public:
  enum class Kind { kVariable, kConstant, kSkolem, kCompound };

  Term() : kind_(Kind::kConstant), name_("true") {}

  static Term variable(std::string name);
  static Term constant(std::string name);
  static Term skolem(std::int64_t index);
  static Term compound(std::string functor, std::vector<Term> args);
  static Term integer(std::int64_t value) { return constant(std::to_string(value)); }

  Kind kind() const { return kind_; }
  bool is_variable() const { return kind_ == Kind::kVariable; }
  bool is_constant() const { return kind_ == Kind::kConstant; }
  bool is_skolem() const { return kind_ == Kind::kSkolem; }
  bool is_compound() const { return kind_ == Kind::kCompound; }
  // Constant or Skolem: the things that may appear in stored facts.
  bool is_atomic_value() const { return is_constant() || is_skolem(); }

  // Variable name, constant name or compound functor.
  const std::string& name() const { return name_; }
  std::int64_t skolem_index() const { return index_; }
  const std::vector<Term>& args() const { return args_; }
  std::size_t arity() const { return args_.size(); }

  // Integer value of a digit-only constant.
  std::optional<std::int64_t> as_integer() const;

  bool ground() const;
  bool contains_variable(const std::string& name) const;
  void collect_variables(std::vector<std::string>& out) const;

  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b);

 private:
  Kind kind_;
  std::string name_;
  std::int64_t index_ = 0;
  std::vector<Term> args_;
};

// Predicate application. The (predicate, arity) pair is the lookup key.
struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string pred, std::vector<Term> a)
      : predicate(std::move(pred)), args(std::move(a)) {}

  std::size_t arity() const { return args.size(); }
  std::string key() const { return predicate + "/" + std::to_string(args.size()); }
  bool ground() const;
  void collect_variables(std::vector<std::string>& out) const;
  std::string str() const;

  Term as_term() const { return Term::compound(predicate, args); }
  // Null when t is not a compound or constant.
  static std::optional<Atom> from_term(const Term& t);

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
  friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
  friend bool operator<(const Atom& a, const Atom& b);
};

// Rules carry an optional level tag (1, 2, 3) and a non-negative weight.
struct HornClause {
  Atom head;
  std::vector<Atom> body;
  std::optional<int> level;
  double weight = 1.0;

  bool is_fact() const { return body.empty(); }
  std::vector<std::string> variables() const;
  std::string str() const;

  friend bool operator==(const HornClause& a, const HornClause& b) {
    return a.head == b.head && a.body == b.body && a.level == b.level &&
           a.weight == b.weight;
  }
};

// Idempotent substitution: bound variables never occur in any binding.
class Substitution {
 public:
  Substitution() = default;

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::string, Term>& bindings() const { return bindings_; }
  const Term* find(const std::string& var) const;

  // Binds var to t (t already applied under *this, and not containing var).
  void bind(const std::string& var, const Term& t);

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;

  // Bindings restricted to the given variables.
  Substitution restrict(const std::vector<std::string>& vars) const;

  std::string str() const;

  friend bool operator==(const Substitution& a, const Substitution& b) {
    return a.bindings_ == b.bindings_;
  }

 private:
  std::map<std::string, Term> bindings_;
};

// Most general unifier extending s, with occurs check. nullopt on failure.
std::optional<Substitution> unify(const Term& a, const Term& b, const Substitution& s);
std::optional<Substitution> unify(const Atom& a, const Atom& b, const Substitution& s);
inline std::optional<Substitution> unify(const Term& a, const Term& b) {
  return unify(a, b, Substitution{});
}
inline std::optional<Substitution> unify(const Atom& a, const Atom& b) {
  return unify(a, b, Substitution{});
}

inline Term apply(const Substitution& s, const Term& t) { return s.apply(t); }
inline Atom apply(const Substitution& s, const Atom& a) { return s.apply(a); }

// Appends "_<salt>" to every variable name.
Term rename_apart(const Term& t, std::int64_t salt);
Atom rename_apart(const Atom& a, std::int64_t salt);
HornClause rename_apart(const HornClause& c, std::int64_t salt);

// Parse errors carry the column within the parsed text.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t column)
      : std::runtime_error(what), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

// Recursive-descent reader for the term syntax. Besides plain
// pred(arg,...) terms it accepts the build notation: infix `A & B`
// (right associative) and the `@(F, ...)` application functor.
class TermReader {
 public:
  explicit TermReader(std::string_view text, std::size_t anon_seed = 0)
      : text_(text), anon_(anon_seed) {}

  Term read_term();
  Atom read_atom();
  // Comma separated atoms up to (not including) a stop character or end.
  std::vector<Atom> read_atom_list();

  void skip_space();
  bool at_end();
  char peek();
  bool consume(char c);
  void expect(char c);
  // Consumes a literal token such as "<-" if present.
  bool consume_token(std::string_view tok);
  std::string read_identifier();
  double read_number();
  std::size_t position() const { return pos_; }
  std::string_view rest() const { return text_.substr(pos_); }
  [[noreturn]] void fail(const std::string& msg) const;

 private:
  Term read_primary();

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t anon_;
};

Term parse_term(std::string_view text);
Atom parse_atom(std::string_view text);
// Comma separated conjunction of atoms, optional trailing '.'.
std::vector<Atom> parse_conjunction(std::string_view text);
// "head <- b1, b2" or "head :- ..." or a bare fact.
HornClause parse_clause(std::string_view text);

// Atom text with quoting for constants that do not lex as identifiers.
std::string quote_if_needed(const std::string& name);

}  // namespace logdoc

#endif  // LOGDOC_TERM_HPP_
