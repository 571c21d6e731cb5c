#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hff/error.hpp"
#include "hff/hfset.hpp"

namespace hff {

class Formula;

/// Term of the surface language: variable, named parameter `$p`, HF literal,
/// or extension term `eps[x | body]`. Literals and eps-terms belong to the
/// extended language; pure formulas contain neither.
class Term {
 public:
  enum class K { Var, Param, Literal, Eps };

  static Term var(std::string name);
  static Term param(std::string name);
  static Term literal(HfSet value);
  static Term eps(std::string bound, Formula body);

  K kind() const;
  const std::string& name() const;  // Var/Param name, Eps bound variable
  const HfSet& value() const;       // Literal
  const Formula& body() const;      // Eps

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  const Node* raw() const { return node_.get(); }

 private:
  std::shared_ptr<const Node> node_;
};

/// Surface formula AST. `App` is the predicate-application atom F(t)/G(t),
/// legal only inside two-predicate class-equivalence formulas.
class Formula {
 public:
  enum class K { Mem, Eq, Not, And, Or, Implies, Iff, ForAll, Exists, App };

  struct Node {
    K kind;
    Term t1, t2;       // Mem/Eq both, App uses t1
    Formula f1, f2;    // connectives; quantifiers use f1
    std::string name;  // quantifier bound variable, or App predicate name
    Node(K k, Term a, Term b) : kind(k), t1(std::move(a)), t2(std::move(b)) {}
    Node(K k, Formula a) : kind(k), t1(nullptr), t2(nullptr), f1(std::move(a)) {}
    Node(K k, Formula a, Formula b)
        : kind(k), t1(nullptr), t2(nullptr), f1(std::move(a)), f2(std::move(b)) {}
    Node(K k, std::string n, Formula a)
        : kind(k), t1(nullptr), t2(nullptr), f1(std::move(a)), name(std::move(n)) {}
    Node(K k, std::string n, Term a)
        : kind(k), t1(std::move(a)), t2(nullptr), name(std::move(n)) {}
  };

  Formula() = default;  // empty handle; only used transiently during construction
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  bool valid() const { return node_ != nullptr; }
  K kind() const { return node_->kind; }
  const Term& t1() const { return node_->t1; }
  const Term& t2() const { return node_->t2; }
  const Formula& f1() const { return node_->f1; }
  const Formula& f2() const { return node_->f2; }
  const std::string& name() const { return node_->name; }
  const Node* raw() const { return node_.get(); }

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

 private:
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  K kind;
  std::string name;
  HfSet value;
  Formula body;
  Node(K k, std::string n) : kind(k), name(std::move(n)) {}
  explicit Node(HfSet v) : kind(K::Literal), value(std::move(v)) {}
  Node(std::string bound, Formula b) : kind(K::Eps), name(std::move(bound)), body(std::move(b)) {}
};

inline Term Term::var(std::string name) {
  return Term(std::make_shared<const Node>(K::Var, std::move(name)));
}
inline Term Term::param(std::string name) {
  return Term(std::make_shared<const Node>(K::Param, std::move(name)));
}
inline Term Term::literal(HfSet value) { return Term(std::make_shared<const Node>(std::move(value))); }
inline Term Term::eps(std::string bound, Formula body) {
  return Term(std::make_shared<const Node>(std::move(bound), std::move(body)));
}
inline Term::K Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const HfSet& Term::value() const { return node_->value; }
inline const Formula& Term::body() const { return node_->body; }

// Formula/term builders.
inline Formula mem(Term a, Term b) {
  return Formula(std::make_shared<const Formula::Node>(Formula::K::Mem, std::move(a), std::move(b)));
}
inline Formula eq(Term a, Term b) {
  return Formula(std::make_shared<const Formula::Node>(Formula::K::Eq, std::move(a), std::move(b)));
}
inline Formula f_not(Formula a) {
  return Formula(std::make_shared<const Formula::Node>(Formula::K::Not, std::move(a)));
}
inline Formula f_and(Formula a, Formula b) {
  return Formula(std::make_shared<const Formula::Node>(Formula::K::And, std::move(a), std::move(b)));
}
inline Formula f_or(Formula a, Formula b) {
  return Formula(std::make_shared<const Formula::Node>(Formula::K::Or, std::move(a), std::move(b)));
}
inline Formula f_implies(Formula a, Formula b) {
  return Formula(std::make_shared<const Formula::Node>(Formula::K::Implies, std::move(a), std::move(b)));
}
inline Formula f_iff(Formula a, Formula b) {
  return Formula(std::make_shared<const Formula::Node>(Formula::K::Iff, std::move(a), std::move(b)));
}
inline Formula forall(std::string v, Formula a) {
  return Formula(std::make_shared<const Formula::Node>(Formula::K::ForAll, std::move(v), std::move(a)));
}
inline Formula exists(std::string v, Formula a) {
  return Formula(std::make_shared<const Formula::Node>(Formula::K::Exists, std::move(v), std::move(a)));
}
inline Formula app(std::string pred, Term t) {
  return Formula(std::make_shared<const Formula::Node>(Formula::K::App, std::move(pred), std::move(t)));
}

inline bool Term::operator==(const Term& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case K::Var:
    case K::Param:
      return node_->name == o.node_->name;
    case K::Literal:
      return node_->value == o.node_->value;
    case K::Eps:
      return node_->name == o.node_->name && node_->body == o.node_->body;
  }
  return false;
}

inline bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case K::Mem:
    case K::Eq:
      return node_->t1 == o.node_->t1 && node_->t2 == o.node_->t2;
    case K::Not:
      return node_->f1 == o.node_->f1;
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Iff:
      return node_->f1 == o.node_->f1 && node_->f2 == o.node_->f2;
    case K::ForAll:
    case K::Exists:
      return node_->name == o.node_->name && node_->f1 == o.node_->f1;
    case K::App:
      return node_->name == o.node_->name && node_->t1 == o.node_->t1;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Free variables and purity scans.

struct FreeVars {
  std::set<std::string> vars;    // plain identifiers occurring free
  std::set<std::string> params;  // $-parameters (always free)

  std::set<std::string> all() const {
    std::set<std::string> s = vars;
    s.insert(params.begin(), params.end());
    return s;
  }
};

namespace detail {

inline void free_vars_term(const Term& t, std::set<std::string>& bound, FreeVars& out);

inline void free_vars_formula(const Formula& f, std::set<std::string>& bound, FreeVars& out) {
  switch (f.kind()) {
    case Formula::K::Mem:
    case Formula::K::Eq:
      free_vars_term(f.t1(), bound, out);
      free_vars_term(f.t2(), bound, out);
      return;
    case Formula::K::App:
      free_vars_term(f.t1(), bound, out);
      return;
    case Formula::K::Not:
      free_vars_formula(f.f1(), bound, out);
      return;
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies:
    case Formula::K::Iff:
      free_vars_formula(f.f1(), bound, out);
      free_vars_formula(f.f2(), bound, out);
      return;
    case Formula::K::ForAll:
    case Formula::K::Exists: {
      bool inserted = bound.insert(f.name()).second;
      free_vars_formula(f.f1(), bound, out);
      if (inserted) bound.erase(f.name());
      return;
    }
  }
}

inline void free_vars_term(const Term& t, std::set<std::string>& bound, FreeVars& out) {
  switch (t.kind()) {
    case Term::K::Var:
      if (!bound.count(t.name())) out.vars.insert(t.name());
      return;
    case Term::K::Param:
      out.params.insert(t.name());
      return;
    case Term::K::Literal:
      return;
    case Term::K::Eps: {
      bool inserted = bound.insert(t.name()).second;
      free_vars_formula(t.body(), bound, out);
      if (inserted) bound.erase(t.name());
      return;
    }
  }
}

}  // namespace detail

inline FreeVars free_vars(const Formula& f) {
  FreeVars out;
  std::set<std::string> bound;
  detail::free_vars_formula(f, bound, out);
  return out;
}

/// True when the formula contains no eps-terms, no HF literals, and no
/// predicate applications.
inline bool is_pure(const Formula& f) {
  auto term_pure = [](const Term& t) {
    return t.kind() == Term::K::Var || t.kind() == Term::K::Param;
  };
  switch (f.kind()) {
    case Formula::K::Mem:
    case Formula::K::Eq:
      return term_pure(f.t1()) && term_pure(f.t2());
    case Formula::K::App:
      return false;
    case Formula::K::Not:
      return is_pure(f.f1());
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies:
    case Formula::K::Iff:
      return is_pure(f.f1()) && is_pure(f.f2());
    case Formula::K::ForAll:
    case Formula::K::Exists:
      return is_pure(f.f1());
  }
  return false;
}

inline bool has_eps(const Formula& f) {
  auto term_has = [](const Term& t) { return t.kind() == Term::K::Eps; };
  switch (f.kind()) {
    case Formula::K::Mem:
    case Formula::K::Eq:
      return term_has(f.t1()) || term_has(f.t2());
    case Formula::K::App:
      return term_has(f.t1());
    case Formula::K::Not:
      return has_eps(f.f1());
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies:
    case Formula::K::Iff:
      return has_eps(f.f1()) || has_eps(f.f2());
    case Formula::K::ForAll:
    case Formula::K::Exists:
      return has_eps(f.f1());
  }
  return false;
}

inline std::size_t node_count(const Formula& f);

namespace detail {
inline std::size_t node_count_term(const Term& t) {
  if (t.kind() == Term::K::Eps) return 1 + node_count(t.body());
  return 1;
}
}  // namespace detail

inline std::size_t node_count(const Formula& f) {
  switch (f.kind()) {
    case Formula::K::Mem:
    case Formula::K::Eq:
      return 1 + detail::node_count_term(f.t1()) + detail::node_count_term(f.t2());
    case Formula::K::App:
      return 1 + detail::node_count_term(f.t1());
    case Formula::K::Not:
    case Formula::K::ForAll:
    case Formula::K::Exists:
      return 1 + node_count(f.f1());
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies:
    case Formula::K::Iff:
      return 1 + node_count(f.f1()) + node_count(f.f2());
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Printer. Binding levels: iff=1, implies=2, or=3, and=4, unary=5, atom=6.
// '->' and '<->' associate right, 'or' and 'and' left; parentheses appear
// exactly where reparsing would otherwise change the tree.

namespace detail {

inline void print_formula(const Formula& f, int level, std::string& out);

inline void print_term(const Term& t, std::string& out) {
  switch (t.kind()) {
    case Term::K::Var:
      out += t.name();
      return;
    case Term::K::Param:
      out += "$";
      out += t.name();
      return;
    case Term::K::Literal:
      out += t.value().to_string();
      return;
    case Term::K::Eps:
      out += "eps[";
      out += t.name();
      out += " | ";
      print_formula(t.body(), 1, out);
      out += "]";
      return;
  }
}

inline void print_formula(const Formula& f, int level, std::string& out) {
  auto paren = [&](int mine, auto&& body) {
    if (mine < level) {
      out += "(";
      body();
      out += ")";
    } else {
      body();
    }
  };
  switch (f.kind()) {
    case Formula::K::Mem:
      print_term(f.t1(), out);
      out += " in ";
      print_term(f.t2(), out);
      return;
    case Formula::K::Eq:
      print_term(f.t1(), out);
      out += " = ";
      print_term(f.t2(), out);
      return;
    case Formula::K::App:
      out += f.name();
      out += "(";
      print_term(f.t1(), out);
      out += ")";
      return;
    case Formula::K::Not:
      paren(5, [&] {
        out += "not ";
        print_formula(f.f1(), 5, out);
      });
      return;
    case Formula::K::ForAll:
      paren(5, [&] {
        out += "all " + f.name() + " ";
        print_formula(f.f1(), 5, out);
      });
      return;
    case Formula::K::Exists:
      paren(5, [&] {
        out += "ex " + f.name() + " ";
        print_formula(f.f1(), 5, out);
      });
      return;
    case Formula::K::And:
      paren(4, [&] {
        print_formula(f.f1(), 4, out);
        out += " and ";
        print_formula(f.f2(), 5, out);
      });
      return;
    case Formula::K::Or:
      paren(3, [&] {
        print_formula(f.f1(), 3, out);
        out += " or ";
        print_formula(f.f2(), 4, out);
      });
      return;
    case Formula::K::Implies:
      paren(2, [&] {
        print_formula(f.f1(), 3, out);
        out += " -> ";
        print_formula(f.f2(), 2, out);
      });
      return;
    case Formula::K::Iff:
      paren(1, [&] {
        print_formula(f.f1(), 2, out);
        out += " <-> ";
        print_formula(f.f2(), 1, out);
      });
      return;
  }
}

}  // namespace detail

inline std::string print(const Formula& f) {
  std::string out;
  detail::print_formula(f, 1, out);
  return out;
}

inline std::string print(const Term& t) {
  std::string out;
  detail::print_term(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser. Grammar (whitespace-insensitive):
//   formula := iff ; iff := imp ('<->' imp)* ; imp := or ('->' or)* ;
//   or := and ('or' and)* ; and := unary ('and' unary)* ;
//   unary := 'not' unary | 'all' IDENT unary | 'ex' IDENT unary
//          | '(' formula ')' | atom ;
//   atom := IDENT '(' term ')' | term ('in'|'=') term ;
//   term := IDENT | '$' IDENT | hf-literal | 'eps' '[' IDENT '|' formula ']' .

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = parse_iff();
    skip_ws();
    if (pos_ != text_.size()) throw_syntax(pos_, {"end of input"});
    return f;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  static bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek_sym(std::string_view s) {
    skip_ws();
    return text_.substr(pos_, s.size()) == s;
  }

  bool eat_sym(std::string_view s) {
    if (!peek_sym(s)) return false;
    pos_ += s.size();
    return true;
  }

  // Keywords are matched as whole words.
  bool peek_word(std::string_view w) {
    skip_ws();
    if (text_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    return end >= text_.size() || !is_ident_char(text_[end]);
  }

  bool eat_word(std::string_view w) {
    if (!peek_word(w)) return false;
    pos_ += w.size();
    return true;
  }

  static bool is_keyword(std::string_view s) {
    return s == "in" || s == "not" || s == "and" || s == "or" || s == "all" || s == "ex" ||
           s == "eps";
  }

  std::string parse_ident() {
    skip_ws();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) throw_syntax(pos_, {"identifier"});
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    std::string id(text_.substr(start, pos_ - start));
    if (is_keyword(id)) throw_syntax(start, {"identifier"}, "'" + id + "' is a keyword");
    return id;
  }

  Formula parse_iff() {
    Formula l = parse_imp();
    if (eat_sym("<->")) return f_iff(std::move(l), parse_iff());
    return l;
  }

  Formula parse_imp() {
    Formula l = parse_or();
    skip_ws();
    // careful: '<->' also starts with '<', but '->' does not overlap it
    if (peek_sym("->")) {
      pos_ += 2;
      return f_implies(std::move(l), parse_imp());
    }
    return l;
  }

  Formula parse_or() {
    Formula l = parse_and();
    while (eat_word("or")) l = f_or(std::move(l), parse_and());
    return l;
  }

  Formula parse_and() {
    Formula l = parse_unary();
    while (eat_word("and")) l = f_and(std::move(l), parse_unary());
    return l;
  }

  Formula parse_unary() {
    if (eat_word("not")) return f_not(parse_unary());
    if (eat_word("all")) {
      std::string v = parse_ident();
      return forall(std::move(v), parse_unary());
    }
    if (eat_word("ex")) {
      std::string v = parse_ident();
      return exists(std::move(v), parse_unary());
    }
    if (eat_sym("(")) {
      Formula f = parse_iff();
      skip_ws();
      if (!eat_sym(")")) throw_syntax(pos_, {"')'"});
      return f;
    }
    return parse_atom();
  }

  Formula parse_atom() {
    skip_ws();
    // predicate application: IDENT '(' term ')'
    if (pos_ < text_.size() && is_ident_start(text_[pos_])) {
      std::size_t save = pos_;
      std::size_t p = pos_;
      while (p < text_.size() && is_ident_char(text_[p])) ++p;
      std::string id(text_.substr(pos_, p - pos_));
      if (!is_keyword(id)) {
        std::size_t q = p;
        while (q < text_.size() && std::isspace(static_cast<unsigned char>(text_[q]))) ++q;
        if (q < text_.size() && text_[q] == '(') {
          pos_ = q + 1;
          Term t = parse_term();
          skip_ws();
          if (!eat_sym(")")) throw_syntax(pos_, {"')'"});
          return app(std::move(id), std::move(t));
        }
      }
      pos_ = save;
    }
    Term a = parse_term();
    skip_ws();
    if (eat_word("in")) return mem(std::move(a), parse_term());
    if (eat_sym("=")) return eq(std::move(a), parse_term());
    throw_syntax(pos_, {"'in'", "'='"});
  }

  Term parse_term() {
    skip_ws();
    if (pos_ >= text_.size()) throw_syntax(pos_, {"term"});
    char c = text_[pos_];
    if (c == '$') {
      ++pos_;
      return Term::param(parse_ident());
    }
    if (c == '{' || c == '#') return Term::literal(HfSet::parse_at(text_, pos_));
    if (eat_word("eps")) {
      skip_ws();
      if (!eat_sym("[")) throw_syntax(pos_, {"'['"});
      std::string v = parse_ident();
      skip_ws();
      if (!eat_sym("|")) throw_syntax(pos_, {"'|'"});
      Formula body = parse_iff();
      skip_ws();
      if (!eat_sym("]")) throw_syntax(pos_, {"']'"});
      return Term::eps(std::move(v), std::move(body));
    }
    if (is_ident_start(c)) return Term::var(parse_ident());
    throw_syntax(pos_, {"term"});
  }
};

}  // namespace detail

inline Formula parse(std::string_view text) { return detail::Parser(text).parse(); }

}  // namespace hff
