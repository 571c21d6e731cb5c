#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hff/error.hpp"
#include "hff/syntax.hpp"

namespace hff {

// Frozen token order for the core language; everything downstream of the
// enumeration (epsilon values, indices, codes) depends on these ids.
enum : std::uint32_t {
  kTokMem = 0,
  kTokEq = 1,
  kTokNot = 2,
  kTokAnd = 3,
  kTokExists = 4,
  kTokSlotX = 5,
  kTokSlotP = 6,
  kTokVar0 = 7,  // de Bruijn index k is token kTokVar0 + k
};

struct CoreTerm {
  enum class K : std::uint8_t { SlotX, SlotP, Var };
  K kind = K::SlotX;
  unsigned index = 0;  // de Bruijn index for K::Var

  static CoreTerm slot_x() { return {K::SlotX, 0}; }
  static CoreTerm slot_p() { return {K::SlotP, 0}; }
  static CoreTerm var(unsigned i) { return {K::Var, i}; }

  std::uint32_t token() const {
    switch (kind) {
      case K::SlotX: return kTokSlotX;
      case K::SlotP: return kTokSlotP;
      case K::Var: return kTokVar0 + index;
    }
    return 0;
  }

  bool operator==(const CoreTerm& o) const { return kind == o.kind && index == o.index; }
};

/// Core formula: connectives {Not, And, Exists} over atoms {Mem, Eq}, with de
/// Bruijn bound variables and two free slots X (object) and P (parameter).
/// Values are immutable and valid by construction (indices under binders).
class CoreFormula {
 public:
  enum class K : std::uint8_t { Mem, Eq, Not, And, Exists };

  struct Node {
    K kind;
    CoreTerm a, b;
    CoreFormula c1, c2;
    Node(K k, CoreTerm x, CoreTerm y) : kind(k), a(x), b(y) {}
    Node(K k, CoreFormula f) : kind(k), c1(std::move(f)) {}
    Node(K k, CoreFormula f, CoreFormula g) : kind(k), c1(std::move(f)), c2(std::move(g)) {}
  };

  CoreFormula() = default;
  bool valid() const { return node_ != nullptr; }

  static CoreFormula atom_mem(CoreTerm a, CoreTerm b) {
    return CoreFormula(std::make_shared<const Node>(K::Mem, a, b));
  }
  static CoreFormula atom_eq(CoreTerm a, CoreTerm b) {
    return CoreFormula(std::make_shared<const Node>(K::Eq, a, b));
  }
  static CoreFormula make_not(CoreFormula f) {
    return CoreFormula(std::make_shared<const Node>(K::Not, std::move(f)));
  }
  static CoreFormula make_and(CoreFormula f, CoreFormula g) {
    return CoreFormula(std::make_shared<const Node>(K::And, std::move(f), std::move(g)));
  }
  static CoreFormula make_exists(CoreFormula f) {
    return CoreFormula(std::make_shared<const Node>(K::Exists, std::move(f)));
  }

  K kind() const { return node_->kind; }
  CoreTerm a() const { return node_->a; }
  CoreTerm b() const { return node_->b; }
  const CoreFormula& c1() const { return node_->c1; }
  const CoreFormula& c2() const { return node_->c2; }

  std::vector<std::uint32_t> tokens() const {
    std::vector<std::uint32_t> out;
    emit(out);
    return out;
  }

  std::size_t token_length() const {
    switch (kind()) {
      case K::Mem:
      case K::Eq:
        return 3;
      case K::Not:
      case K::Exists:
        return 1 + c1().token_length();
      case K::And:
        return 1 + c1().token_length() + c2().token_length();
    }
    return 0;
  }

  // Injective byte serialization; also the cache key. One byte per token
  // (token ids 0..254), an 0xFF-prefixed big-endian u32 for deeper indices.
  std::string serial() const {
    std::string out;
    for (auto t : tokens()) {
      if (t < 255) {
        out.push_back(char(static_cast<unsigned char>(t)));
      } else {
        out.push_back(char(0xFF));
        out.push_back(char((t >> 24) & 0xFF));
        out.push_back(char((t >> 16) & 0xFF));
        out.push_back(char((t >> 8) & 0xFF));
        out.push_back(char(t & 0xFF));
      }
    }
    return out;
  }

  bool operator==(const CoreFormula& o) const {
    if (node_ == o.node_) return true;
    if (!node_ || !o.node_) return false;
    if (kind() != o.kind()) return false;
    switch (kind()) {
      case K::Mem:
      case K::Eq:
        return a() == o.a() && b() == o.b();
      case K::Not:
      case K::Exists:
        return c1() == o.c1();
      case K::And:
        return c1() == o.c1() && c2() == o.c2();
    }
    return false;
  }
  bool operator!=(const CoreFormula& o) const { return !(*this == o); }

  // Checks de Bruijn validity of a subtree at a given quantifier depth.
  bool wellformed(unsigned depth = 0) const {
    auto term_ok = [&](CoreTerm t) { return t.kind != CoreTerm::K::Var || t.index < depth; };
    switch (kind()) {
      case K::Mem:
      case K::Eq:
        return term_ok(a()) && term_ok(b());
      case K::Not:
        return c1().wellformed(depth);
      case K::And:
        return c1().wellformed(depth) && c2().wellformed(depth);
      case K::Exists:
        return c1().wellformed(depth + 1);
    }
    return false;
  }

  /// Parses a prefix token sequence; throws DecodeError unless it is exactly
  /// one well-formed core formula.
  static CoreFormula from_tokens(const std::vector<std::uint32_t>& toks) {
    std::size_t pos = 0;
    CoreFormula f = parse_prefix(toks, pos, 0);
    if (pos != toks.size()) throw Error(Errc::decode_error, "trailing tokens");
    return f;
  }

 private:
  std::shared_ptr<const Node> node_;
  explicit CoreFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  void emit(std::vector<std::uint32_t>& out) const {
    switch (kind()) {
      case K::Mem:
        out.push_back(kTokMem);
        out.push_back(a().token());
        out.push_back(b().token());
        return;
      case K::Eq:
        out.push_back(kTokEq);
        out.push_back(a().token());
        out.push_back(b().token());
        return;
      case K::Not:
        out.push_back(kTokNot);
        c1().emit(out);
        return;
      case K::And:
        out.push_back(kTokAnd);
        c1().emit(out);
        c2().emit(out);
        return;
      case K::Exists:
        out.push_back(kTokExists);
        c1().emit(out);
        return;
    }
  }

  static CoreTerm term_from_token(std::uint32_t t, unsigned depth) {
    if (t == kTokSlotX) return CoreTerm::slot_x();
    if (t == kTokSlotP) return CoreTerm::slot_p();
    if (t >= kTokVar0) {
      unsigned idx = t - kTokVar0;
      if (idx >= depth) throw Error(Errc::decode_error, "de Bruijn index out of scope");
      return CoreTerm::var(idx);
    }
    throw Error(Errc::decode_error, "expected term token");
  }

  static CoreFormula parse_prefix(const std::vector<std::uint32_t>& toks, std::size_t& pos,
                                  unsigned depth) {
    if (pos >= toks.size()) throw Error(Errc::decode_error, "truncated token sequence");
    std::uint32_t t = toks[pos++];
    switch (t) {
      case kTokMem:
      case kTokEq: {
        if (pos + 1 >= toks.size()) throw Error(Errc::decode_error, "truncated atom");
        CoreTerm a = term_from_token(toks[pos++], depth);
        CoreTerm b = term_from_token(toks[pos++], depth);
        return t == kTokMem ? atom_mem(a, b) : atom_eq(a, b);
      }
      case kTokNot:
        return make_not(parse_prefix(toks, pos, depth));
      case kTokAnd: {
        CoreFormula f = parse_prefix(toks, pos, depth);
        CoreFormula g = parse_prefix(toks, pos, depth);
        return make_and(std::move(f), std::move(g));
      }
      case kTokExists:
        return make_exists(parse_prefix(toks, pos, depth + 1));
      default:
        throw Error(Errc::decode_error, "expected formula token");
    }
  }
};

// ---------------------------------------------------------------------------
// Normalization of pure surface formulas into the core language.

namespace detail {

inline CoreFormula normalize_rec(const Formula& f, const std::string& object_var,
                                 const std::string& param_var, std::vector<std::string>& bound) {
  auto resolve = [&](const Term& t) -> CoreTerm {
    if (t.kind() == Term::K::Literal || t.kind() == Term::K::Eps)
      throw Error(Errc::not_pure, "extended term in pure context: " + print(t));
    if (t.kind() == Term::K::Var) {
      for (std::size_t i = bound.size(); i-- > 0;)
        if (bound[i] == t.name()) return CoreTerm::var(unsigned(bound.size() - 1 - i));
    }
    if (t.name() == object_var) return CoreTerm::slot_x();
    if (t.name() == param_var) return CoreTerm::slot_p();
    throw Error(Errc::unbound_variable, "free variable '" + t.name() + "'");
  };
  switch (f.kind()) {
    case Formula::K::Mem:
      return CoreFormula::atom_mem(resolve(f.t1()), resolve(f.t2()));
    case Formula::K::Eq:
      return CoreFormula::atom_eq(resolve(f.t1()), resolve(f.t2()));
    case Formula::K::App:
      throw Error(Errc::not_pure, "predicate application in pure context");
    case Formula::K::Not:
      return CoreFormula::make_not(normalize_rec(f.f1(), object_var, param_var, bound));
    case Formula::K::And:
      return CoreFormula::make_and(normalize_rec(f.f1(), object_var, param_var, bound),
                                   normalize_rec(f.f2(), object_var, param_var, bound));
    case Formula::K::Or:
      // a or b  ==  not (not a and not b)
      return CoreFormula::make_not(CoreFormula::make_and(
          CoreFormula::make_not(normalize_rec(f.f1(), object_var, param_var, bound)),
          CoreFormula::make_not(normalize_rec(f.f2(), object_var, param_var, bound))));
    case Formula::K::Implies:
      // a -> b  ==  not (a and not b)
      return CoreFormula::make_not(CoreFormula::make_and(
          normalize_rec(f.f1(), object_var, param_var, bound),
          CoreFormula::make_not(normalize_rec(f.f2(), object_var, param_var, bound))));
    case Formula::K::Iff: {
      // a <-> b  ==  not(a and not b) and not(b and not a)
      CoreFormula a1 = normalize_rec(f.f1(), object_var, param_var, bound);
      CoreFormula b1 = normalize_rec(f.f2(), object_var, param_var, bound);
      return CoreFormula::make_and(
          CoreFormula::make_not(CoreFormula::make_and(a1, CoreFormula::make_not(b1))),
          CoreFormula::make_not(CoreFormula::make_and(b1, CoreFormula::make_not(a1))));
    }
    case Formula::K::Exists: {
      bound.push_back(f.name());
      CoreFormula body = normalize_rec(f.f1(), object_var, param_var, bound);
      bound.pop_back();
      return CoreFormula::make_exists(std::move(body));
    }
    case Formula::K::ForAll: {
      // all v f  ==  not ex v not f
      bound.push_back(f.name());
      CoreFormula body = normalize_rec(f.f1(), object_var, param_var, bound);
      bound.pop_back();
      return CoreFormula::make_not(
          CoreFormula::make_exists(CoreFormula::make_not(std::move(body))));
    }
  }
  throw Error(Errc::not_pure, "unreachable formula kind");
}

}  // namespace detail

/// Carries a pure formula with free variables among {object_var, param_var}
/// into the core language, with X = object_var and P = param_var.
inline CoreFormula normalize(const Formula& f, const std::string& object_var,
                             const std::string& param_var) {
  std::vector<std::string> bound;
  return detail::normalize_rec(f, object_var, param_var, bound);
}

/// Renders a core formula back into the surface language, with X and P given
/// names and bound variables named <bound_prefix>0, <bound_prefix>1, ... by
/// binder depth. P renders as a parameter reference.
inline Formula surface_of_core(const CoreFormula& c, const std::string& object_name = "x",
                               const std::string& param_name = "p",
                               const std::string& bound_prefix = "v", unsigned depth = 0) {
  auto term = [&](CoreTerm t) -> Term {
    switch (t.kind) {
      case CoreTerm::K::SlotX:
        return Term::var(object_name);
      case CoreTerm::K::SlotP:
        return Term::param(param_name);
      case CoreTerm::K::Var:
        return Term::var(bound_prefix + std::to_string(depth - 1 - t.index));
    }
    return Term::var(object_name);
  };
  switch (c.kind()) {
    case CoreFormula::K::Mem:
      return mem(term(c.a()), term(c.b()));
    case CoreFormula::K::Eq:
      return eq(term(c.a()), term(c.b()));
    case CoreFormula::K::Not:
      return f_not(surface_of_core(c.c1(), object_name, param_name, bound_prefix, depth));
    case CoreFormula::K::And:
      return f_and(surface_of_core(c.c1(), object_name, param_name, bound_prefix, depth),
                   surface_of_core(c.c2(), object_name, param_name, bound_prefix, depth));
    case CoreFormula::K::Exists:
      return exists(bound_prefix + std::to_string(depth),
                    surface_of_core(c.c1(), object_name, param_name, bound_prefix, depth + 1));
  }
  throw Error(Errc::decode_error, "unreachable core kind");
}

}  // namespace hff
