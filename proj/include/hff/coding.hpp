#pragma once

#include <cstdint>

#include "hff/core.hpp"
#include "hff/error.hpp"
#include "hff/hfset.hpp"

namespace hff {

// Structural HF coding of core formulas. Every node is the pair
// (von_neumann(tag), payload) with the frozen tag table
//   Mem=0 Eq=1 Not=2 And=3 Exists=4 VarIndex=5 SlotX=6 SlotP=7.
// Payloads: atoms and And carry a pair of child codes, Not/Exists carry the
// child code, VarIndex carries von_neumann(k), the slots carry von_neumann(0).

namespace detail {

inline HfSet code_node(unsigned tag, const HfSet& payload) {
  return HfSet::kuratowski_pair(HfSet::von_neumann(tag), payload);
}

inline HfSet code_term(CoreTerm t) {
  switch (t.kind) {
    case CoreTerm::K::SlotX:
      return code_node(6, HfSet::empty());
    case CoreTerm::K::SlotP:
      return code_node(7, HfSet::empty());
    case CoreTerm::K::Var:
      return code_node(5, HfSet::von_neumann(t.index));
  }
  throw Error(Errc::decode_error, "unreachable term kind");
}

// Reads back a von Neumann natural; DecodeError on any other set.
inline unsigned decode_vn(const HfSet& s) {
  std::size_t n = s.cardinality();
  if (!(s == HfSet::von_neumann(n)))
    throw Error(Errc::decode_error, "not a von Neumann natural: " + s.to_string());
  return unsigned(n);
}

inline CoreTerm decode_term(const HfSet& c) {
  auto [tag_set, payload] = c.unpair();
  unsigned tag = decode_vn(tag_set);
  switch (tag) {
    case 6:
      if (!payload.is_empty()) throw Error(Errc::decode_error, "SlotX payload must be empty");
      return CoreTerm::slot_x();
    case 7:
      if (!payload.is_empty()) throw Error(Errc::decode_error, "SlotP payload must be empty");
      return CoreTerm::slot_p();
    case 5:
      return CoreTerm::var(decode_vn(payload));
    default:
      throw Error(Errc::decode_error, "expected a term tag, got " + std::to_string(tag));
  }
}

inline CoreFormula decode_rec(const HfSet& c) {
  std::pair<HfSet, HfSet> p;
  try {
    p = c.unpair();
  } catch (const Error&) {
    throw Error(Errc::decode_error, "code node is not a pair: " + c.to_string());
  }
  unsigned tag = decode_vn(p.first);
  switch (tag) {
    case 0:
    case 1: {
      auto [a, b] = p.second.unpair();
      CoreTerm ta = decode_term(a), tb = decode_term(b);
      return tag == 0 ? CoreFormula::atom_mem(ta, tb) : CoreFormula::atom_eq(ta, tb);
    }
    case 2:
      return CoreFormula::make_not(decode_rec(p.second));
    case 3: {
      auto [a, b] = p.second.unpair();
      return CoreFormula::make_and(decode_rec(a), decode_rec(b));
    }
    case 4:
      return CoreFormula::make_exists(decode_rec(p.second));
    default:
      throw Error(Errc::decode_error, "expected a formula tag, got " + std::to_string(tag));
  }
}

}  // namespace detail

inline HfSet code_formula(const CoreFormula& f) {
  switch (f.kind()) {
    case CoreFormula::K::Mem:
      return detail::code_node(
          0, HfSet::kuratowski_pair(detail::code_term(f.a()), detail::code_term(f.b())));
    case CoreFormula::K::Eq:
      return detail::code_node(
          1, HfSet::kuratowski_pair(detail::code_term(f.a()), detail::code_term(f.b())));
    case CoreFormula::K::Not:
      return detail::code_node(2, code_formula(f.c1()));
    case CoreFormula::K::And:
      return detail::code_node(
          3, HfSet::kuratowski_pair(code_formula(f.c1()), code_formula(f.c2())));
    case CoreFormula::K::Exists:
      return detail::code_node(4, code_formula(f.c1()));
  }
  throw Error(Errc::decode_error, "unreachable formula kind");
}

inline CoreFormula decode_formula(const HfSet& c) {
  CoreFormula f;
  try {
    f = detail::decode_rec(c);
  } catch (const Error& e) {
    if (e.code() == Errc::decode_error) throw;
    throw Error(Errc::decode_error, std::string("malformed code: ") + e.what());
  }
  if (!f.wellformed()) throw Error(Errc::decode_error, "decoded formula has unbound indices");
  return f;
}

}  // namespace hff
