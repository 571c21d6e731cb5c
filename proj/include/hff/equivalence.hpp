#pragma once

#include <functional>
#include <string>
#include <utility>

#include "hff/bitset.hpp"
#include "hff/error.hpp"
#include "hff/model.hpp"
#include "hff/syntax.hpp"

namespace hff {

/// A pluggable notion of equivalence between class extensions over a fixed
/// universe. Extensional and Equinumerous are equivalences by construction;
/// first-order formulas and external comparators are validated on use against
/// the extensions a search encounters.
class ClassEquivalence {
 public:
  enum class Kind { Extensional, Equinumerous, FirstOrder, External };
  using Comparator = std::function<bool(const Universe&, const Bitset&, const Bitset&)>;

  static ClassEquivalence extensional() { return ClassEquivalence(Kind::Extensional, "extensional"); }

  static ClassEquivalence equinumerous() { return ClassEquivalence(Kind::Equinumerous, "equinumerous"); }

  /// phi is a closed formula over 'in'/'=' whose only atoms besides those are
  /// applications F(t), G(t) of the two class predicates being compared.
  static ClassEquivalence first_order(Formula phi) {
    validate_equiv_formula(phi);
    ClassEquivalence e(Kind::FirstOrder, "formula:" + print(phi));
    e.formula_ = std::move(phi);
    return e;
  }

  static ClassEquivalence external(std::string name, Comparator fn) {
    ClassEquivalence e(Kind::External, "external:" + name);
    e.comparator_ = std::move(fn);
    return e;
  }

  Kind kind() const { return kind_; }
  const std::string& descriptor() const { return descriptor_; }

  bool needs_validation() const {
    return kind_ == Kind::FirstOrder || kind_ == Kind::External;
  }
  bool check_transitivity() const { return kind_ == Kind::FirstOrder; }

  bool related(const Universe& u, const Bitset& a, const Bitset& b) const {
    switch (kind_) {
      case Kind::Extensional:
        return a == b;
      case Kind::Equinumerous:
        return a.popcount() == b.popcount();
      case Kind::FirstOrder:
        return eval_with_preds(u, formula_, a, b);
      case Kind::External:
        return comparator_(u, a, b);
    }
    return false;
  }

 private:
  ClassEquivalence(Kind k, std::string d) : kind_(k), descriptor_(std::move(d)) {}

  static void validate_equiv_formula(const Formula& f) {
    if (!free_vars(f).all().empty())
      throw Error(Errc::unbound_variable, "equivalence formula must be closed");
    check_equiv_syntax(f);
  }

  static void check_equiv_syntax(const Formula& f) {
    switch (f.kind()) {
      case Formula::K::App:
        if (f.name() != "F" && f.name() != "G")
          throw Error(Errc::not_pure, "equivalence formulas may only apply F and G");
        check_equiv_term(f.t1());
        return;
      case Formula::K::Mem:
      case Formula::K::Eq:
        check_equiv_term(f.t1());
        check_equiv_term(f.t2());
        return;
      case Formula::K::Not:
      case Formula::K::ForAll:
      case Formula::K::Exists:
        check_equiv_syntax(f.f1());
        return;
      case Formula::K::And:
      case Formula::K::Or:
      case Formula::K::Implies:
      case Formula::K::Iff:
        check_equiv_syntax(f.f1());
        check_equiv_syntax(f.f2());
        return;
    }
  }

  static void check_equiv_term(const Term& t) {
    if (t.kind() == Term::K::Literal || t.kind() == Term::K::Eps)
      throw Error(Errc::not_pure, "equivalence formulas must be pure");
  }

  Kind kind_;
  std::string descriptor_;
  Formula formula_;
  Comparator comparator_;
};

}  // namespace hff
