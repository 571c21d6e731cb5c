#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "hff/syntax.hpp"

namespace hff {

/// Deterministic fresh-name source that avoids a given set of names.
class FreshNamer {
 public:
  explicit FreshNamer(std::set<std::string> used = {}) : used_(std::move(used)) {}

  void reserve(const std::string& n) { used_.insert(n); }

  std::string fresh(const std::string& stem) {
    while (true) {
      std::string cand = stem + std::to_string(counter_++);
      if (used_.insert(cand).second) return cand;
    }
  }

 private:
  std::set<std::string> used_;
  unsigned counter_ = 0;
};

namespace detail {

inline void collect_names_term(const Term& t, std::set<std::string>& out);

inline void collect_names_formula(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::K::Mem:
    case Formula::K::Eq:
      collect_names_term(f.t1(), out);
      collect_names_term(f.t2(), out);
      return;
    case Formula::K::App:
      collect_names_term(f.t1(), out);
      return;
    case Formula::K::Not:
      collect_names_formula(f.f1(), out);
      return;
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies:
    case Formula::K::Iff:
      collect_names_formula(f.f1(), out);
      collect_names_formula(f.f2(), out);
      return;
    case Formula::K::ForAll:
    case Formula::K::Exists:
      out.insert(f.name());
      collect_names_formula(f.f1(), out);
      return;
  }
}

inline void collect_names_term(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::K::Var:
    case Term::K::Param:
      out.insert(t.name());
      return;
    case Term::K::Literal:
      return;
    case Term::K::Eps:
      out.insert(t.name());
      collect_names_formula(t.body(), out);
      return;
  }
}

}  // namespace detail

/// Every variable, parameter, and binder name occurring in the formula.
inline std::set<std::string> collect_names(const Formula& f) {
  std::set<std::string> out;
  detail::collect_names_formula(f, out);
  return out;
}

namespace detail {

using Subst = std::map<std::string, Term>;

inline std::set<std::string> subst_free_names(const Subst& s) {
  std::set<std::string> out;
  for (const auto& kv : s) {
    FreeVars fv;
    std::set<std::string> bound;
    free_vars_term(kv.second, bound, fv);
    auto a = fv.all();
    out.insert(a.begin(), a.end());
  }
  return out;
}

inline Term substitute_term(const Term& t, const Subst& s, FreshNamer& namer,
                            const std::set<std::string>& avoid);

inline Formula substitute_rec(const Formula& f, const Subst& s, FreshNamer& namer,
                              const std::set<std::string>& avoid) {
  switch (f.kind()) {
    case Formula::K::Mem:
      return mem(substitute_term(f.t1(), s, namer, avoid), substitute_term(f.t2(), s, namer, avoid));
    case Formula::K::Eq:
      return eq(substitute_term(f.t1(), s, namer, avoid), substitute_term(f.t2(), s, namer, avoid));
    case Formula::K::App:
      return app(f.name(), substitute_term(f.t1(), s, namer, avoid));
    case Formula::K::Not:
      return f_not(substitute_rec(f.f1(), s, namer, avoid));
    case Formula::K::And:
      return f_and(substitute_rec(f.f1(), s, namer, avoid), substitute_rec(f.f2(), s, namer, avoid));
    case Formula::K::Or:
      return f_or(substitute_rec(f.f1(), s, namer, avoid), substitute_rec(f.f2(), s, namer, avoid));
    case Formula::K::Implies:
      return f_implies(substitute_rec(f.f1(), s, namer, avoid),
                       substitute_rec(f.f2(), s, namer, avoid));
    case Formula::K::Iff:
      return f_iff(substitute_rec(f.f1(), s, namer, avoid), substitute_rec(f.f2(), s, namer, avoid));
    case Formula::K::ForAll:
    case Formula::K::Exists: {
      Subst inner = s;
      inner.erase(f.name());  // binder shadows
      std::string bound = f.name();
      Formula body = f.f1();
      if (avoid.count(bound) && !inner.empty()) {
        // binder would capture a substituted name: rename it first
        std::string renamed = namer.fresh(bound);
        Subst rename;
        rename.emplace(bound, Term::var(renamed));
        body = substitute_rec(body, rename, namer, {});
        bound = renamed;
      }
      Formula new_body = inner.empty() ? body : substitute_rec(body, inner, namer, avoid);
      return f.kind() == Formula::K::ForAll ? forall(std::move(bound), std::move(new_body))
                                            : exists(std::move(bound), std::move(new_body));
    }
  }
  return f;
}

inline Term substitute_term(const Term& t, const Subst& s, FreshNamer& namer,
                            const std::set<std::string>& avoid) {
  switch (t.kind()) {
    case Term::K::Var:
    case Term::K::Param: {
      auto it = s.find(t.name());
      return it != s.end() ? it->second : t;
    }
    case Term::K::Literal:
      return t;
    case Term::K::Eps: {
      Subst inner = s;
      inner.erase(t.name());
      std::string bound = t.name();
      Formula body = t.body();
      if (avoid.count(bound) && !inner.empty()) {
        std::string renamed = namer.fresh(bound);
        Subst rename;
        rename.emplace(bound, Term::var(renamed));
        body = substitute_rec(body, rename, namer, {});
        bound = renamed;
      }
      Formula new_body = inner.empty() ? body : substitute_rec(body, inner, namer, avoid);
      return Term::eps(std::move(bound), std::move(new_body));
    }
  }
  return t;
}

}  // namespace detail

/// Capture-avoiding substitution of free variable/parameter occurrences.
/// Both plain names and $-parameters with a matching name are replaced.
inline Formula substitute(const Formula& f, const std::map<std::string, Term>& subst) {
  if (subst.empty()) return f;
  FreshNamer namer(collect_names(f));
  std::set<std::string> avoid = detail::subst_free_names(subst);
  return detail::substitute_rec(f, subst, namer, avoid);
}

}  // namespace hff
