#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hff/syntax.hpp"

namespace hff {

/// Seeded random formula generator. Uses mt19937_64 with plain modulo draws,
/// so a given seed yields the same corpus on every platform and run.
class FormulaGen {
 public:
  explicit FormulaGen(std::uint64_t seed) : rng_(seed) {}

  /// Random pure formula over the given free variables and parameters.
  Formula pure(const std::vector<std::string>& vars, const std::vector<std::string>& params,
               unsigned depth) {
    bound_.clear();
    return pure_rec(vars, params, depth);
  }

  /// Random pure formula whose free variables are exactly {a, b}.
  Formula two_var(const std::string& a, const std::string& b, unsigned depth = 3) {
    while (true) {
      Formula f = pure({a, b}, {}, depth);
      FreeVars fv = free_vars(f);
      if (fv.params.empty() && fv.vars.size() == 2 && fv.vars.count(a) && fv.vars.count(b))
        return f;
    }
  }

  /// Random extended formula: a boolean combination of pure pieces and atoms
  /// whose arguments may be eps-terms. Eps bodies mention only their own
  /// object variable and the given parameters, so none depends on a
  /// quantified variable (literal-mode translation stays applicable).
  Formula extended(const std::vector<std::string>& params, unsigned depth = 3) {
    if (depth > 0) {
      switch (pick(5)) {
        case 0:
          return f_not(extended(params, depth - 1));
        case 1:
          return f_and(extended(params, depth - 1), extended(params, depth - 1));
        case 2:
          return f_or(extended(params, depth - 1), extended(params, depth - 1));
        case 3:
          return f_implies(extended(params, depth - 1), extended(params, depth - 1));
        default:
          break;
      }
    }
    switch (pick(3)) {
      case 0: {  // atom over eps-terms and parameters
        Term a = eps_or_param(params);
        Term b = eps_or_param(params);
        return pick(2) ? mem(std::move(a), std::move(b)) : eq(std::move(a), std::move(b));
      }
      case 1: {  // quantified pure piece
        bound_.clear();
        return pure_rec({}, params, 2);
      }
      default: {  // membership of a quantified witness in an eps-term
        std::string v = "w" + std::to_string(pick(3));
        Formula inner = pick(2) ? mem(Term::var(v), eps_term(params))
                                : f_not(mem(Term::var(v), eps_term(params)));
        return pick(2) ? exists(v, std::move(inner)) : forall(v, std::move(inner));
      }
    }
  }

  std::uint64_t pick(std::uint64_t n) { return rng_() % n; }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> bound_;

  Term term_from(const std::vector<std::string>& vars, const std::vector<std::string>& params) {
    std::vector<Term> pool;
    for (const auto& v : vars) pool.push_back(Term::var(v));
    for (const auto& b : bound_) pool.push_back(Term::var(b));
    for (const auto& p : params) pool.push_back(Term::param(p));
    if (pool.empty()) pool.push_back(Term::var("x"));
    return pool[pick(pool.size())];
  }

  Formula pure_rec(const std::vector<std::string>& vars, const std::vector<std::string>& params,
                   unsigned depth) {
    if (depth == 0 || pick(3) == 0) {
      Term a = term_from(vars, params);
      Term b = term_from(vars, params);
      return pick(2) ? mem(std::move(a), std::move(b)) : eq(std::move(a), std::move(b));
    }
    switch (pick(7)) {
      case 0:
        return f_not(pure_rec(vars, params, depth - 1));
      case 1:
        return f_and(pure_rec(vars, params, depth - 1), pure_rec(vars, params, depth - 1));
      case 2:
        return f_or(pure_rec(vars, params, depth - 1), pure_rec(vars, params, depth - 1));
      case 3:
        return f_implies(pure_rec(vars, params, depth - 1), pure_rec(vars, params, depth - 1));
      case 4:
        return f_iff(pure_rec(vars, params, depth - 1), pure_rec(vars, params, depth - 1));
      default: {
        std::string v = "q" + std::to_string(bound_.size());
        bound_.push_back(v);
        Formula body = pure_rec(vars, params, depth - 1);
        bound_.pop_back();
        return pick(2) ? forall(v, std::move(body)) : exists(v, std::move(body));
      }
    }
  }

  Term eps_term(const std::vector<std::string>& params) {
    // small pool of eps bodies with early enumeration indices
    std::string v = "z";
    std::vector<Formula> bodies;
    bodies.push_back(mem(Term::var(v), Term::var(v)));                       // empty class
    bodies.push_back(eq(Term::var(v), Term::var(v)));                        // universal class
    bodies.push_back(f_not(mem(Term::var(v), Term::var(v))));                // universal again
    if (!params.empty()) {
      const std::string& p = params[pick(params.size())];
      bodies.push_back(mem(Term::var(v), Term::param(p)));                   // members of p
      bodies.push_back(mem(Term::param(p), Term::var(v)));                   // sets containing p
      bodies.push_back(f_not(mem(Term::var(v), Term::param(p))));            // complement of p
      bodies.push_back(f_and(mem(Term::var(v), Term::param(p)),
                             f_not(eq(Term::var(v), Term::param(p)))));
    }
    bodies.push_back(exists("s", mem(Term::var("s"), Term::var(v))));        // nonempty sets
    bodies.push_back(forall("s", f_not(mem(Term::var("s"), Term::var(v)))));  // the empty object
    return Term::eps(v, bodies[pick(bodies.size())]);
  }

  Term eps_or_param(const std::vector<std::string>& params) {
    if (!params.empty() && pick(3) == 0) return Term::param(params[pick(params.size())]);
    return eps_term(params);
  }
};

}  // namespace hff
