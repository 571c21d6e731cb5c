#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hff/bitset.hpp"
#include "hff/core.hpp"
#include "hff/error.hpp"
#include "hff/hfset.hpp"
#include "hff/syntax.hpp"

namespace hff {

inline constexpr std::size_t kMaxUniverseSize = std::size_t{1} << 20;

/// Named variable bindings for evaluation. Values are arbitrary HF sets and
/// need not lie in the universe; quantified variables always range over it.
using Env = std::map<std::string, HfSet>;

/// A finite transitive set of HF sets serving as a domain of quantification.
/// Elements are stored in ascending Ackermann order. Movable, not copyable;
/// the per-universe extension cache is internally synchronized.
class Universe {
 public:
  static Universe v_stage(unsigned r, bool allow_large = false) {
    if (r < 1 || r > 5) throw Error(Errc::stage_too_large, "stage must be between 1 and 5");
    if (r == 5 && !allow_large)
      throw Error(Errc::stage_too_large, "stage 5 has 65536 elements; pass the override to allow it");
    // |V_r| doubles as 2^|V_{r-1}|: 1, 2, 4, 16, 65536. V_r is exactly the
    // initial segment of the Ackermann order of that length.
    std::size_t size = 1;
    for (unsigned i = 1; i < r; ++i) size = std::size_t{1} << size;
    Universe u = from_segment(size, "v" + std::to_string(r) + (r == 5 ? "!" : ""));
    u.vstage_ = r;
    return u;
  }

  static Universe ackermann_segment(std::uint64_t n) {
    if (n < 1) throw Error(Errc::segment_too_large, "segment must be nonempty");
    if (n > kMaxUniverseSize)
      throw Error(Errc::segment_too_large, "segment exceeds " + std::to_string(kMaxUniverseSize));
    return from_segment(std::size_t(n), "ack:" + std::to_string(n));
  }

  /// Transitive closure of the seeds plus the empty set.
  static Universe closure_of(std::vector<HfSet> seeds, std::string label = {}) {
    std::unordered_map<HfSet, bool, HfSetHash> seen;
    std::vector<HfSet> work = std::move(seeds);
    std::vector<HfSet> elems;
    elems.push_back(HfSet::empty());
    seen.emplace(HfSet::empty(), true);
    while (!work.empty()) {
      HfSet s = work.back();
      work.pop_back();
      if (seen.emplace(s, true).second) {
        elems.push_back(s);
        if (elems.size() > kMaxUniverseSize)
          throw Error(Errc::segment_too_large, "closure exceeds universe cap");
        for (const auto& m : s.members()) work.push_back(m);
      }
    }
    std::sort(elems.begin(), elems.end(),
              [](const HfSet& a, const HfSet& b) { return HfSet::compare(a, b) < 0; });
    Universe u;
    u.elements_ = std::move(elems);
    u.index_elements();
    if (label.empty()) {
      std::size_t h = 0x811c9dc5u;
      for (const auto& e : u.elements_) h = (h ^ e.hash()) * 0x01000193u;
      char buf[48];
      std::snprintf(buf, sizeof buf, "closure[n=%zu,h=%08zx]", u.elements_.size(),
                    h & 0xffffffffu);
      label = buf;
    }
    u.label_ = std::move(label);
    return u;
  }

  const std::vector<HfSet>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const std::string& label() const { return label_; }
  std::optional<unsigned> v_stage_rank() const { return vstage_; }

  std::optional<std::size_t> position_of(const HfSet& x) const {
    auto it = position_.find(x);
    if (it == position_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const HfSet& x) const { return position_.find(x) != position_.end(); }

  // Direct transitivity scan; the constructions guarantee it, tests verify.
  bool is_transitive() const {
    for (const auto& e : elements_)
      for (const auto& m : e.members())
        if (!contains(m)) return false;
    return true;
  }

  /// Extension of a core formula at parameter p: bit i holds iff the formula
  /// is true with X := element i. Results are memoized per universe.
  const Bitset& extension(const CoreFormula& f, const HfSet& p) const;

  Universe(Universe&&) = default;
  Universe& operator=(Universe&&) = default;
  Universe(const Universe&) = delete;
  Universe& operator=(const Universe&) = delete;

 private:
  Universe() : cache_(std::make_unique<Cache>()) {}

  static Universe from_segment(std::size_t n, std::string label) {
    Universe u;
    u.elements_.reserve(n);
    std::unordered_map<std::size_t, HfSet> memo;
    for (std::size_t k = 0; k < n; ++k) u.elements_.push_back(from_index_cached(k, memo));
    u.index_elements();
    u.label_ = std::move(label);
    return u;
  }

  static HfSet from_index_cached(std::size_t n, std::unordered_map<std::size_t, HfSet>& memo) {
    if (n == 0) return HfSet::empty();
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    std::vector<HfSet> ms;
    std::size_t v = n, bit = 0;
    while (v) {
      if (v & 1) ms.push_back(from_index_cached(bit, memo));
      v >>= 1;
      ++bit;
    }
    HfSet s = HfSet::from_members(std::move(ms));
    memo.emplace(n, s);
    return s;
  }

  void index_elements() {
    position_.reserve(elements_.size() * 2);
    for (std::size_t i = 0; i < elements_.size(); ++i) position_.emplace(elements_[i], i);
  }

  struct ExtKey {
    std::string serial;
    HfSet p;
    bool operator==(const ExtKey& o) const { return serial == o.serial && p == o.p; }
  };
  struct ExtKeyHash {
    std::size_t operator()(const ExtKey& k) const {
      return std::hash<std::string>{}(k.serial) * 0x9e3779b97f4a7c15ull ^ k.p.hash();
    }
  };
  struct Cache {
    std::mutex mu;
    std::unordered_map<ExtKey, Bitset, ExtKeyHash> map;
  };

  std::vector<HfSet> elements_;
  std::unordered_map<HfSet, std::size_t, HfSetHash> position_;
  std::string label_;
  std::optional<unsigned> vstage_;
  std::unique_ptr<Cache> cache_;
};

/// A class over a universe, as the bitset of its member positions.
struct ClassExtension {
  const Universe* universe = nullptr;
  Bitset bits;

  std::size_t popcount() const { return bits.popcount(); }

  bool operator==(const ClassExtension& o) const {
    return universe == o.universe && bits == o.bits;
  }
};

inline ClassExtension class_of(const Universe& u, Bitset b) { return ClassExtension{&u, std::move(b)}; }

// ---------------------------------------------------------------------------
// Core-language evaluation (de Bruijn, slots X and P).

namespace detail {

inline bool eval_core_rec(const Universe& u, const CoreFormula& f, const HfSet& x, const HfSet& p,
                          std::vector<const HfSet*>& stack) {
  auto value = [&](CoreTerm t) -> const HfSet& {
    switch (t.kind) {
      case CoreTerm::K::SlotX:
        return x;
      case CoreTerm::K::SlotP:
        return p;
      case CoreTerm::K::Var:
        return *stack[stack.size() - 1 - t.index];
    }
    return x;
  };
  switch (f.kind()) {
    case CoreFormula::K::Mem:
      return value(f.b()).contains(value(f.a()));
    case CoreFormula::K::Eq:
      return value(f.a()) == value(f.b());
    case CoreFormula::K::Not:
      return !eval_core_rec(u, f.c1(), x, p, stack);
    case CoreFormula::K::And:
      return eval_core_rec(u, f.c1(), x, p, stack) && eval_core_rec(u, f.c2(), x, p, stack);
    case CoreFormula::K::Exists:
      for (const auto& e : u.elements()) {
        stack.push_back(&e);
        bool r = eval_core_rec(u, f.c1(), x, p, stack);
        stack.pop_back();
        if (r) return true;
      }
      return false;
  }
  return false;
}

}  // namespace detail

/// Evaluates a core formula over U with the object and parameter slots bound.
/// Membership and equality atoms are decided in the ambient HF world, so x
/// and p need not lie in U; quantifiers range over U only.
inline bool eval_core(const Universe& u, const CoreFormula& f, const HfSet& x, const HfSet& p) {
  std::vector<const HfSet*> stack;
  return detail::eval_core_rec(u, f, x, p, stack);
}

inline const Bitset& Universe::extension(const CoreFormula& f, const HfSet& p) const {
  ExtKey key{f.serial(), p};
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->map.find(key);
    if (it != cache_->map.end()) return it->second;
  }
  Bitset bits(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (eval_core(*this, f, elements_[i], p)) bits.set(i);
  std::lock_guard<std::mutex> lock(cache_->mu);
  return cache_->map.emplace(std::move(key), std::move(bits)).first->second;
}

inline ClassExtension extension(const Universe& u, const CoreFormula& f, const HfSet& p) {
  return ClassExtension{&u, u.extension(f, p)};
}

// ---------------------------------------------------------------------------
// Surface-language evaluation.

/// Memo for repeated evaluation of the same formulas over one universe.
/// Quantified subformulas are keyed by the values of their free variables, so
/// one cache may serve many environments; it must not outlive the formulas or
/// be reused across different predicate bindings.
class EvalCache {
 public:
  const std::vector<std::string>& free_names(const Formula& f) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = freevars_.find(f.raw());
    if (it != freevars_.end()) return it->second;
    FreeVars fv = free_vars(f);
    std::vector<std::string> names;
    for (const auto& n : fv.vars) names.push_back(n);
    for (const auto& n : fv.params) names.push_back(n);
    return freevars_.emplace(f.raw(), std::move(names)).first->second;
  }

  std::optional<bool> lookup(const void* node, const std::vector<HfSet>& vals) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(Key{node, vals});
    if (it == memo_.end()) return std::nullopt;
    return it->second;
  }

  void store(const void* node, std::vector<HfSet> vals, bool result) {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(Key{node, std::move(vals)}, result);
  }

 private:
  struct Key {
    const void* node;
    std::vector<HfSet> vals;
    bool operator==(const Key& o) const {
      if (node != o.node || vals.size() != o.vals.size()) return false;
      for (std::size_t i = 0; i < vals.size(); ++i)
        if (!(vals[i] == o.vals[i])) return false;
      return true;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = std::hash<const void*>{}(k.node);
      for (const auto& v : k.vals) h = (h ^ v.hash()) * 0x100000001b3ull;
      return h;
    }
  };
  std::mutex mu_;
  std::unordered_map<const void*, std::vector<std::string>> freevars_;
  std::unordered_map<Key, bool, KeyHash> memo_;
};

namespace detail {

struct SurfaceEval {
  const Universe& u;
  const Env* env;
  EvalCache* cache = nullptr;
  const Bitset* pred_f = nullptr;  // F(t) atoms, when evaluating equivalences
  const Bitset* pred_g = nullptr;
  std::vector<std::pair<const std::string*, const HfSet*>> locals;

  const HfSet* find(const std::string& name) const {
    for (std::size_t i = locals.size(); i-- > 0;)
      if (*locals[i].first == name) return locals[i].second;
    if (env) {
      auto it = env->find(name);
      if (it != env->end()) return &it->second;
    }
    return nullptr;
  }

  const HfSet& term_value(const Term& t) {
    switch (t.kind()) {
      case Term::K::Var:
      case Term::K::Param: {
        const HfSet* v = find(t.name());
        if (!v) throw Error(Errc::unbound_variable, "unbound '" + t.name() + "'");
        return *v;
      }
      case Term::K::Literal:
      case Term::K::Eps:
        throw Error(Errc::not_pure, "extended term in pure evaluation: " + print(t));
    }
    throw Error(Errc::not_pure, "unreachable term kind");
  }

  bool run(const Formula& f) {
    switch (f.kind()) {
      case Formula::K::Mem:
        return term_value(f.t2()).contains(term_value(f.t1()));
      case Formula::K::Eq:
        return term_value(f.t1()) == term_value(f.t2());
      case Formula::K::App: {
        const Bitset* pred = nullptr;
        if (f.name() == "F") pred = pred_f;
        if (f.name() == "G") pred = pred_g;
        if (!pred)
          throw Error(Errc::not_pure, "predicate '" + f.name() + "' only valid in equivalence formulas");
        auto pos = u.position_of(term_value(f.t1()));
        return pos && pred->test(*pos);
      }
      case Formula::K::Not:
        return !run(f.f1());
      case Formula::K::And:
        return run(f.f1()) && run(f.f2());
      case Formula::K::Or:
        return run(f.f1()) || run(f.f2());
      case Formula::K::Implies:
        return !run(f.f1()) || run(f.f2());
      case Formula::K::Iff:
        return run(f.f1()) == run(f.f2());
      case Formula::K::ForAll:
      case Formula::K::Exists:
        return quantifier(f);
    }
    return false;
  }

  bool quantifier(const Formula& f) {
    std::vector<HfSet> key_vals;
    if (cache) {
      const auto& names = cache->free_names(f);
      key_vals.reserve(names.size());
      bool keyable = true;
      for (const auto& n : names) {
        const HfSet* v = find(n);
        if (!v) {
          keyable = false;
          break;
        }
        key_vals.push_back(*v);
      }
      if (keyable) {
        if (auto hit = cache->lookup(f.raw(), key_vals)) return *hit;
      } else {
        key_vals.clear();
      }
    }
    bool result;
    const bool is_all = f.kind() == Formula::K::ForAll;
    result = is_all;
    for (const auto& e : u.elements()) {
      locals.emplace_back(&f.name(), &e);
      bool r = run(f.f1());
      locals.pop_back();
      if (r != is_all) {
        result = !is_all;
        break;
      }
    }
    if (cache && !key_vals.empty()) cache->store(f.raw(), std::move(key_vals), result);
    else if (cache) cache->store(f.raw(), {}, result);
    return result;
  }
};

}  // namespace detail

/// Tarski evaluation of a pure formula over U. Free variables and parameters
/// come from env (values may lie outside U); quantifiers range over U.
inline bool eval(const Universe& u, const Formula& f, const Env& env = {},
                 EvalCache* cache = nullptr) {
  detail::SurfaceEval ev{u, &env, cache};
  return ev.run(f);
}

/// Evaluation with the two predicate symbols F and G bound to extensions;
/// used for first-order class-equivalence formulas.
inline bool eval_with_preds(const Universe& u, const Formula& f, const Bitset& pf,
                            const Bitset& pg, const Env& env = {}, EvalCache* cache = nullptr) {
  detail::SurfaceEval ev{u, &env, cache, &pf, &pg};
  return ev.run(f);
}

/// Extension of a presentation (f, env): the free variable of f not bound by
/// env is the object variable. Values in env may lie outside U.
inline ClassExtension extension_of_presentation(const Universe& u, const Formula& f,
                                                const Env& env, EvalCache* cache = nullptr) {
  if (!is_pure(f)) throw Error(Errc::not_pure, "presentation formula must be pure");
  FreeVars fv = free_vars(f);
  std::vector<std::string> object_candidates;
  for (const auto& n : fv.all())
    if (!env.count(n)) object_candidates.push_back(n);
  if (object_candidates.size() > 1) {
    std::string msg = "unbound variables besides the object variable:";
    for (const auto& n : object_candidates) msg += " " + n;
    throw Error(Errc::unbound_variable, msg);
  }
  Bitset bits(u.size());
  if (object_candidates.empty()) {
    // Degenerate class: no object variable, the class is everything or nothing.
    bool v = eval(u, f, env, cache);
    for (std::size_t i = 0; i < u.size(); ++i) bits.set(i, v);
    return ClassExtension{&u, std::move(bits)};
  }
  Env scratch = env;
  const std::string& obj = object_candidates[0];
  for (std::size_t i = 0; i < u.size(); ++i) {
    scratch.insert_or_assign(obj, u.elements()[i]);
    if (eval(u, f, scratch, cache)) bits.set(i);
  }
  return ClassExtension{&u, std::move(bits)};
}

}  // namespace hff
