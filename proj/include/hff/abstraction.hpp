#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hff/coding.hpp"
#include "hff/enumerate.hpp"
#include "hff/equivalence.hpp"
#include "hff/error.hpp"
#include "hff/model.hpp"
#include "hff/search.hpp"

namespace hff {

/// The pair <code(psi_n), u> produced by the abstraction operators, in both
/// structured and HF-set form. Objects are only comparable within one
/// universe; comparing across universes throws CrossUniverse.
struct AbstractionObject {
  std::string kind;            // "extension" | "number" | "abstraction:<equiv>"
  std::string universe;        // label of the universe it was computed over
  std::uint64_t index = 0;     // enumeration index of the formula
  CoreFormula formula;         // psi_index
  std::vector<HfSet> params;   // u: all minimal-rank working parameters, ascending
  HfSet as_hfset;              // kuratowski_pair(code_formula(formula), from_members(params))

  bool operator==(const AbstractionObject& o) const {
    if (universe != o.universe)
      throw Error(Errc::cross_universe,
                  "comparing objects over '" + universe + "' and '" + o.universe + "'");
    return as_hfset == o.as_hfset;
  }
  bool operator!=(const AbstractionObject& o) const { return !(*this == o); }
};

namespace detail {

inline AbstractionObject package(const Universe& u, std::string kind, SearchResult r) {
  HfSet code = code_formula(r.formula);
  HfSet uset = HfSet::from_members(r.params);
  return AbstractionObject{std::move(kind),
                           u.label(),
                           r.index,
                           std::move(r.formula),
                           std::move(r.params),
                           HfSet::kuratowski_pair(code, uset)};
}

inline std::string kind_for(const ClassEquivalence& e) {
  switch (e.kind()) {
    case ClassEquivalence::Kind::Extensional:
      return "extension";
    case ClassEquivalence::Kind::Equinumerous:
      return "number";
    default:
      return "abstraction:" + e.descriptor();
  }
}

}  // namespace detail

/// Extension object for a class given directly as a bitset over U.
inline AbstractionObject eps_of_extension(const Universe& u, const Bitset& target,
                                          std::uint64_t budget = kDefaultSearchBudget) {
  return detail::package(u, "extension",
                         first_equivalent_search(u, target, ClassEquivalence::extensional(), budget));
}

/// The Basic-Law-V extension object of the class presented by (f, env): the
/// earliest enumerated formula defining the same extension over U with some
/// parameter from U, together with all minimal-rank such parameters. Depends
/// only on the extension, never on the presentation.
inline AbstractionObject extension_of(const Universe& u, const Formula& f, const Env& env = {},
                                      std::uint64_t budget = kDefaultSearchBudget) {
  return eps_of_extension(u, extension_of_presentation(u, f, env).bits, budget);
}

/// Cantor-Hume number object: the earliest formula whose extension is
/// equinumerous with the class (equal popcount over a finite universe).
inline AbstractionObject class_number(const Universe& u, const Formula& f, const Env& env = {},
                                      std::uint64_t budget = kDefaultSearchBudget) {
  Bitset target = extension_of_presentation(u, f, env).bits;
  return detail::package(
      u, "number", first_equivalent_search(u, target, ClassEquivalence::equinumerous(), budget));
}

/// General Fregean abstraction for a pluggable class equivalence. With
/// Extensional this is extension_of; with Equinumerous it is class_number.
inline AbstractionObject class_abstraction(const Universe& u, const ClassEquivalence& equiv,
                                           const Formula& f, const Env& env = {},
                                           std::uint64_t budget = kDefaultSearchBudget) {
  Bitset target = extension_of_presentation(u, f, env).bits;
  return detail::package(u, detail::kind_for(equiv),
                         first_equivalent_search(u, target, equiv, budget));
}

// ---------------------------------------------------------------------------
// Basic Law V check over a corpus of presentations.

struct Presentation {
  Formula formula;
  Env env;
};

struct BlvViolation {
  std::size_t i = 0, j = 0;
  bool eps_equal = false;
  bool ext_equal = false;
};

struct BlvReport {
  std::size_t presentations = 0;
  std::size_t pairs_checked = 0;
  std::size_t distinct_extensions = 0;
  std::size_t distinct_objects = 0;
  std::vector<BlvViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// For every pair of presentations asserts eps_i = eps_j iff the extensions
/// agree pointwise over U; returns statistics and any violations (which the
/// construction makes impossible).
inline BlvReport blv_check(const Universe& u, const std::vector<Presentation>& presentations,
                           std::uint64_t budget = kDefaultSearchBudget) {
  std::vector<Bitset> exts;
  std::vector<AbstractionObject> objs;
  exts.reserve(presentations.size());
  objs.reserve(presentations.size());
  EvalCache cache;
  for (const auto& pr : presentations) {
    Bitset b = extension_of_presentation(u, pr.formula, pr.env, &cache).bits;
    objs.push_back(eps_of_extension(u, b, budget));
    exts.push_back(std::move(b));
  }
  BlvReport report;
  report.presentations = presentations.size();
  std::unordered_set<Bitset, BitsetHash> distinct_ext;
  std::unordered_set<std::string, std::hash<std::string>> distinct_obj;
  for (std::size_t i = 0; i < exts.size(); ++i) {
    distinct_ext.insert(exts[i]);
    distinct_obj.insert(objs[i].as_hfset.to_string());
  }
  report.distinct_extensions = distinct_ext.size();
  report.distinct_objects = distinct_obj.size();
  for (std::size_t i = 0; i < exts.size(); ++i)
    for (std::size_t j = i + 1; j < exts.size(); ++j) {
      ++report.pairs_checked;
      bool eps_eq = objs[i] == objs[j];
      bool ext_eq = exts[i] == exts[j];
      if (eps_eq != ext_eq) report.violations.push_back(BlvViolation{i, j, eps_eq, ext_eq});
    }
  return report;
}

// ---------------------------------------------------------------------------
// Recognizing extension objects (the executable identity criterion).

struct ExtensionContent {
  CoreFormula formula;
  std::vector<HfSet> params;
  Bitset ext;
};

/// Decides whether a candidate set is extension_of(U, F) for some class F
/// over U, returning the decoded content if so. Verifies pair shape, code
/// decodability, parameter membership and uniform minimal rank, extension
/// agreement across u, and enumeration minimality.
inline std::optional<ExtensionContent> is_extension(const Universe& u, const HfSet& candidate,
                                                    std::uint64_t budget = kDefaultSearchBudget) {
  HfSet code, uset;
  try {
    auto p = candidate.unpair();
    code = p.first;
    uset = p.second;
  } catch (const Error& e) {
    if (e.code() == Errc::not_a_pair) return std::nullopt;
    throw;
  }
  CoreFormula psi;
  try {
    psi = decode_formula(code);
  } catch (const Error& e) {
    if (e.code() == Errc::decode_error) return std::nullopt;
    throw;
  }
  const auto& params = uset.members();
  if (params.empty()) return std::nullopt;
  unsigned rank0 = params[0].rank();
  for (const auto& p : params) {
    if (p.rank() != rank0) return std::nullopt;
    if (!u.contains(p)) return std::nullopt;
  }
  const Bitset& ext0 = u.extension(psi, params[0]);
  for (std::size_t i = 1; i < params.size(); ++i)
    if (!(u.extension(psi, params[i]) == ext0)) return std::nullopt;

  Nat idx = Enumeration::index_of(psi);
  if (idx > budget) {
    Error e(Errc::budget_exceeded, "candidate formula index exceeds verification budget");
    e.count = budget;
    throw e;
  }
  std::uint64_t n = idx.convert_to<std::uint64_t>();
  SearchResult found = first_equivalent_search(u, ext0, ClassEquivalence::extensional(), n + 1);
  if (found.index != n) return std::nullopt;           // an earlier formula defines the class
  if (found.params.size() != params.size()) return std::nullopt;
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!(found.params[i] == params[i])) return std::nullopt;
  return ExtensionContent{std::move(psi), std::vector<HfSet>(params.begin(), params.end()), ext0};
}

// ---------------------------------------------------------------------------
// Scott-trick abstraction for element-level equivalences.

using ElementRelation = std::function<bool(const HfSet&, const HfSet&)>;

namespace detail {

inline void validate_element_equivalence(const Universe& u, const ElementRelation& rel) {
  const auto& el = u.elements();
  const std::size_t n = el.size();
  std::vector<char> m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = rel(el[i], el[j]) ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!m[i * n + i])
      throw Error(Errc::not_equivalence, "not reflexive at " + el[i].to_string());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m[i * n + j] != m[j * n + i])
        throw Error(Errc::not_equivalence,
                    "not symmetric at (" + el[i].to_string() + ", " + el[j].to_string() + ")");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!m[i * n + j]) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (m[j * n + k] && !m[i * n + k])
          throw Error(Errc::not_equivalence,
                      "not transitive at (" + el[i].to_string() + ", " + el[j].to_string() + ", " +
                          el[k].to_string() + ")");
    }
}

}  // namespace detail

/// Scott abstraction of x under an equivalence on U's elements: the set of
/// rank-minimal members of x's equivalence class within U. The relation is
/// validated exhaustively over U before use.
inline HfSet scott_abstraction(const Universe& u, const ElementRelation& rel, const HfSet& x) {
  if (!u.contains(x))
    throw Error(Errc::element_not_in_universe, x.to_string() + " not in " + u.label());
  detail::validate_element_equivalence(u, rel);
  std::vector<HfSet> cls;
  unsigned best = 0;
  for (const auto& y : u.elements()) {
    if (!rel(x, y)) continue;
    unsigned r = y.rank();
    if (cls.empty() || r < best) {
      cls.clear();
      cls.push_back(y);
      best = r;
    } else if (r == best) {
      cls.push_back(y);
    }
  }
  return HfSet::from_members(std::move(cls));
}

/// Scott abstraction with the equivalence given as a pure formula with two
/// free object variables (taken in lexicographic order) plus env parameters.
inline HfSet scott_abstraction(const Universe& u, const Formula& equiv_f, const Env& env,
                               const HfSet& x) {
  if (!is_pure(equiv_f)) throw Error(Errc::not_pure, "equivalence formula must be pure");
  FreeVars fv = free_vars(equiv_f);
  std::vector<std::string> object_vars;
  for (const auto& n : fv.all())
    if (!env.count(n)) object_vars.push_back(n);
  if (object_vars.size() != 2)
    throw Error(Errc::arity_error, "equivalence formula needs exactly two free object variables");
  auto cache = std::make_shared<EvalCache>();
  std::string va = object_vars[0], vb = object_vars[1];
  ElementRelation rel = [&u, equiv_f, env, cache, va, vb](const HfSet& a, const HfSet& b) {
    Env scratch = env;
    scratch.insert_or_assign(va, a);
    scratch.insert_or_assign(vb, b);
    return eval(u, equiv_f, scratch, cache.get());
  };
  return scott_abstraction(u, rel, x);
}

// ---------------------------------------------------------------------------
// Scott cardinals in the ambient HF world.

inline constexpr std::size_t kMaxScottCardinality = 16;

namespace detail {

inline std::size_t stage_size(unsigned r) {
  // |V_r| for r = 0..5: 0 (by convention V_0 is empty), 1, 2, 4, 16, 65536.
  std::size_t s = 0;
  for (unsigned i = 1; i <= r; ++i) s = (i == 1) ? 1 : (std::size_t{1} << s);
  return s;
}

inline unsigned minimal_stage_for_cardinality(std::size_t k) {
  unsigned r = 1;
  while (stage_size(r) < k) ++r;
  return r;
}

}  // namespace detail

/// Scott cardinal of x: the set of all HF sets of minimal rank equinumerous
/// with x. Cardinalities above 16 raise CardinalTooLarge carrying the minimal
/// stage and the cardinality (the object would be astronomically large).
inline HfSet scott_cardinal(const HfSet& x) {
  std::size_t k = x.cardinality();
  if (k == 0) return HfSet::singleton(HfSet::empty());
  if (k > kMaxScottCardinality) {
    unsigned stage = detail::minimal_stage_for_cardinality(k);
    Error e(Errc::cardinal_too_large, "cardinality " + std::to_string(k) +
                                          " (members would be the k-subsets of V_" +
                                          std::to_string(stage) + " of full rank)");
    e.count = k;
    throw e;
  }
  unsigned m = detail::minimal_stage_for_cardinality(k);
  std::size_t pool_size = detail::stage_size(m);
  std::size_t lower_size = detail::stage_size(m - 1);
  std::vector<HfSet> pool;
  pool.reserve(pool_size);
  for (std::size_t i = 0; i < pool_size; ++i) pool.push_back(HfSet::from_ackermann_index(std::uint64_t(i)));
  // k-subsets of V_m that contain at least one element of rank m-1 (i.e. some
  // element beyond the V_{m-1} prefix) have rank exactly m.
  std::vector<HfSet> result;
  std::vector<std::size_t> comb(k);
  for (std::size_t i = 0; i < k; ++i) comb[i] = i;
  while (true) {
    if (comb.back() >= lower_size) {
      std::vector<HfSet> ms;
      ms.reserve(k);
      for (auto i : comb) ms.push_back(pool[i]);
      result.push_back(HfSet::from_members(std::move(ms)));
    }
    // next combination
    std::size_t i = k;
    while (i-- > 0) {
      if (comb[i] + 1 <= pool_size - (k - i)) {
        ++comb[i];
        for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
        break;
      }
      if (i == 0) return HfSet::from_members(std::move(result));
    }
  }
}

}  // namespace hff
