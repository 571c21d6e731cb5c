#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "hff/bitset.hpp"
#include "hff/enumerate.hpp"
#include "hff/equivalence.hpp"
#include "hff/error.hpp"
#include "hff/model.hpp"

namespace hff {

inline constexpr std::uint64_t kDefaultSearchBudget = 50000;

struct SearchResult {
  std::uint64_t index = 0;       // least enumeration index that works
  CoreFormula formula;           // psi_index
  std::vector<HfSet> params;     // all working parameters of minimal rank, ascending
};

namespace detail {

// Validates a candidate equivalence against the distinct extensions a search
// encountered (target included): reflexivity and symmetry on all pairs, and
// for first-order formulas transitivity by exhaustive triple scan. The family
// is capped at 64 distinct extensions.
inline void validate_equivalence(const Universe& u, const ClassEquivalence& equiv,
                                 const std::vector<Bitset>& family) {
  const std::size_t n = family.size();
  std::vector<char> rel(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      rel[i * n + j] = equiv.related(u, family[i], family[j]) ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i)
    if (!rel[i * n + i])
      throw Error(Errc::not_equivalence,
                  "relation is not reflexive on extension #" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rel[i * n + j] != rel[j * n + i])
        throw Error(Errc::not_equivalence, "relation is not symmetric on extensions #" +
                                               std::to_string(i) + ", #" + std::to_string(j));
  if (!equiv.check_transitivity()) return;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (rel[i * n + j] && rel[j * n + k] && !rel[i * n + k])
          throw Error(Errc::not_equivalence,
                      "relation is not transitive on extensions #" + std::to_string(i) + ", #" +
                          std::to_string(j) + ", #" + std::to_string(k));
}

}  // namespace detail

/// Finds the least enumeration index n such that some parameter p in U makes
/// extension(U, psi_n, p) equivalent to the target, together with the set of
/// all such p of minimal rank. Deterministic; throws BudgetExceeded after
/// scanning `budget` indices.
inline SearchResult first_equivalent_search(const Universe& u, const Bitset& target,
                                            const ClassEquivalence& equiv,
                                            std::uint64_t budget = kDefaultSearchBudget) {
  std::vector<Bitset> family;
  std::unordered_set<Bitset, BitsetHash> family_seen;
  const bool collect = equiv.needs_validation();
  if (collect) {
    family.push_back(target);
    family_seen.insert(target);
  }
  auto note = [&](const Bitset& b) {
    if (!collect || family.size() >= 64) return;
    if (family_seen.insert(b).second) family.push_back(b);
  };

  for (std::uint64_t n = 0; n < budget; ++n) {
    CoreFormula psi = enumerate_core(n);
    std::vector<HfSet> working;
    unsigned best_rank = 0;
    for (const auto& p : u.elements()) {
      const Bitset& ext = u.extension(psi, p);
      note(ext);
      if (!equiv.related(u, ext, target)) continue;
      unsigned r = p.rank();
      if (working.empty() || r < best_rank) {
        working.clear();
        working.push_back(p);
        best_rank = r;
      } else if (r == best_rank) {
        working.push_back(p);
      }
    }
    if (!working.empty()) {
      if (collect) detail::validate_equivalence(u, equiv, family);
      return SearchResult{n, std::move(psi), std::move(working)};
    }
  }
  Error e(Errc::budget_exceeded,
          "no equivalent formula within " + std::to_string(budget) + " enumeration indices");
  e.count = budget;
  throw e;
}

}  // namespace hff
