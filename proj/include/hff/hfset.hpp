#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hff/error.hpp"

namespace hff {

using Nat = boost::multiprecision::cpp_int;

// Ackermann indices of nested structures grow as iterated exponentials;
// results wider than this many bits raise IndexOverflow instead of allocating.
inline constexpr std::size_t kDefaultIndexBits = std::size_t{1} << 24;

/// Canonical immutable hereditarily finite set.
///
/// Members are stored deduplicated in ascending Ackermann order, so structural
/// equality coincides with extensional equality. Values are cheap to copy
/// (shared immutable nodes) and safe to share between threads.
class HfSet {
 public:
  HfSet() : node_(empty_node()) {}

  static HfSet empty() { return HfSet(); }

  static HfSet from_members(std::vector<HfSet> ms) {
    std::sort(ms.begin(), ms.end(), [](const HfSet& a, const HfSet& b) { return compare(a, b) < 0; });
    ms.erase(std::unique(ms.begin(), ms.end(), [](const HfSet& a, const HfSet& b) { return a == b; }),
             ms.end());
    return HfSet(make_node(std::move(ms)));
  }

  static HfSet singleton(const HfSet& a) { return from_members({a}); }

  static HfSet kuratowski_pair(const HfSet& a, const HfSet& b) {
    return from_members({singleton(a), from_members({a, b})});
  }

  // Inverse of kuratowski_pair; throws NotAPair on anything else.
  std::pair<HfSet, HfSet> unpair() const {
    const auto& ms = members();
    if (ms.size() == 1) {
      // {{a}} decodes as (a, a).
      const auto& inner = ms[0].members();
      if (inner.size() != 1) throw Error(Errc::not_a_pair, "expected {{a}} or {{a},{a,b}}, got " + to_string());
      return {inner[0], inner[0]};
    }
    if (ms.size() == 2) {
      const HfSet* sing = nullptr;
      const HfSet* dbl = nullptr;
      for (const auto& m : ms) {
        if (m.cardinality() == 1 && !sing)
          sing = &m;
        else if (m.cardinality() == 2 && !dbl)
          dbl = &m;
      }
      if (sing && dbl) {
        const HfSet& a = sing->members()[0];
        const auto& d = dbl->members();
        if (d[0] == a) return {a, d[1]};
        if (d[1] == a) return {a, d[0]};
      }
      throw Error(Errc::not_a_pair, "not a Kuratowski pair: " + to_string());
    }
    throw Error(Errc::not_a_pair, "not a Kuratowski pair: " + to_string());
  }

  static HfSet von_neumann(std::size_t n) {
    std::vector<HfSet> ords;
    ords.reserve(n + 1);
    ords.push_back(empty());
    for (std::size_t k = 1; k <= n; ++k) ords.push_back(from_members(ords));
    return ords[n];
  }

  static HfSet from_ackermann_index(const Nat& n) {
    if (n < 0) throw Error(Errc::syntax_error, "Ackermann index must be nonnegative");
    std::unordered_map<std::size_t, HfSet> memo;
    std::vector<HfSet> ms;
    for (std::size_t bit = 0; bit < bit_length(n); ++bit)
      if (boost::multiprecision::bit_test(n, unsigned(bit))) ms.push_back(from_index_memo(bit, memo));
    return from_members(std::move(ms));
  }

  static HfSet from_ackermann_index(std::uint64_t n) { return from_ackermann_index(Nat(n)); }

  // a(x) = sum over members y of 2^a(y); throws IndexOverflow when the result
  // would exceed max_bits bits.
  Nat ackermann_index(std::size_t max_bits = kDefaultIndexBits) const {
    std::unordered_map<const Node*, Nat> memo;
    return index_rec(node_.get(), max_bits, memo);
  }

  // The index when it fits in 64 bits, computed at construction time.
  std::optional<std::uint64_t> small_index() const {
    if (node_->small_valid) return node_->small_index;
    return std::nullopt;
  }

  unsigned rank() const { return node_->rank; }
  std::size_t cardinality() const { return node_->members.size(); }
  const std::vector<HfSet>& members() const { return node_->members; }
  bool is_empty() const { return node_->members.empty(); }

  bool contains(const HfSet& x) const {
    const auto& ms = node_->members;
    auto it = std::lower_bound(ms.begin(), ms.end(), x,
                               [](const HfSet& a, const HfSet& b) { return compare(a, b) < 0; });
    return it != ms.end() && *it == x;
  }

  // Smallest transitive set containing all members of *this (not *this itself).
  HfSet transitive_closure() const {
    std::unordered_set<HfSet, Hash> seen;
    std::vector<HfSet> work(members());
    std::vector<HfSet> out;
    while (!work.empty()) {
      HfSet s = work.back();
      work.pop_back();
      if (seen.insert(s).second) {
        out.push_back(s);
        for (const auto& m : s.members()) work.push_back(m);
      }
    }
    return from_members(std::move(out));
  }

  bool operator==(const HfSet& o) const {
    if (node_ == o.node_) return true;
    if (node_->hash != o.node_->hash || node_->rank != o.node_->rank) return false;
    if (node_->small_valid && o.node_->small_valid) return node_->small_index == o.node_->small_index;
    const auto& a = node_->members;
    const auto& b = o.node_->members;
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!(a[i] == b[i])) return false;
    return true;
  }
  bool operator!=(const HfSet& o) const { return !(*this == o); }

  // Total order by Ackermann index, computed structurally so that sets whose
  // indices exceed any bit budget still compare. a(x) < a(y) iff the largest
  // member of the symmetric difference belongs to y.
  static int compare(const HfSet& a, const HfSet& b) {
    if (a.node_ == b.node_) return 0;
    bool sa = a.node_->small_valid, sb = b.node_->small_valid;
    if (sa && sb) {
      if (a.node_->small_index < b.node_->small_index) return -1;
      if (a.node_->small_index > b.node_->small_index) return 1;
      return 0;
    }
    if (sa != sb) return sa ? -1 : 1;  // small index means < 2^64, the other is larger
    const auto& ma = a.node_->members;
    const auto& mb = b.node_->members;
    std::size_t ia = ma.size(), ib = mb.size();
    while (ia > 0 && ib > 0) {
      int c = compare(ma[ia - 1], mb[ib - 1]);
      if (c != 0) return c;
      --ia;
      --ib;
    }
    if (ia == ib) return 0;
    return ia < ib ? -1 : 1;
  }

  bool operator<(const HfSet& o) const { return compare(*this, o) < 0; }

  std::size_t hash() const { return node_->hash; }

  struct Hash {
    std::size_t operator()(const HfSet& s) const { return s.hash(); }
  };

  /// Renders `#n` when the Ackermann index is below 2^16, braces otherwise.
  std::string to_string() const {
    if (node_->small_valid && node_->small_index < 65536) return "#" + std::to_string(node_->small_index);
    std::string out = "{";
    const auto& ms = members();
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (i) out += ",";
      out += ms[i].to_string();
    }
    out += "}";
    return out;
  }

  /// Parses the literal grammar `hf := '{' [hf (',' hf)*] '}' | '#' digits`.
  static HfSet parse(std::string_view text) {
    std::size_t pos = 0;
    HfSet result = parse_at(text, pos);
    skip_ws(text, pos);
    if (pos != text.size()) throw_syntax(pos, {"end of input"});
    return result;
  }

  // Parses one literal starting at pos; advances pos. Used by the formula parser.
  static HfSet parse_at(std::string_view text, std::size_t& pos) {
    skip_ws(text, pos);
    if (pos >= text.size()) throw_syntax(pos, {"'{'", "'#'"});
    if (text[pos] == '#') {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == start) throw_syntax(pos, {"digits"});
      Nat n(std::string(text.substr(start, pos - start)));
      return from_ackermann_index(n);
    }
    if (text[pos] == '{') {
      ++pos;
      std::vector<HfSet> ms;
      skip_ws(text, pos);
      if (pos < text.size() && text[pos] == '}') {
        ++pos;
        return empty();
      }
      while (true) {
        ms.push_back(parse_at(text, pos));
        skip_ws(text, pos);
        if (pos >= text.size()) throw_syntax(pos, {"','", "'}'"});
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] == '}') {
          ++pos;
          return from_members(std::move(ms));
        }
        throw_syntax(pos, {"','", "'}'"});
      }
    }
    throw_syntax(pos, {"'{'", "'#'"});
  }

 private:
  struct Node {
    std::vector<HfSet> members;  // ascending Ackermann order, no duplicates
    unsigned rank = 0;
    std::size_t hash = 0;
    std::uint64_t small_index = 0;
    bool small_valid = false;
  };

  std::shared_ptr<const Node> node_;

  explicit HfSet(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static const std::shared_ptr<const Node>& empty_node() {
    static const std::shared_ptr<const Node> e = [] {
      auto n = std::make_shared<Node>();
      n->rank = 0;
      n->hash = 0x9e3779b97f4a7c15ull;
      n->small_index = 0;
      n->small_valid = true;
      return n;
    }();
    return e;
  }

  static std::shared_ptr<const Node> make_node(std::vector<HfSet> sorted_unique) {
    if (sorted_unique.empty()) return empty_node();
    auto n = std::make_shared<Node>();
    unsigned r = 0;
    std::size_t h = 0x9e3779b97f4a7c15ull;
    bool small = true;
    std::uint64_t idx = 0;
    for (const auto& m : sorted_unique) {
      r = std::max(r, m.rank() + 1);
      h ^= m.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      if (small && m.node_->small_valid && m.node_->small_index < 64)
        idx += std::uint64_t{1} << m.node_->small_index;
      else
        small = false;
    }
    n->members = std::move(sorted_unique);
    n->rank = r;
    n->hash = h;
    n->small_valid = small;
    n->small_index = small ? idx : 0;
    return n;
  }

  static Nat index_rec(const Node* node, std::size_t max_bits,
                       std::unordered_map<const Node*, Nat>& memo) {
    if (node->small_valid) return Nat(node->small_index);
    auto it = memo.find(node);
    if (it != memo.end()) return it->second;
    Nat sum = 0;
    for (const auto& m : node->members) {
      Nat e = index_rec(m.node_.get(), max_bits, memo);
      if (e >= max_bits)
        throw Error(Errc::index_overflow,
                    "Ackermann index exceeds " + std::to_string(max_bits) + "-bit budget");
      Nat term = Nat(1) << unsigned(e);
      sum += term;
    }
    memo.emplace(node, sum);
    return sum;
  }

  static HfSet from_index_memo(std::size_t n, std::unordered_map<std::size_t, HfSet>& memo) {
    if (n == 0) return empty();
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;
    std::vector<HfSet> ms;
    std::size_t v = n;
    std::size_t bit = 0;
    while (v) {
      if (v & 1) ms.push_back(from_index_memo(bit, memo));
      v >>= 1;
      ++bit;
    }
    HfSet s = from_members(std::move(ms));
    memo.emplace(n, s);
    return s;
  }

  static std::size_t bit_length(const Nat& n) {
    if (n == 0) return 0;
    return boost::multiprecision::msb(n) + 1;
  }

  static void skip_ws(std::string_view text, std::size_t& pos) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
};

using HfSetHash = HfSet::Hash;

}  // namespace hff
