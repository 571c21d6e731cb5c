#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <vector>

#include "hff/core.hpp"
#include "hff/error.hpp"
#include "hff/hfset.hpp"

namespace hff {

// Deterministic enumeration psi_0, psi_1, ... of all well-formed core
// formulas, ordered by token length and then lexicographically by token id
// (Mem < Eq < Not < And < Exists < X < P < v0 < v1 < ...). The order is a
// frozen compatibility surface: epsilon objects are only comparable between
// builds that share it.
//
// Counting: F(L,d) = number of core formulas of exactly L tokens with de
// Bruijn depth budget d. Terms are single tokens (X, P, or one of d bound
// variables), so atoms occupy exactly three tokens.
//   F(3,d) = 2*(2+d)^2
//   F(L,d) = F(L-1,d) + sum_{i} F(i,d)*F(L-1-i,d) + F(L-1,d+1)   for L > 3
class Enumeration {
 public:
  static CoreFormula at(std::uint64_t n) {
    Nat rem(n);
    std::size_t len = 3;
    while (true) {
      Nat f = count(len, 0);
      if (rem < f) break;
      rem -= f;
      ++len;
    }
    std::vector<std::uint32_t> toks = unrank(len, rem);
    return CoreFormula::from_tokens(toks);
  }

  static Nat index_of(const CoreFormula& f) {
    std::vector<std::uint32_t> toks = f.tokens();
    std::size_t len = toks.size();
    Nat idx = 0;
    for (std::size_t l = 3; l < len; ++l) idx += count(l, 0);
    idx += rank_within(toks);
    return idx;
  }

  // index_of when it fits in 64 bits; throws IndexTooLarge otherwise.
  static std::uint64_t index_of_u64(const CoreFormula& f) {
    Nat n = index_of(f);
    if (n > std::numeric_limits<std::uint64_t>::max()) {
      Error e(Errc::index_too_large, "enumeration index exceeds 64 bits");
      throw e;
    }
    return n.convert_to<std::uint64_t>();
  }

  // Number of core formulas with exactly `len` tokens at depth budget `depth`.
  static Nat count(std::size_t len, unsigned depth) {
    static std::map<std::uint64_t, Nat> memo;
    static std::mutex mu;
    if (len < 3) return 0;
    std::uint64_t key = (std::uint64_t(len) << 32) | depth;
    {
      std::lock_guard<std::mutex> lock(mu);
      auto it = memo.find(key);
      if (it != memo.end()) return it->second;
    }
    Nat r = 0;
    if (len == 3) {
      Nat t(2 + depth);
      r = 2 * t * t;
    } else {
      r += count(len - 1, depth);      // Not
      r += count(len - 1, depth + 1);  // Exists
      for (std::size_t i = 3; i + 4 <= len; ++i)
        r += count(i, depth) * count(len - 1 - i, depth);  // And
    }
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(key, r);
    return r;
  }

 private:
  struct Item {
    bool is_term;
    unsigned depth;
  };

  // Number of ways to realize the pending items in exactly `rem` tokens.
  static Nat ways(const std::deque<Item>& items, std::size_t skip, std::size_t rem) {
    // W[m] = ways for the current suffix using m tokens, built back to front.
    std::vector<Nat> w(rem + 1);
    w[0] = 1;
    for (std::size_t k = items.size(); k-- > skip;) {
      std::vector<Nat> nw(rem + 1);
      if (items[k].is_term) {
        Nat t(2 + items[k].depth);
        for (std::size_t m = 1; m <= rem; ++m)
          if (w[m - 1] != 0) nw[m] = w[m - 1] * t;
      } else {
        for (std::size_t m = 3; m <= rem; ++m) {
          Nat acc = 0;
          for (std::size_t l = 3; l <= m; ++l) {
            if (w[m - l] == 0) continue;
            Nat c = count(l, items[k].depth);
            if (c != 0) acc += c * w[m - l];
          }
          nw[m] = acc;
        }
      }
      w = std::move(nw);
    }
    return w[rem];
  }

  // Children pushed when a formula token is chosen, front-first.
  static void push_children(std::deque<Item>& pending, std::uint32_t tok, unsigned d) {
    switch (tok) {
      case kTokMem:
      case kTokEq:
        pending.push_front(Item{true, d});
        pending.push_front(Item{true, d});
        return;
      case kTokNot:
        pending.push_front(Item{false, d});
        return;
      case kTokAnd:
        pending.push_front(Item{false, d});
        pending.push_front(Item{false, d});
        return;
      case kTokExists:
        pending.push_front(Item{false, d + 1});
        return;
      default:
        throw Error(Errc::decode_error, "not a formula token");
    }
  }

  static std::vector<std::uint32_t> unrank(std::size_t len, Nat r) {
    std::deque<Item> pending;
    pending.push_back(Item{false, 0});
    std::vector<std::uint32_t> out;
    std::size_t rem = len;
    while (!pending.empty()) {
      Item item = pending.front();
      pending.pop_front();
      if (item.is_term) {
        Nat rest = ways(pending, 0, rem - 1);
        Nat q = r / rest;
        r %= rest;
        std::uint64_t idx = q.convert_to<std::uint64_t>();
        out.push_back(idx == 0 ? kTokSlotX : idx == 1 ? kTokSlotP : kTokVar0 + std::uint32_t(idx - 2));
        --rem;
        continue;
      }
      bool chosen = false;
      for (std::uint32_t tok : {kTokMem, kTokEq, kTokNot, kTokAnd, kTokExists}) {
        std::deque<Item> cand = pending;
        push_children(cand, tok, item.depth);
        Nat c = ways(cand, 0, rem - 1);
        if (r < c) {
          out.push_back(tok);
          pending = std::move(cand);
          --rem;
          chosen = true;
          break;
        }
        r -= c;
      }
      if (!chosen) throw std::logic_error("enumeration unrank: rank out of range");
    }
    return out;
  }

  // Lexicographic rank of a token string among valid strings of its length.
  static Nat rank_within(const std::vector<std::uint32_t>& toks) {
    std::deque<Item> pending;
    pending.push_back(Item{false, 0});
    std::size_t rem = toks.size();
    Nat r = 0;
    for (std::uint32_t actual : toks) {
      if (pending.empty()) throw Error(Errc::decode_error, "trailing tokens in rank");
      Item item = pending.front();
      pending.pop_front();
      if (item.is_term) {
        std::uint64_t idx;
        if (actual == kTokSlotX)
          idx = 0;
        else if (actual == kTokSlotP)
          idx = 1;
        else if (actual >= kTokVar0 && actual - kTokVar0 < item.depth)
          idx = 2 + (actual - kTokVar0);
        else
          throw Error(Errc::decode_error, "invalid term token in rank");
        if (idx) r += Nat(idx) * ways(pending, 0, rem - 1);
        --rem;
        continue;
      }
      bool matched = false;
      for (std::uint32_t tok : {kTokMem, kTokEq, kTokNot, kTokAnd, kTokExists}) {
        if (tok == actual) {
          push_children(pending, tok, item.depth);
          matched = true;
          break;
        }
        std::deque<Item> cand = pending;
        push_children(cand, tok, item.depth);
        r += ways(cand, 0, rem - 1);
      }
      if (!matched) throw Error(Errc::decode_error, "invalid formula token in rank");
      --rem;
    }
    if (!pending.empty()) throw Error(Errc::decode_error, "truncated token string in rank");
    return r;
  }
};

/// psi_n in the frozen enumeration order.
inline CoreFormula enumerate_core(std::uint64_t n) { return Enumeration::at(n); }

/// Inverse of enumerate_core.
inline Nat index_of(const CoreFormula& f) { return Enumeration::index_of(f); }

}  // namespace hff
