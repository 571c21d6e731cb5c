#include <catch2/catch_amalgamated.hpp>

#include "hff/hfset.hpp"

using namespace hff;

namespace {

std::vector<HfSet> first_sets(std::size_t n) {
  std::vector<HfSet> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) v.push_back(HfSet::from_ackermann_index(std::uint64_t(i)));
  return v;
}

}  // namespace

TEST_CASE("empty set basics") {
  HfSet e = HfSet::empty();
  CHECK(e.rank() == 0);
  CHECK(e.cardinality() == 0);
  CHECK(e.ackermann_index() == 0);
  CHECK(e.to_string() == "#0");
  CHECK(e == HfSet::from_members({}));
}

TEST_CASE("from_members deduplicates and orders by Ackermann index") {
  HfSet e = HfSet::empty();
  HfSet se = HfSet::singleton(e);    // {{}} = #1
  HfSet sse = HfSet::singleton(se);  // {{{}}} = #2

  CHECK(HfSet::from_members({e}) == HfSet::singleton(e));
  CHECK(HfSet::from_members({e, e}) == HfSet::singleton(e));

  // {{{}}, {}}: indices 2 and 0, so {} must come first.
  HfSet s = HfSet::from_members({sse, e});
  REQUIRE(s.cardinality() == 2);
  CHECK(s.members()[0] == e);
  CHECK(s.members()[1] == sse);
  CHECK(s.members()[0].ackermann_index() == 0);
  CHECK(s.members()[1].ackermann_index() == 2);

  // extensionality: order and repetition of inputs do not matter
  CHECK(HfSet::from_members({sse, e, e}) == HfSet::from_members({e, sse}));
}

TEST_CASE("ackermann index of small sets") {
  HfSet e = HfSet::empty();
  HfSet se = HfSet::singleton(e);
  HfSet sse = HfSet::singleton(se);
  CHECK(se.ackermann_index() == 1);
  CHECK(sse.ackermann_index() == 2);
  CHECK(HfSet::from_members({e, se}).ackermann_index() == 3);
  // von Neumann 3 = {0,1,2} has index 2^0 + 2^1 + 2^3 = 11
  CHECK(HfSet::von_neumann(3).ackermann_index() == 11);
  CHECK(HfSet::from_ackermann_index(std::uint64_t(11)) == HfSet::von_neumann(3));
  CHECK(HfSet::from_ackermann_index(std::uint64_t(3)) == HfSet::from_members({e, se}));
}

TEST_CASE("ackermann bijection round trip") {
  for (std::uint64_t n = 0; n < 4096; ++n) {
    HfSet s = HfSet::from_ackermann_index(n);
    CHECK(s.ackermann_index() == n);
    CHECK(s.small_index().value() == n);
  }
}

TEST_CASE("ackermann order agrees with numeric order") {
  auto sets = first_sets(512);
  for (std::size_t a = 0; a < sets.size(); a += 7)
    for (std::size_t b = 0; b < sets.size(); b += 5) {
      int c = HfSet::compare(sets[a], sets[b]);
      int expect = a < b ? -1 : a > b ? 1 : 0;
      REQUIRE(c == expect);
    }
}

TEST_CASE("members have strictly smaller index than the set") {
  auto sets = first_sets(1024);
  for (const auto& s : sets)
    for (const auto& m : s.members()) REQUIRE(HfSet::compare(m, s) < 0);
}

TEST_CASE("rank") {
  CHECK(HfSet::empty().rank() == 0);
  CHECK(HfSet::from_members({HfSet::empty(), HfSet::singleton(HfSet::empty())}).rank() == 2);

  // rank(pair(a,b)) = max(rank a, rank b) + 2, exhaustively over V_3 x V_3
  auto v3 = first_sets(4);
  for (const auto& a : v3)
    for (const auto& b : v3) {
      HfSet p = HfSet::kuratowski_pair(a, b);
      REQUIRE(p.rank() == std::max(a.rank(), b.rank()) + 2);
    }
}

TEST_CASE("kuratowski pairs") {
  HfSet e = HfSet::empty();
  // {{a},{a,a}} collapses to {{a}}
  CHECK(HfSet::kuratowski_pair(e, e) == HfSet::singleton(HfSet::singleton(e)));

  auto v3 = first_sets(4);
  for (const auto& a : v3)
    for (const auto& b : v3) {
      auto [x, y] = HfSet::kuratowski_pair(a, b).unpair();
      REQUIRE(x == a);
      REQUIRE(y == b);
    }

  CHECK_THROWS_MATCHES(HfSet::singleton(e).unpair(), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::not_a_pair; }));
}

TEST_CASE("von neumann ordinals, closure, cardinality") {
  HfSet e = HfSet::empty();
  CHECK(HfSet::von_neumann(2) == HfSet::from_members({e, HfSet::singleton(e)}));
  CHECK(HfSet::von_neumann(5).cardinality() == 5);

  // transitive_closure({{{}}}) has members {{}} and {}
  HfSet x = HfSet::singleton(HfSet::singleton(e));
  HfSet tc = x.transitive_closure();
  CHECK(tc == HfSet::from_members({HfSet::singleton(e), e}));

  // closure of an ordinal is the ordinal's members
  CHECK(HfSet::von_neumann(4).transitive_closure() == HfSet::von_neumann(4));
}

TEST_CASE("index overflow fails loudly") {
  // {von_neumann(5)} has index 2^a(5) with a(5) ~ 2^2059, far past the budget.
  HfSet big = HfSet::singleton(HfSet::von_neumann(5));
  CHECK_THROWS_MATCHES(big.ackermann_index(), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == Errc::index_overflow; }));
  // von_neumann(5) itself is computable (2060 bits)
  CHECK(HfSet::von_neumann(5).ackermann_index() > 0);
  CHECK_FALSE(HfSet::von_neumann(5).small_index().has_value());
}

TEST_CASE("literal printing and parsing") {
  CHECK(HfSet::parse("#0") == HfSet::empty());
  CHECK(HfSet::parse("{}") == HfSet::empty());
  CHECK(HfSet::parse("{{},{{}}}") == HfSet::from_ackermann_index(std::uint64_t(3)));
  CHECK(HfSet::parse(" { { } , { { } } } ") == HfSet::parse("#3"));
  CHECK(HfSet::parse("#65535").to_string() == "#65535");

  for (std::uint64_t n : {0ull, 1ull, 7ull, 100ull, 65535ull}) {
    HfSet s = HfSet::from_ackermann_index(n);
    CHECK(HfSet::parse(s.to_string()) == s);
  }

  // beyond 2^16 the rendering switches to braces
  HfSet big = HfSet::from_ackermann_index(std::uint64_t(65536));
  CHECK(big.to_string().front() == '{');
  CHECK(HfSet::parse(big.to_string()) == big);

  CHECK_THROWS_AS(HfSet::parse("{"), Error);
  CHECK_THROWS_AS(HfSet::parse("#"), Error);
  CHECK_THROWS_AS(HfSet::parse("{} {}"), Error);
}

TEST_CASE("initial segments of the Ackermann order are transitive") {
  auto sets = first_sets(256);
  for (std::size_t n = 1; n < sets.size(); n *= 2) {
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& m : sets[i].members()) {
        auto idx = m.small_index();
        REQUIRE(idx.has_value());
        REQUIRE(*idx < n);
      }
  }
}
