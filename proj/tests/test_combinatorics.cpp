#include "lcc/combinatorics.hpp"

#include <doctest.h>

#include <algorithm>

using namespace lcc;

TEST_CASE("binomial matches Pascal's triangle") {
  std::vector<std::vector<std::uint64_t>> pascal(63);
  for (int n = 0; n <= 62; ++n) {
    pascal[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + pascal[n - 1][k];
  }
  for (int n = 0; n <= 62; ++n)
    for (int k = 0; k <= n; ++k) CHECK(binomial(n, k) == pascal[n][k]);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(5, 6) == 0);
  CHECK_THROWS(binomial(63, 1));
}

TEST_CASE("subsets come out in lexicographic order") {
  const auto s = subsets_of(4, 2);
  std::vector<std::string> got;
  for (auto u : s) got.push_back(format_members(u, '.'));
  CHECK(got == std::vector<std::string>{"1.2", "1.3", "1.4", "2.3", "2.4", "3.4"});

  for (int n = 0; n <= 9; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto all = subsets_of(n, k);
      CHECK(all.size() == binomial(n, k));
      CHECK(std::is_sorted(all.begin(), all.end(), lex_less));
      for (std::size_t r = 0; r < all.size(); ++r) {
        CHECK(all[r].size() == k);
        CHECK(lex_rank(all[r], n) == r);
        CHECK(lex_unrank(r, n, k) == all[r]);
      }
    }
  }
  CHECK(subsets_of(3, 4).empty());
}

TEST_CASE("subsets of an arbitrary universe") {
  const std::vector<int> universe{6, 1, 4};
  std::vector<std::string> got;
  for_each_subset(universe, 2, [&](UserSet s) { got.push_back(format_members(s)); });
  CHECK(got == std::vector<std::string>{"2,5", "2,7", "5,7"});

  int calls = 0;
  for_each_subset(universe, 0, [&](UserSet s) {
    CHECK(s.empty());
    ++calls;
  });
  CHECK(calls == 1);
}

TEST_CASE("adding a disjoint fixed set keeps lexicographic order") {
  // Delivery relies on this when it builds subfile sets from a fixed part.
  for (std::uint32_t fixed = 0; fixed < (1u << 7); ++fixed) {
    std::vector<int> rest;
    for (int u = 0; u < 7; ++u)
      if (!(fixed >> u & 1u)) rest.push_back(u);
    for (int k = 0; k <= static_cast<int>(rest.size()); ++k) {
      std::vector<UserSet> built;
      for_each_subset(rest, k, [&](UserSet s) { built.push_back(s | UserSet(fixed)); });
      CHECK(std::is_sorted(built.begin(), built.end(), lex_less));
    }
  }
}

TEST_CASE("UserSet basics") {
  const std::vector<int> m{0, 2, 5};
  const auto s = UserSet::of(m);
  CHECK(s.size() == 3);
  CHECK(s.members() == m);
  CHECK(s.contains(2));
  CHECK_FALSE(s.contains(1));
  CHECK(s.includes(UserSet::of(std::vector<int>{0, 5})));
  CHECK_FALSE(s.includes(UserSet::of(std::vector<int>{1})));
  CHECK(s.without(2).with(3).members() == std::vector<int>{0, 3, 5});
  CHECK_THROWS(UserSet::of(std::vector<int>{32}));
}
