#include "doctest.h"

#include <algorithm>
#include <functional>

#include "uos/bounds.hpp"
#include "uos/common.hpp"

using namespace uos;

namespace {

// Independent route: maximize sum_i r_i (m + n_i - r_i) over every split of
// the n columns into cluster sizes (n_1..n_K).
std::int64_t brute_force_dimension(int m, int n, const std::vector<int>& ranks) {
  std::int64_t best = INT64_MIN;
  std::vector<int> sizes(ranks.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == ranks.size()) {
      sizes[i] = left;
      std::int64_t total = 0;
      for (std::size_t j = 0; j < ranks.size(); ++j)
        total += static_cast<std::int64_t>(ranks[j]) * (m + sizes[j] - ranks[j]);
      best = std::max(best, total);
      return;
    }
    for (int s = 0; s <= left; ++s) {
      sizes[i] = s;
      rec(i + 1, left - s);
    }
  };
  rec(0, n);
  return best;
}

}  // namespace

TEST_CASE("dim_bound examples") {
  CHECK(dim_bound({10, 12, {2, 3}}) == 73);
  CHECK(dim_bound({7, 9, {0, 0, 0}}) == 0);
  CHECK(dim_bound({5, 4, {2}}) == 14);
  CHECK(dim_bound({20, 24, {2, 2}}) == 120);
  CHECK(dim_bound({4, 6, {1, 1}}) == 12);
  CHECK(dim_bound({2, 3, {1, 1}}) == 5);
}

TEST_CASE("uos_sufficient_count examples") {
  // Kr(m - r) + nr + 1 with K = 2, r = 2, m = 8, n = 4
  CHECK(uos_sufficient_count({8, 4, {2, 2}}) == 2 * 2 * (8 - 2) + 4 * 2 + 1);
  CHECK(uos_sufficient_count({8, 4, {2, 2}}) == 33);
  CHECK(uos_sufficient_count({3, 3, {0, 0}}) == 1);
  CHECK(uos_sufficient_count({8, 12, {2, 2}}) == 49);
}

TEST_CASE("single_subspace_count examples and errors") {
  CHECK(single_subspace_count(8, 4, 4) == 33);
  CHECK(single_subspace_count(8, 4, 0) == 1);
  CHECK(single_subspace_count(8, 12, 4) == 65);
  try {
    single_subspace_count(8, 4, 5);
    FAIL("expected InvalidRank");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidRank);
  }
}

TEST_CASE("uos_savings examples and domain error") {
  CHECK(uos_savings(8, 4, 2, 2) == 0);
  CHECK(uos_savings(8, 12, 2, 2) == 16);
  CHECK(single_subspace_count(8, 12, 4) - uos_sufficient_count({8, 12, {2, 2}}) == 16);
  CHECK(uos_savings(9, 7, 1, 3) == 0);
  try {
    uos_savings(8, 3, 2, 2);
    FAIL("expected Domain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
}

TEST_CASE("savings identity over all small equal-rank shapes") {
  for (int m = 1; m <= 20; ++m)
    for (int n = 1; n <= 20; ++n)
      for (int K = 1; K <= 4; ++K)
        for (int r = 0; r <= 3; ++r) {
          const int kr = K * r;
          if (n < kr || kr > std::min(m, n)) continue;
          const ProblemShape shape{m, n, std::vector<int>(K, r)};
          REQUIRE(single_subspace_count(m, n, kr) - uos_sufficient_count(shape) == uos_savings(m, n, K, r));
          if (n == kr) REQUIRE(uos_savings(m, n, K, r) == 0);
        }
}

TEST_CASE("dim_bound matches maximization over cluster sizes") {
  for (int m = 1; m <= 6; ++m)
    for (int n = 1; n <= 6; ++n)
      for (std::vector<int> ranks : {std::vector<int>{1}, {2, 1}, {0, 3}, {1, 1, 2}, {3, 2, 1, 0}}) {
        if (*std::max_element(ranks.begin(), ranks.end()) > m) continue;
        REQUIRE(dim_bound({m, n, ranks}) == brute_force_dimension(m, n, ranks));
      }
}

TEST_CASE("K=1 collapse and monotonicity in m and n") {
  for (int m = 1; m <= 20; ++m)
    for (int n = 1; n <= 20; ++n)
      for (int r = 0; r <= m; ++r) REQUIRE(dim_bound({m, n, {r}}) == static_cast<std::int64_t>(r) * (m + n - r));

  const std::vector<int> ranks{3, 1, 2};
  for (int m = 3; m < 20; ++m)
    for (int n = 1; n < 20; ++n) {
      REQUIRE(dim_bound({m + 1, n, ranks}) >= dim_bound({m, n, ranks}));
      REQUIRE(dim_bound({m, n + 1, ranks}) >= dim_bound({m, n, ranks}));
    }
}

TEST_CASE("make_bound_report") {
  const auto plain = make_bound_report({8, 12, {2, 2}});
  CHECK(plain.dimension == 48);
  CHECK(plain.sufficient == 49);
  CHECK_FALSE(plain.single_subspace.has_value());
  CHECK_FALSE(plain.savings.has_value());

  const auto cmp = make_bound_report({8, 12, {2, 2}}, 4);
  REQUIRE(cmp.single_subspace.has_value());
  CHECK(*cmp.single_subspace == 65);
  CHECK(*cmp.savings == uos_savings(8, 12, 2, 2));
}
