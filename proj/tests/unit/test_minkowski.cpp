#include "doctest.h"

#include <cmath>
#include <set>

#include "uos/bounds.hpp"
#include "uos/minkowski.hpp"
#include "uos/random.hpp"

using namespace uos;

namespace {

// Reference count with explicit integer tuples in an ordered set.
std::int64_t reference_box_count(const PointCloud& cloud, double rho, double shift) {
  std::set<std::vector<long long>> cells;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    std::vector<long long> key;
    for (int d = 0; d < cloud.ambient_dim(); ++d)
      key.push_back(static_cast<long long>(std::floor((p[d] - (cloud.lower()[d] - shift * rho)) / rho)));
    cells.insert(key);
  }
  return static_cast<std::int64_t>(cells.size());
}

}  // namespace

TEST_CASE("box_count trivial clouds") {
  const PointCloud one(3, {0.2, -1.0, 4.0});
  for (double rho : {1.0, 0.01, 1e-6}) CHECK(box_count(one, rho) == 1);

  const PointCloud two(2, {0.0, 0.0, 0.3, 0.0});
  CHECK(box_count(two, 0.5) == 1);
  CHECK(box_count(two, 0.2) == 2);
}

TEST_CASE("box_count errors") {
  CHECK_THROWS_AS(PointCloud(2, {}), Error);
  try {
    PointCloud(2, {});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyInput);
  }
  const PointCloud one(1, {0.0});
  CHECK_THROWS_AS(box_count(one, 0.0), Error);
  CHECK_THROWS_AS(PointCloud(1, {NAN}), Error);
}

TEST_CASE("box_count agrees with a set-of-tuples reference") {
  Rng rng(77);
  std::uniform_real_distribution<double> u(-2.0, 3.0);
  for (int dim : {1, 2, 3, 5, 9, 12}) {
    std::vector<double> coords(static_cast<std::size_t>(dim) * 3000);
    for (auto& c : coords) c = u(rng);
    // Snap half the points onto a coarse lattice so cells repeat.
    for (std::size_t i = 0; i < coords.size() / 2; ++i) coords[i] = std::round(coords[i] * 2.0) / 2.0;
    const PointCloud cloud(dim, coords);
    for (double rho : {2.0, 0.5, 0.13, 1e-3})
      for (double shift : {0.0, 0.5}) REQUIRE(box_count(cloud, rho, shift) == reference_box_count(cloud, rho, shift));
  }
}

TEST_CASE("unit square occupancy at rho = 1/32") {
  const auto square = sample_unit_square(1'000'000, 5);
  const auto count = box_count(square, 1.0 / 32.0);
  CHECK(count >= 0.95 * 1024);
  CHECK(count <= 1024);
}

TEST_CASE("parallel box counts equal the serial reference") {
  const auto cloud = sample_rank1_2x2(200'000, 9);
  const auto ladder = dyadic_ladder(1, 7);
  CHECK(box_counts(cloud, ladder) == box_counts_serial(cloud, ladder));
  CHECK(box_counts(cloud, ladder, 0.5) == box_counts_serial(cloud, ladder, 0.5));
}

TEST_CASE("estimate_dimension calibration sets") {
  const auto ladder = dyadic_ladder(2, 6);
  const auto square = estimate_dimension(sample_unit_square(1'000'000, 1), ladder);
  CHECK(square.slope == doctest::Approx(2.0).epsilon(0.05));
  CHECK(square.fit_begin == 1);
  CHECK(square.fit_end == 4);
  CHECK(square.lower_slope <= square.slope);
  CHECK(square.upper_slope >= square.slope);

  const auto segment = estimate_dimension(sample_segment(1'000'000, 3, 2), ladder);
  CHECK(std::abs(segment.slope - 1.0) <= 0.1);

  const auto rank1 = estimate_dimension(sample_rank1_2x2(1'000'000, 3), dyadic_ladder(1, 5));
  CHECK(std::abs(rank1.slope - 3.0) <= 0.75);
}

TEST_CASE("estimate_dimension argument checks") {
  const auto cloud = sample_unit_square(100, 1);
  CHECK_THROWS_AS(estimate_dimension(cloud, std::vector<double>{0.5, 0.25}), Error);
  CHECK_THROWS_AS(estimate_dimension(cloud, std::vector<double>{0.5, 0.25, 0.25}), Error);
  CHECK_THROWS_AS(estimate_dimension(cloud, std::vector<double>{0.5, 0.25, 0.125}, FitPolicy::middle_window(1)), Error);
  CHECK_NOTHROW(estimate_dimension(cloud, std::vector<double>{0.5, 0.25, 0.125}, FitPolicy::all_points()));
}

TEST_CASE("anchor shift changes the slope only slightly") {
  const auto ladder = dyadic_ladder(2, 6);
  for (const auto& cloud : {sample_unit_square(300'000, 4), sample_segment(300'000, 3, 5)}) {
    const double a = estimate_dimension(cloud, ladder).slope;
    const double b = estimate_dimension(cloud, ladder, {}, 0.5).slope;
    CHECK(std::abs(a - b) < 0.2);
  }
}

TEST_CASE("union takes the max, product adds") {
  const auto ladder = dyadic_ladder(2, 6);
  const auto square = sample_unit_square(500'000, 6);
  const auto line = sample_segment(500'000, 2, 7);
  const double s_square = estimate_dimension(square, ladder).slope;
  const double s_line = estimate_dimension(line, ladder).slope;
  const double s_union = estimate_dimension(union_cloud(square, line), ladder).slope;
  CHECK(s_union >= std::max(s_square, s_line) - 0.3);
  CHECK(s_union <= std::max(s_square, s_line) + 0.5);

  const auto a = sample_segment(500'000, 1, 8);
  const auto b = sample_segment(500'000, 1, 9);
  const double s_a = estimate_dimension(a, ladder).slope;
  const double s_b = estimate_dimension(b, ladder).slope;
  const double s_prod = estimate_dimension(product_cloud(a, b), ladder).slope;
  CHECK(std::abs(s_prod - (s_a + s_b)) <= 0.5);
  CHECK(std::abs(s_prod - 2.0) <= 0.15);
}

TEST_CASE("uos_cloud examples") {
  SubspaceEnsemble zero;
  zero.m = 2;
  zero.ranks = {0};
  const auto flat = uos_cloud(zero, 3, 1000, 1);
  for (double v : flat.coords()) REQUIRE(v == 0.0);
  CHECK(estimate_dimension(flat, dyadic_ladder()).slope == 0.0);

  SubspaceEnsemble rank1;
  rank1.m = 2;
  rank1.ranks = {1};
  const auto r1 = estimate_dimension(uos_cloud(rank1, 2, 1'000'000, 2), dyadic_ladder());
  CHECK(std::abs(r1.slope - 3.0) <= 0.75);

  SubspaceEnsemble pair;
  pair.m = 2;
  pair.ranks = {1, 1};
  const auto p = estimate_dimension(uos_cloud(pair, 3, 300'000, 3), dyadic_ladder());
  CHECK(p.slope <= dim_bound({2, 3, {1, 1}}) + 0.5);

  SubspaceEnsemble big;
  big.m = 3;
  big.ranks = {1};
  try {
    uos_cloud(big, 3, 10, 1);
    FAIL("expected InvalidDimension");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidDimension);
  }
}
