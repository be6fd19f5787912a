#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "pseudogas/diagrammatics.hpp"
#include "pseudogas/errors.hpp"

using namespace pseudogas;
using namespace pseudogas::diagrams;

TEST_CASE("small foams") {
  CHECK(random_foam(1, 3).vertices_per_loop == std::vector<int>{0});
  CHECK(random_foam(2, 3).vertices_per_loop == std::vector<int>{1, 1});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = random_foam(5, seed);
    CHECK(std::accumulate(f.vertices_per_loop.begin(), f.vertices_per_loop.end(), 0) == 8);
  }
  CHECK_THROWS_AS(random_foam(0, 1), ConfigError);
}

TEST_CASE("coefficient sums by hand") {
  CHECK(coefficient_sum({{1, 1}}) == 1.0);
  CHECK(coefficient_sum({{2, 1, 1}}) == 1.0);
  CHECK(coefficient_sum({{3, 1, 1, 1}}) == 1.0);
  CHECK(coefficient_sum({{0}}) == 0.0);
  CHECK(coefficient_sum_exact({{1, 1}}) == HalfInteger{2});
}

TEST_CASE("invalid shapes") {
  CHECK_FALSE(FoamShape{{2, 2}}.valid());
  CHECK_FALSE(FoamShape{{0, 2}}.valid());
  CHECK_FALSE(FoamShape{}.valid());
  CHECK_THROWS_AS(coefficient_sum({{2, 2}}), ConfigError);
}

TEST_CASE("random foams satisfy the loop-vertex identity and sum to one") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 49);
    const auto f = random_foam(n, seed * 7919 + 1);
    CHECK(f.loop_count() == n);
    CHECK(f.valid());
    CHECK(std::accumulate(f.vertices_per_loop.begin(), f.vertices_per_loop.end(), 0) == 2 * n - 2);
    CHECK(coefficient_sum_exact(f).twice == 2);
  }
}

TEST_CASE("large vertex counts stay exact") {
  // A star: one loop carries every vertex, binomials up to C(199, 99).
  FoamShape star;
  star.vertices_per_loop.assign(200, 1);
  star.vertices_per_loop[0] = 199;
  CHECK(coefficient_sum(star) == 1.0);
}

TEST_CASE("same seed, same foam") {
  CHECK(random_foam(30, 99).vertices_per_loop == random_foam(30, 99).vertices_per_loop);
}

TEST_CASE("ring resummation") {
  CHECK(ring_sum_check(0.3, 0.0, 1, 10).truncated == 0.0);
  CHECK(ring_sum_check(0.3, 0.0, 1, 10).closed == 0.0);
  CHECK(ring_sum_check(0.1, 1.0, 1, 60).gap < 1e-10);
  CHECK(ring_sum_check(-0.5, 1.0, -1, 80).gap < 1e-10);
  CHECK(ring_sum_check(0.5, 1.0, 1, 80).gap < 1e-10);
  CHECK_THROWS_AS(ring_sum_check(1.0, 1.0, 1, 20), DomainError);
  CHECK_THROWS_AS(ring_sum_check(0.1, 1.0, 1, 9), ConfigError);
  CHECK_THROWS_AS(ring_sum_check(0.1, 1.0, 0, 20), ConfigError);
}

TEST_CASE("ring gap falls geometrically with ratio |ab|") {
  for (int s : {1, -1}) {
    const double x = 0.5;
    const double g1 = ring_sum_check(x, 1.0, s, 20).gap;
    const double g2 = ring_sum_check(x, 1.0, s, 30).gap;
    const double ratio = std::pow(g2 / g1, 1.0 / 10.0);
    CHECK(ratio == doctest::Approx(x).epsilon(0.1));
  }
}
