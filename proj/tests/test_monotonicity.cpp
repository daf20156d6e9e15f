#include <doctest.h>

#include "koblab/monotonicity.hpp"
#include "support.hpp"

using namespace koblab;
using doctest::Approx;

TEST_CASE("pointwise comparison is tight for concentric discs and balls") {
  const auto d = lemma_compare_bound(Domain::disc(0.0, 1.0), Domain::disc(0.0, 2.0), {0.0}, 8);
  CHECK(d.delta == Approx(1.0));
  CHECK(d.b_lower == Approx(1.0));
  CHECK(d.c_bound == Approx(0.5));
  CHECK(d.observed_ratio == Approx(0.5));
  const auto b = lemma_compare_bound(Domain::ball(2, 1.0), Domain::ball(2, 1.25), {0.0, 0.0}, 8);
  CHECK(b.delta == Approx(0.25));
  CHECK(b.c_bound == Approx(0.8));
  CHECK(b.observed_ratio == Approx(0.8));
}

TEST_CASE("pointwise comparison bounds every probe") {
  auto g = testing::rng(41);
  for (int i = 0; i < 100; ++i) {
    const auto p = testing::random_in_ball(g, 2, 0.9);
    const auto r = lemma_compare_bound(Domain::ball(2, 1.0), Domain::ball(2, 1.5), CPoint(p), 6, {{}, g(), 1});
    CHECK(r.observed_ratio <= r.c_bound + 1e-12);
    CHECK(r.c_bound < 1.0);
  }
  const auto a = lemma_compare_bound(Domain::annulus(1.0, 2.0), Domain::annulus(0.5, 4.0), {1.5}, 4);
  CHECK(a.c_bound < 1.0);
  CHECK(a.observed_ratio <= a.c_bound);
}

TEST_CASE("uniform constants") {
  const auto d = uniform_monotonicity_constant(Domain::disc(0.0, 1.0), Domain::disc(0.0, 2.0), 64);
  CHECK(d.c <= 0.51);
  CHECK(d.c > 0.0);
  const auto b = uniform_monotonicity_constant(Domain::ball(2, 1.0), Domain::ball(2, 2.0), 64);
  CHECK(b.c <= 0.51);
  CHECK(b.c_certified < 1.0);
  const auto t = uniform_monotonicity_constant(Domain::tube_sphere(1, 0.2), Domain::tube_sphere(1, 0.4), 6);
  CHECK(t.c < 1.0);
  CHECK(t.c_certified < 1.0);
  CHECK_THROWS_AS(uniform_monotonicity_constant(Domain::disc(0.0, 2.0), Domain::disc(0.0, 1.0), 4), DomainError);
}

TEST_CASE("probe directions are unit vectors starting with the axes") {
  const auto dirs = probe_directions(3, 8, 1);
  REQUIRE(dirs.size() == 8);
  CHECK(dirs[0] == CVec{1.0, 0.0, 0.0});
  for (const auto& v : dirs) CHECK(norm(v) == Approx(1.0));
}
