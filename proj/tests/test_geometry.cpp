#include <doctest.h>

#include "koblab/geometry.hpp"
#include "support.hpp"

using namespace koblab;

TEST_CASE("factories validate their parameters") {
  CHECK_THROWS_AS(Domain::disc(0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(Domain::annulus(2.0, 1.0), ConfigError);
  CHECK_THROWS_AS(Domain::ball(0, 1.0), ConfigError);
  CHECK_THROWS_AS(Domain::polydisc({1.0, -1.0}), ConfigError);
  CHECK_THROWS_AS(Domain::tube_circle(2, 0.0), ConfigError);
  CHECK_THROWS_AS(Domain::tube_sphere(0, 0.2), ConfigError);
  CHECK_THROWS_AS(CPoint({cplx(std::nan(""), 0.0)}), ConfigError);
}

TEST_CASE("dist_to_complement examples") {
  CHECK(dist_to_complement(Domain::disc(0.0, 1.0), {0.5}) == doctest::Approx(0.5));
  CHECK(dist_to_complement(Domain::annulus(1.0, 4.0), {2.0}) == doctest::Approx(1.0));
  CHECK(dist_to_complement(Domain::ball(2, 1.0), {0.6, 0.0}) == doctest::Approx(0.4));
  CHECK(dist_to_complement(Domain::polydisc({1.0, 2.0}), {0.5, 0.0}) == doctest::Approx(0.5));
  CHECK(dist_to_complement(Domain::tube_circle(2, 0.3), {1.1, 0.0}) == doctest::Approx(0.2));
  CHECK_THROWS_AS(dist_to_complement(Domain::disc(0.0, 1.0), {2.0}), DomainError);
}

TEST_CASE("signed distance is 1-Lipschitz and positive exactly inside") {
  auto g = testing::rng(3);
  const Domain ds[] = {Domain::disc(0.2, 1.0), Domain::annulus(0.5, 2.0), Domain::ball(2, 1.0),
                       Domain::polydisc({1.0, 0.5}), Domain::tube_circle(2, 0.3), Domain::tube_sphere(2, 0.25)};
  std::normal_distribution<double> nd(0.0, 1.0);
  for (const auto& d : ds) {
    for (int i = 0; i < 1000; ++i) {
      CVec a(static_cast<std::size_t>(d.dim())), b(a.size());
      for (auto& x : a) x = {nd(g), nd(g)};
      for (auto& x : b) x = {nd(g), nd(g)};
      const double sa = d.signed_distance(a), sb = d.signed_distance(b);
      CHECK(std::abs(sa - sb) <= distance(a, b) + 1e-12);
      CHECK(membership(d, CPoint(a)) == (sa > 0.0));
    }
  }
}

TEST_CASE("domain separation of nested pairs") {
  CHECK(domain_separation(Domain::disc(0.0, 1.0), Domain::disc(0.0, 2.0)) == doctest::Approx(1.0));
  CHECK(domain_separation(Domain::ball(2, 1.0), Domain::ball(2, 1.25)) == doctest::Approx(0.25));
  CHECK(domain_separation(Domain::tube_sphere(1, 0.2), Domain::tube_sphere(1, 0.4)) == doctest::Approx(0.2));
  CHECK(domain_separation(Domain::annulus(1.0, 2.0), Domain::annulus(0.5, 4.0)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(domain_separation(Domain::disc(0.0, 1.0), Domain::disc(0.5, 1.0)), DomainError);
}

TEST_CASE("samples lie in their domain and are reproducible") {
  const Domain t = Domain::tube_sphere(2, 0.2);
  const auto a = sample_interior(t, 200, 9), b = sample_interior(t, 200, 9);
  CHECK(a == b);
  for (const auto& p : a) CHECK(t.signed_distance(p) > 0.0);
  for (const auto& p : sample_boundary(t, 100, 1)) CHECK(std::abs(t.signed_distance(p)) < 1e-12);
  for (const auto& p : probe_points(Domain::disc(0.0, 1.0), 100, 2)) CHECK(std::abs(p[0]) < 1.0);
}

TEST_CASE("core projection") {
  const auto x = core_projection(Domain::tube_sphere(1, 0.2), CVec{cplx(0.0, 0.1), cplx(1.05, 0.0)});
  CHECK(x[0] == doctest::Approx(0.0));
  CHECK(x[1] == doctest::Approx(1.0));
  const auto y = core_projection(Domain::tube_circle(2, 0.2), CVec{cplx(0.0, -1.1), 0.05});
  CHECK(y[1] == doctest::Approx(-1.0));
  CHECK_THROWS_AS(core_projection(Domain::tube_sphere(1, 0.2), CVec{cplx(0.0, 0.1), 0.0}), DomainError);
}

TEST_CASE("sampled curves") {
  const auto c = SampledCurve::circle(1, 0, 0.0, 1.0, 64);
  CHECK(c.closed());
  CHECK(c.segments() == 64);
  CHECK(std::abs(c.at(c.params()[16])[0] - cplx(0.0, 1.0)) < 1e-12);
  CHECK_THROWS_AS(require_inside(Domain::disc(0.0, 0.9), c), DomainError);
  CHECK_THROWS_AS(SampledCurve({0.0, 1.0}, {CPoint{0.0}}, false), ConfigError);
}

TEST_CASE("sphere meshes are validated") {
  for (int lv = 0; lv <= 3; ++lv) {
    const auto ico = icosphere(lv);
    CHECK(ico.simplices.size() == 20u * (1u << (2 * lv)));
    CHECK_NOTHROW(real_sphere_map(ico));
  }
  CHECK_NOTHROW(real_sphere_map(circle_triangulation(8)));
  auto bad = icosphere(0);
  std::swap(bad.simplices[0][0], bad.simplices[0][1]);  // flips one face
  std::vector<CPoint> im;
  for (const auto& v : bad.vertices) im.push_back(CPoint{v[0], v[1], v[2]});
  CHECK_THROWS_AS(SphereMeshMap(2, bad.vertices, bad.simplices, im), ConfigError);
  auto missing = icosphere(0);
  missing.simplices.pop_back();
  CHECK_THROWS_AS(SphereMeshMap(2, missing.vertices, missing.simplices, im), ConfigError);
}

TEST_CASE("inflate contains the closure") {
  const Domain ds[] = {Domain::disc(0.0, 1.0), Domain::annulus(1.0, 2.0), Domain::tube_sphere(1, 0.2)};
  for (const auto& d : ds) {
    const Domain w = inflate(d, 0.05);
    CHECK(domain_separation(d, w) == doctest::Approx(0.05).epsilon(1e-6));
  }
}
