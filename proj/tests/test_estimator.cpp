#include <doctest.h>

#include "koblab/estimator.hpp"
#include "koblab/metric.hpp"
#include "support.hpp"

using namespace koblab;
using doctest::Approx;

namespace {

OptimizerBudget small_budget(int degree) {
  OptimizerBudget b;
  b.max_degree = degree;
  b.restarts = 3;
  b.max_iters = 600;
  b.boundary_angles = 96;
  return b;
}

}  // namespace

TEST_CASE("seed affine discs") {
  const auto f = seed_affine_disc(Domain::disc(0.0, 1.0), {0.0}, {1.0});
  CHECK(f.radius_for(TVector{1.0}) == Approx(1.0 / (1.0 - 1e-3)));
  const auto g = seed_affine_disc(Domain::ball(2, 1.0), {0.0, 0.0}, {0.0, 2.0});
  CHECK(g.radius_for(TVector{0.0, 2.0}) == Approx(2.0 / (1.0 - 1e-3)));
  CHECK(std::abs(g.coeffs[1][0]) == 0.0);
  const auto h = seed_affine_disc(Domain::annulus(1.0, 4.0), {2.0}, {1.0});
  CHECK(h.radius_for(TVector{1.0}) == Approx(1.0 / (1.0 - 1e-3)));
  CHECK(certify_disc(Domain::annulus(1.0, 4.0), h));
}

TEST_CASE("certification rejects discs that leave the domain") {
  PolyDiscCandidate f;
  f.degree = 1;
  f.coeffs = {CVec{0.0}, CVec{1.01}};
  CHECK_FALSE(certify_disc(Domain::disc(0.0, 1.0), f));
  f.coeffs = {CVec{2.0}, CVec{0.3}, CVec{0.6}};
  f.degree = 2;
  CHECK(certify_disc(Domain::annulus(1.0, 4.0), f));
  f.coeffs = {CVec{2.0}, CVec{1.2}};
  f.degree = 1;
  CHECK_FALSE(certify_disc(Domain::annulus(1.0, 4.0), f));  // 2 + 1.2z reaches 0.8 at z = -1
}

TEST_CASE("disc centre: degree 1 recovers the identity disc") {
  const auto m = estimate_kob_royden(Domain::disc(0.0, 1.0), {0.0}, {1.0}, small_budget(1));
  CHECK(m.source == Source::EstimatedUpperBound);
  CHECK(m.value == Approx(1.0 / (1.0 - 1e-3)).epsilon(1e-9));
}

TEST_CASE("ball off-centre estimate is within 2% above the closed form") {
  OptimizerBudget b;
  b.max_degree = 4;
  const double c = kob_royden_closed(Domain::ball(2, 1.0), {0.3, 0.0}, {1.0, 0.0}).value;
  const double e = estimate_kob_royden(Domain::ball(2, 1.0), {0.3, 0.0}, {1.0, 0.0}, b).value;
  CHECK(e >= c - 1e-9);
  CHECK(e <= 1.02 * c);
}

TEST_CASE("annulus estimate stays above the true metric") {
  // the Kobayashi-Royden metric of A(1,4) is twice the canonical density at scale 1
  const Domain A = Domain::annulus(1.0, 4.0);
  const double truth = 2.0 * kob_royden_closed(A, {2.0}, {1.0}).value;
  const auto e = estimate_kob_royden_detailed(A, {2.0}, {1.0}, OptimizerBudget{});
  CHECK(e.metric.value >= truth);
  CHECK(e.metric.value <= 1.06 * truth);
}

TEST_CASE("soundness on random data and monotone degree stages") {
  auto g = testing::rng(21);
  const Domain ds[] = {Domain::disc(0.0, 1.0), Domain::ball(2, 1.0), Domain::polydisc({1.0, 0.7})};
  for (const auto& d : ds) {
    for (int i = 0; i < 4; ++i) {
      const auto p = sample_interior(Domain::ball(d.dim(), 0.5), 1, g())[0];
      const TVector v(testing::random_direction(g, d.dim()));
      const auto e = estimate_kob_royden_detailed(d, CPoint(p), v, small_budget(4));
      const double c = kob_royden_closed(d, CPoint(p), v).value;
      CHECK(e.metric.value >= c - 1e-9);
      // a degree-(m+2) search contains the degree-m optimum, so budgets never hurt
      const double m2 = estimate_kob_royden(d, CPoint(p), v, small_budget(2)).value;
      CHECK(e.metric.value <= m2 + 1e-12);
    }
  }
}

TEST_CASE("estimates are reproducible for a fixed seed") {
  OptimizerBudget b = small_budget(3);
  b.seed = 5;
  const Domain t = Domain::tube_circle(2, 0.3);
  const double a = estimate_kob_royden(t, {1.0, 0.0}, {0.0, 1.0}, b).value;
  const double c = estimate_kob_royden(t, {1.0, 0.0}, {0.0, 1.0}, b).value;
  CHECK(a == c);
}

TEST_CASE("budget validation") {
  OptimizerBudget b;
  b.max_degree = 0;
  CHECK_THROWS_AS(b.validate(), ConfigError);
  b = {};
  b.margin = 0.5;
  CHECK_THROWS_AS(b.validate(), ConfigError);
  CHECK_THROWS_AS(estimate_kob_royden(Domain::disc(0.0, 1.0), {2.0}, {1.0}, {}), DomainError);
}

TEST_CASE("metric oracle: canonicalization respects the symmetries") {
  auto g = testing::rng(22);
  const Domain T = Domain::tube_sphere(1, 0.3);
  OracleOptions o;
  o.budget = light_budget();
  const KobayashiMetric F(T, o);
  for (int i = 0; i < 20; ++i) {
    const auto p = sample_interior(T, 1, g())[0];
    const CVec v = testing::random_direction(g, 2);
    const auto [cp, cv] = F.canonicalize(p, v);
    // rotating the real plane and conjugating are automorphisms of the tube
    const double th = std::uniform_real_distribution<double>(0, 6.28)(g);
    const double c = std::cos(th), s = std::sin(th);
    const CVec rp{c * p[0] - s * p[1], s * p[0] + c * p[1]};
    const CVec rv{c * v[0] - s * v[1], s * v[0] + c * v[1]};
    const auto [cp2, cv2] = F.canonicalize(rp, rv);
    CHECK(distance(cp, cp2) < 1e-9);
    CHECK(distance(cv, cv2) < 1e-9);
    const CVec qp{std::conj(p[0]), std::conj(p[1])}, qv{std::conj(v[0]), std::conj(v[1])};
    const auto [cp3, cv3] = F.canonicalize(qp, qv);
    CHECK(distance(cp, cp3) < 1e-9);
  }
  const double a = F(CVec{1.1, 0.0}, CVec{0.0, 1.0});
  const double b = F(CVec{0.0, 1.1}, CVec{-1.0, 0.0});
  CHECK(a == b);
  CHECK(F.memo_hits() >= 1);
  CHECK(F(CVec{1.1, 0.0}, CVec{0.0, 2.0}) == Approx(2.0 * a));
}
