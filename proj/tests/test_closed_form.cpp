#include <doctest.h>

#include <numbers>

#include "koblab/closed_form.hpp"
#include "support.hpp"

using namespace koblab;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;

TEST_CASE("Poincare disc density") {
  CHECK(poincare_disc_density(0.0, 2.0).value == Approx(2.0));
  CHECK(poincare_disc_density(0.0, 1.0).value == Approx(1.0));
  CHECK(poincare_disc_density(0.5, 2.0).value == Approx(8.0 / 3.0));
  CHECK(poincare_disc_density(0.5, 2.0).source == Source::ClosedForm);
  CHECK_THROWS_AS(poincare_disc_density(1.0, 2.0), DomainError);
}

TEST_CASE("annulus canonical density") {
  CHECK(annulus_canonical_density(1.0, std::numbers::e, 2.0).value == Approx(kPi / 2));
  CHECK(annulus_canonical_density(cplx(0.0, 1.0), std::exp(2.0), 2.0).value == Approx(kPi / 4));
  CHECK_THROWS_AS(annulus_canonical_density(2.0, std::numbers::e, 2.0), DomainError);
  CHECK_THROWS_AS(annulus_canonical_density(1.0, 1.0, 2.0), ConfigError);
  // circumference of |z| = 1 at scale 2 is pi^2 / ln R for every R
  for (double R : {1.5, std::numbers::e, 4.0, 10.0})
    CHECK(2 * kPi * annulus_canonical_density(1.0, R, 2.0).value == Approx(kPi * kPi / std::log(R)));
}

TEST_CASE("closed Kobayashi-Royden examples") {
  CHECK(kob_royden_closed(Domain::disc(0.0, 1.0), {0.0}, {1.0}).value == Approx(1.0));
  CHECK(kob_royden_closed(Domain::polydisc({1.0, 2.0}), {0.0, 0.0}, {1.0, 1.0}).value == Approx(1.0));
  CHECK(kob_royden_closed(Domain::ball(2, 1.0), {0.0, 0.0}, {3.0, 4.0}).value == Approx(5.0));
  CHECK(kob_royden_closed(Domain::ball(2, 1.0), {0.3, 0.0}, {1.0, 0.0}).value == Approx(1.0 / 0.91));
  CHECK_THROWS_AS(kob_royden_closed(Domain::tube_circle(2, 0.2), {1.0, 0.0}, {1.0, 0.0}), ConfigError);
  CHECK_THROWS_AS(kob_royden_closed(Domain::ball(2, 1.0), {0.0}, {1.0}), ConfigError);
}

TEST_CASE("ball metric agrees with the slice-disc reference at 1000 points") {
  auto g = testing::rng(11);
  const Domain B = Domain::ball(3, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const CVec p = testing::random_in_ball(g, 3, 0.999);
    const CVec v = testing::random_direction(g, 3);
    const double want = testing::ball_metric_by_slice(p, v);
    CHECK(kob_royden_closed_raw(B, p, v) == Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("disc metric is the Poincare density of the translated, rescaled disc") {
  auto g = testing::rng(12);
  const Domain D = Domain::disc(cplx(0.3, -0.2), 2.0);
  for (int i = 0; i < 1000; ++i) {
    const cplx p = testing::random_in_disc(g, cplx(0.3, -0.2), 2.0);
    const double want = 0.5 / (1.0 - std::norm((p - cplx(0.3, -0.2)) / 2.0));
    CHECK(kob_royden_closed_raw(D, CVec{p}, CVec{1.0}) == Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("closed distances: examples") {
  const Domain D = Domain::disc(0.0, 1.0);
  const double oracle = testing::simpson([](double t) { return 1.0 / (1.0 - t * t); }, 0.0, 0.5);
  CHECK(kob_distance_closed(D, {0.0}, {0.5}) == Approx(oracle).epsilon(1e-10));
  CHECK(kob_distance_closed(D, {0.3}, {0.3}) == 0.0);
  CHECK(kob_distance_closed(Domain::ball(2, 1.0), {0.0, 0.0}, {0.5, 0.0}) == Approx(std::atanh(0.5)));
  CHECK_THROWS_AS(kob_distance_closed(Domain::annulus(1.0, 2.0), {1.5}, {-1.5}), ConfigError);
}

TEST_CASE("closed distances: 1000-point properties") {
  auto g = testing::rng(13);
  const Domain B = Domain::ball(2, 1.0), P = Domain::polydisc({1.0, 0.5}), D = Domain::disc(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const CVec a = testing::random_in_ball(g, 2), b = testing::random_in_ball(g, 2), c = testing::random_in_ball(g, 2);
    const double ab = kob_distance_closed_raw(B, a, b);
    CHECK(ab == Approx(testing::ball_distance_by_slice(a, b)).epsilon(1e-8));
    CHECK(ab == Approx(kob_distance_closed_raw(B, b, a)).epsilon(1e-12));
    CHECK(kob_distance_closed_raw(B, a, c) <= ab + kob_distance_closed_raw(B, b, c) + 1e-9);

    const CVec pa{testing::random_in_disc(g), testing::random_in_disc(g, 0.0, 0.5)};
    const CVec pb{testing::random_in_disc(g), testing::random_in_disc(g, 0.0, 0.5)};
    const double want = std::max(testing::disc_distance(0.0, 1.0, pa[0], pb[0]),
                                 testing::disc_distance(0.0, 0.5, pa[1], pb[1]));
    CHECK(kob_distance_closed_raw(P, pa, pb) == Approx(want).epsilon(1e-10));

    const cplx z = testing::random_in_disc(g), w = testing::random_in_disc(g);
    CHECK(kob_distance_closed_raw(D, CVec{z}, CVec{w}) == Approx(testing::disc_distance(0.0, 1.0, z, w)).epsilon(1e-10));
  }
}

TEST_CASE("ball distance for nearby points keeps relative accuracy") {
  const Domain B = Domain::ball(2, 1.0);
  const CVec a{0.6, cplx(0.0, 0.3)};
  for (double h : {1e-3, 1e-5, 1e-7, 1e-9}) {
    const CVec b{a[0] + h, a[1] + cplx(0.0, h)};
    // first order: |b - a| times the metric in the direction b - a
    const double first_order = kob_royden_closed_raw(B, a, sub(b, a));
    CHECK(kob_distance_closed_raw(B, a, b) == Approx(first_order).epsilon(10 * h + 1e-7));
  }
}

TEST_CASE("metric homogeneity and unit minima") {
  auto g = testing::rng(14);
  const Domain ds[] = {Domain::disc(0.0, 1.0), Domain::ball(2, 1.0), Domain::polydisc({1.0, 2.0}),
                       Domain::annulus(1.0, 3.0)};
  for (const auto& d : ds) {
    for (int i = 0; i < 200; ++i) {
      const auto p = sample_interior(d, 1, g())[0];
      const CVec v = testing::random_direction(g, d.dim());
      const cplx lam = testing::random_in_disc(g, 0.0, 3.0);
      const double f1 = kob_royden_closed_raw(d, p, v);
      CHECK(kob_royden_closed_raw(d, p, scaled(v, lam)) == Approx(std::abs(lam) * f1).epsilon(1e-12));
      CHECK(closed_unit_minimum(d, p) <= f1 * (1 + 1e-12));
    }
  }
}
