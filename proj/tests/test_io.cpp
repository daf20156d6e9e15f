#include <doctest.h>

#include "koblab/json_io.hpp"

using namespace koblab;

TEST_CASE("complex parsing") {
  CHECK(parse_complex("0.5") == cplx(0.5, 0.0));
  CHECK(parse_complex("-2i") == cplx(0.0, -2.0));
  CHECK(parse_complex("1+0.5i") == cplx(1.0, 0.5));
  CHECK(parse_complex("0.3-1e-2i") == cplx(0.3, -0.01));
  CHECK(parse_complex("1e-3+i") == cplx(1e-3, 1.0));
  CHECK(parse_cvec("0,1") == CVec{0.0, 1.0});
  CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
  CHECK_THROWS_AS(parse_cvec(""), ConfigError);
}

TEST_CASE("domains round-trip through JSON") {
  const Domain ds[] = {Domain::disc(cplx(0.1, 0.2), 2.0), Domain::annulus(1.0, 4.0), Domain::ball(2, 1.0),
                       Domain::polydisc({1.0, 2.0}), Domain::tube_circle(3, 0.2), Domain::tube_sphere(2, 0.3)};
  for (const auto& d : ds) {
    const json j = domain_to_json(d);
    CHECK(domain_to_json(domain_from_json(j)) == j);
  }
  CHECK(domain_from_json(json::parse(R"({"kind":"annulus","R":4})")).as<Annulus>()->inner == doctest::Approx(0.5));
  CHECK_THROWS_AS(domain_from_json(json::parse(R"({"kind":"cube"})")), ConfigError);
  CHECK_THROWS_AS(domain_from_json(json::parse(R"({"kind":"disc"})")), ConfigError);
  CHECK_THROWS_AS(load_json_arg("{not json"), ConfigError);
}

TEST_CASE("maps from JSON") {
  const PolyMap f = polymap_from_json(
      json::parse(R"({"n_in":1,"n_out":1,"terms":[{"idx":[1],"coef":[[0.5,0]]},{"idx":[0],"coef":[[0.25,0]]}]})"));
  CHECK(f(CVec{0.5})[0] == cplx(0.5, 0.0));
  CHECK(polymap_from_json(polymap_to_json(f))(CVec{0.2})[0] == f(CVec{0.2})[0]);
  CHECK_THROWS_AS(polymap_from_json(json::parse(R"({"n_in":1,"n_out":1,"terms":[{"idx":[1,2],"coef":[[1,0]]}]})")),
                  ConfigError);
}

TEST_CASE("budgets from JSON") {
  const auto b = budget_from_json(json::parse(R"({"max_degree":3,"restarts":2})"));
  CHECK(b.max_degree == 3);
  CHECK(b.restarts == 2);
  CHECK(b.max_iters == OptimizerBudget{}.max_iters);
  CHECK_THROWS_AS(budget_from_json(json::parse(R"({"max_degree":0})")), ConfigError);
}

TEST_CASE("polynomial map algebra") {
  // f(z1, z2) = (z1 z2 + 1, 2 z2^2), g(z) = (z, 3z)
  const PolyMap f(2, 2, {{{1, 1}, {1.0, 0.0}}, {{0, 0}, {1.0, 0.0}}, {{0, 2}, {0.0, 2.0}}});
  const PolyMap g(1, 2, {{{1}, {1.0, 3.0}}});
  CHECK(f.degree() == 2);
  const PolyMap fg = f.compose(g);
  CHECK(fg.degree() == 2);
  for (cplx z : {cplx(0.3, 0.1), cplx(-1.0, 2.0)}) {
    const CVec direct = f(g(CVec{z}));
    const CVec composed = fg(CVec{z});
    CHECK(std::abs(direct[0] - composed[0]) < 1e-12);
    CHECK(std::abs(direct[1] - composed[1]) < 1e-12);
  }
  const PolyMap h(1, 1, {{{2}, {1.0}}, {{0}, {-0.5}}});
  CHECK(h.power(3).degree() == 8);
  const cplx z(0.4, 0.2);
  CHECK(std::abs(h.power(3)(CVec{z})[0] - h(h(h(CVec{z})))[0]) < 1e-12);
  CHECK_THROWS_AS(PolyMap::identity(2).power(0), ConfigError);
  CHECK_THROWS_AS(g.compose(f), ConfigError);
}
