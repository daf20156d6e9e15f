// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "koblab/closed_form.hpp"
#include "koblab/contraction.hpp"
#include "koblab/estimator.hpp"
#include "koblab/hausdorff.hpp"
#include "koblab/invariants.hpp"
#include "koblab/json_io.hpp"
#include "koblab/monotonicity.hpp"
#include "support.hpp"

using namespace koblab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail.clear();
    if (!detail.empty()) detail += "; ";
    detail += what;
    pass = false;
  }
  void note(const std::string& s) {
    if (!pass) return;
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. l1 of A(1/sqrt R, sqrt R) at scale 2 against pi^2 / ln R.
Outcome l1_reproduction() {
  Outcome o;
  for (double R : {std::numbers::e, 2.0, 4.0, 10.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = l1_annulus(R, 2.0);
    const double secs = seconds_since(t0);
    const double want = kPi2 / std::log(R);
    const double rel = std::abs(r.value - want) / want;
    const double dev_cap = 0.05 * (std::sqrt(R) - 1.0 / std::sqrt(R));
    o.require(rel < 0.01, fmt("R=%.4g: value %.6f vs %.6f (rel %.2e)", R, r.value, want, rel));
    o.require(r.certificate_parameter < dev_cap,
              fmt("R=%.4g: deviation %.3e >= %.3e", R, r.certificate_parameter, dev_cap));
    o.require(secs < 30.0, fmt("R=%.4g: %.1f s", R, secs));
    o.note(fmt("R=%.4g rel %.1e dev %.1e %.1fs", R, rel, r.certificate_parameter, secs));
  }
  return o;
}

// 2. Equal moduli give equal l1.
Outcome hadamard_invariance() {
  Outcome o;
  const double a = l1_annulus(1.0, 9.0, 2.0).value;
  const double b = l1_annulus(1.0 / 3.0, 3.0, 2.0).value;
  const double rel = std::abs(a - b) / std::min(a, b);
  o.require(rel < 0.01, fmt("A(1,9) %.6f vs A(1/3,3) %.6f", a, b));
  o.note(fmt("A(1,9) %.6f, A(1/3,3) %.6f, rel %.1e", a, b, rel));
  return o;
}

// 3. Random closed polylines of winding w in M = A(e^{-1/2}, e^{1/2}) have length >= 0.99 w pi^2.
Outcome winding_lower_bound() {
  Outcome o;
  const Domain M = Domain::annulus(std::exp(-0.5), std::exp(0.5));
  auto g = testing::rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 1e300;
  for (int i = 0; i < 500; ++i) {
    const int w = 1 + i % 3;
    // vertex angles advance by at most pi/4 and radii stay in [0.7, 1.4]: every
    // chord then stays in M
    const int per_turn = 8 + static_cast<int>(u(g) * 25);
    const int count = w * per_turn;
    std::vector<double> theta(count);
    double acc = 0.0;
    for (auto& t : theta) {
      t = acc;
      acc += 0.5 + u(g);
    }
    for (auto& t : theta) t *= 2.0 * kPi * w / acc;
    std::vector<CPoint> pts;
    for (int k = 0; k < count; ++k) pts.push_back({std::polar(0.7 + 0.7 * u(g), theta[k])});
    pts.push_back(pts.front());
    const auto c = SampledCurve::polyline(pts, true);
    const int wn = winding_number(c, 0.0, 0);
    o.require(wn == w, fmt("polyline %d: winding %d, built with %d", i, wn, w));
    const double len = curve_length_metric(M, c, LengthMode::Integrated, 2.0);
    worst = std::min(worst, len / (w * kPi2));
    o.require(len >= 0.99 * w * kPi2, fmt("polyline %d (w=%d): length %.6f", i, w, len));
  }
  o.note(fmt("500 polylines, min length / (w pi^2) = %.4f", worst));
  return o;
}

// 4. Estimator against closed forms, 200 samples over disc, ball and polydisc.
Outcome estimator_soundness() {
  Outcome o;
  OptimizerBudget b;
  b.max_degree = 6;
  b.restarts = 4;
  b.max_iters = 1000;
  b.boundary_angles = 128;
  const Domain doms[] = {Domain::disc(0.0, 1.0), Domain::ball(2, 1.0), Domain::polydisc({1.0, 0.7})};
  auto g = testing::rng(4);
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 200; ++i) {
    const Domain& d = doms[i % 3];
    CVec p;
    if (const auto* pd = d.as<Polydisc>()) {
      for (double r : pd->radii) p.push_back(testing::random_in_disc(g, 0.0, 0.5 * r));
    } else {
      p = testing::random_in_ball(g, d.dim(), 0.5);
    }
    CVec v = testing::random_direction(g, d.dim());
    const double scale = std::exp(std::uniform_real_distribution<double>(-1.0, 1.0)(g));
    for (auto& x : v) x *= scale;
    const double closed = kob_royden_closed(d, CPoint(p), TVector(v)).value;
    const double est = estimate_kob_royden(d, CPoint(p), TVector(v), b).value;
    o.require(est >= closed - 1e-9, fmt("%s sample %d: estimate %.12f below %.12f", d.kind_name().c_str(), i, est, closed));
    o.require(est <= 1.02 * closed, fmt("%s sample %d: ratio %.5f", d.kind_name().c_str(), i, est / closed));
  }
  const double secs = seconds_since(t0);
  o.require(secs < 300.0, fmt("%.1f s", secs));
  o.note(fmt("200 samples in %.1f s", secs));
  return o;
}

// 5. Pointwise comparison constant against the exact ratio r_in / r_out at the centre.
Outcome compare_tightness() {
  Outcome o;
  struct Pair {
    Domain in, out;
    double exact;
  };
  const Pair pairs[] = {
      {Domain::disc(0.0, 1.0), Domain::disc(0.0, 2.0), 0.5},
      {Domain::ball(2, 1.0), Domain::ball(2, 1.25), 0.8},
      {Domain::ball(3, 1.0), Domain::ball(3, 2.0), 0.5},
  };
  for (const auto& pr : pairs) {
    const CPoint p(CVec(static_cast<std::size_t>(pr.in.dim())));
    const auto r = lemma_compare_bound(pr.in, pr.out, p, 8);
    o.require(std::abs(r.c_bound - pr.exact) <= 1e-6,
              fmt("%s: c_bound %.9f vs %.9f", pr.in.kind_name().c_str(), r.c_bound, pr.exact));
    o.require(std::abs(r.observed_ratio - pr.exact) <= 1e-6,
              fmt("%s: observed %.9f vs %.9f", pr.in.kind_name().c_str(), r.observed_ratio, pr.exact));
    o.note(fmt("%s n=%d c=%.9f", pr.in.kind_name().c_str(), pr.in.dim(), r.c_bound));
  }
  return o;
}

// 6. Uniform constants below one.
Outcome uniform_constants() {
  Outcome o;
  struct Pair {
    Domain U, V;
    int samples;
  };
  const Pair pairs[] = {
      {Domain::disc(0.0, 1.0), Domain::disc(0.0, 2.0), 64},
      {Domain::ball(2, 1.0), Domain::ball(2, 2.0), 64},
      {Domain::tube_sphere(1, 0.2), Domain::tube_sphere(1, 0.4), 12},
  };
  for (const auto& pr : pairs) {
    try {
      const auto r = uniform_monotonicity_constant(pr.U, pr.V, pr.samples);
      double top = 0.0;
      for (double x : r.ratios) top = std::max(top, x);
      o.require(r.c < 1.0 && r.c > 0.0, fmt("%s: c = %.6f", pr.U.kind_name().c_str(), r.c));
      o.require(top < 1.0, fmt("%s: sampled ratio %.6f", pr.U.kind_name().c_str(), top));
      o.note(fmt("%s c=%.4f (certified %.4f)", pr.U.kind_name().c_str(), r.c, r.c_certified));
    } catch (const std::exception& e) {
      o.require(false, fmt("%s: %s", pr.U.kind_name().c_str(), e.what()));
    }
  }
  return o;
}

// 7. k = 1 measures equal lengths.
Outcome hausdorff_length() {
  Outcome o;
  const Domain M = Domain::annulus(std::exp(-0.5), std::exp(0.5));
  const auto circle = SampledCurve::circle(1, 0, 0.0, 1.0, 256);
  const double m = hausdorff_k_measure(M, circle, 1, MetricKind::Kobayashi, {0.5, 0.25, 0.125},
                                       default_measure_options(M, 2.0))
                       .value;
  o.require(std::abs(m - kPi2) <= 0.02 * kPi2, fmt("circle %.6f vs %.6f", m, kPi2));
  const Domain D = Domain::disc(0.0, 1.0);
  const auto seg = SampledCurve::polyline({{-0.3}, {0.6}}, false);
  // oracle: Poincare distance between the endpoints
  const double want = testing::disc_distance(0.0, 1.0, -0.3, 0.6);
  const double s =
      hausdorff_k_measure(D, seg, 1, MetricKind::Kobayashi, {0.1, 0.05, 0.01}, default_measure_options(D)).value;
  o.require(std::abs(s - want) <= 0.02 * want, fmt("segment %.6f vs %.6f", s, want));
  o.note(fmt("circle %.5f / pi^2 = %.5f, segment %.5f / %.5f", m, m / kPi2, s, want));
  return o;
}

// 8. lk upper bounds strictly decrease in r; values frozen on the first run.
Outcome tube_monotonicity() {
  Outcome o;
  const std::vector<double> radii = {0.1, 0.15, 0.2, 0.25, 0.3};
  for (int k : {1, 2}) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> vals;
    for (double r : radii) vals.push_back(lk_tube_upper(k, r).value);
    double margin = 1e300;
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) margin = std::min(margin, vals[i] - vals[i + 1]);
    o.require(margin > 0.0, fmt("k=%d: min margin %.6g", k, margin));
    const std::filesystem::path golden = std::filesystem::path(KOBLAB_GOLDEN_DIR) / fmt("tube_lk_k%d.json", k);
    if (std::filesystem::exists(golden)) {
      std::ifstream in(golden);
      const json j = json::parse(in);
      const auto& rows = j.at("rows");
      o.require(rows.size() == radii.size(), fmt("k=%d: golden has %zu rows", k, rows.size()));
      for (std::size_t i = 0; i < std::min(rows.size(), radii.size()); ++i) {
        const double want = rows[i].at("value").get<double>();
        o.require(std::abs(rows[i].at("r").get<double>() - radii[i]) < 1e-12 &&
                      std::abs(vals[i] - want) <= 1e-6 * std::abs(want),
                  fmt("k=%d r=%.2f: %.9g vs golden %.9g", k, radii[i], vals[i], want));
      }
    } else {
      json rows = json::array();
      for (std::size_t i = 0; i < radii.size(); ++i) rows.push_back({{"r", radii[i]}, {"value", vals[i]}});
      std::ofstream(golden) << json{{"command", "tube-lk"}, {"k", k}, {"rows", rows}}.dump(2) << "\n";
      o.note(fmt("k=%d golden written to %s", k, golden.string().c_str()));
    }
    o.note(fmt("k=%d values %.4g..%.4g, min margin %.4g, %.0fs", k, vals.front(), vals.back(), margin,
               seconds_since(t0)));
  }
  return o;
}

// 9. Fixed points of the three example contractions.
Outcome fixed_points() {
  Outcome o;
  const Domain disc = Domain::disc(0.0, 1.0), ball = Domain::ball(2, 1.0);
  struct Example {
    const char* name;
    PolyMap f;
    Domain U;
    std::vector<CVec> starts;
    CVec want;
  };
  // oracle for the ball map: z1 = z2/3 + 0.1, z2 = z1/3
  const double z1 = 0.1 / (1.0 - 1.0 / 9.0);
  const Example examples[] = {
      {"z/2 on the disc", PolyMap::affine(1, 1, {0.5}, {0.0}), disc,
       {{0.9}, {-0.5}, {cplx(0.0, 0.7)}, {cplx(-0.4, -0.6)}, {0.2}}, {0.0}},
      {"z/2 + 1/4 on the disc", PolyMap::affine(1, 1, {0.5}, {0.25}), disc,
       {{0.0}, {cplx(0.0, 0.9)}, {-0.5}, {cplx(0.6, -0.6)}, {0.95}}, {0.5}},
      {"swap/3 + (0.1, 0) on the ball", PolyMap::affine(2, 2, {0.0, 1.0 / 3, 1.0 / 3, 0.0}, {0.1, 0.0}), ball,
       {{0.0, 0.0}, {0.9, 0.0}, {0.0, cplx(0.0, -0.9)}, {cplx(-0.5, 0.5), 0.3}, {0.1, cplx(0.6, 0.6)}},
       {z1, z1 / 3.0}},
  };
  for (const auto& ex : examples) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto r = iterate_to_fixed_point(ex.f, ex.U, ex.starts);
      const double secs = seconds_since(t0);
      double err = 0.0;
      for (std::size_t i = 0; i < ex.want.size(); ++i) err = std::max(err, std::abs(r.z0[i] - ex.want[i]));
      o.require(r.converged && err < 1e-8, fmt("%s: converged %d, error %.2e", ex.name, r.converged, err));
      o.require(r.distinct_starts_agreement <= 1e-8, fmt("%s: agreement %.2e", ex.name, r.distinct_starts_agreement));
      o.require(r.max_tail_ratio <= r.c_certified + 0.05,
                fmt("%s: tail %.4f > c %.4f + 0.05", ex.name, r.max_tail_ratio, r.c_certified));
      o.require(secs < 10.0, fmt("%s: %.1f s", ex.name, secs));
      o.note(fmt("%s tail %.3f c %.3f %.1fs", ex.name, r.max_tail_ratio, r.c_certified, secs));
    } catch (const std::exception& e) {
      o.require(false, fmt("%s: %s", ex.name, e.what()));
    }
  }
  return o;
}

// 10. Strictly contracting tube maps have degree 0; z1^2 has degree 2.
Outcome degree_collapse() {
  Outcome o;
  const Domain s = Domain::tube_circle(2, 0.3), t = Domain::tube_circle(2, 0.1);
  const std::pair<const char*, PolyMap> maps[] = {
      {"constant", PolyMap::constant(2, {1.0, 0.0})},
      {"1 + z1/20", PolyMap(2, 2, {{{0, 0}, {1.0, 0.0}}, {{1, 0}, {0.05, 0.0}}})},
      {"1.02i + 0.03 z1, 0.1 z2", PolyMap(2, 2, {{{0, 0}, {cplx(0.0, 1.02), 0.0}}, {{0, 1}, {0.0, 0.1}},
                                                  {{1, 0}, {0.03, 0.0}}})},
      {"0.99 - 0.02 z1^2, 0.1 z1 z2", PolyMap(2, 2, {{{0, 0}, {0.99, 0.0}}, {{2, 0}, {-0.02, 0.0}},
                                                       {{1, 1}, {0.0, 0.1}}})},
  };
  for (const auto& [name, f] : maps) {
    try {
      const auto c = degree_collapse_demo(f, s, t);
      o.require(c.degree == 0 && c.multiplicative && c.collapse_step.has_value(),
                fmt("%s: degree %d, collapse %d", name, c.degree, c.collapse_step.has_value()));
      o.note(fmt("%s deg 0 collapse at %d", name, c.collapse_step.value_or(-1)));
    } catch (const std::exception& e) {
      o.require(false, fmt("%s: %s", name, e.what()));
    }
  }
  const PolyMap sq(2, 2, {{{2, 0}, {1.0, 0.0}}});
  const int d = tube_map_degree(sq, Domain::tube_circle(2, 0.05), Domain::tube_circle(2, 0.5));
  o.require(d == 2, fmt("z1^2: degree %d", d));
  o.note(fmt("z1^2 degree %d", d));
  return o;
}

}  // namespace

// Optional arguments select criteria by number.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"l1 of annuli matches pi^2 / ln R", l1_reproduction},
      {"l1 depends only on the modulus", hadamard_invariance},
      {"winding-w loops cost at least w pi^2", winding_lower_bound},
      {"estimator is an upper bound within 2%", estimator_soundness},
      {"pointwise comparison constant is exact for concentric pairs", compare_tightness},
      {"uniform comparison constants below 1", uniform_constants},
      {"k = 1 measure equals length", hausdorff_length},
      {"tube lk bounds strictly decrease in r", tube_monotonicity},
      {"contractions converge to one fixed point", fixed_points},
      {"contracting tube maps have degree 0", degree_collapse},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    if (!only.empty() && std::find(only.begin(), only.end(), index) == only.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("%s %d: %s [%.1fs] %s\n", o.pass ? "PASS" : "FAIL", index, name, seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  const int ran = only.empty() ? index : static_cast<int>(only.size());
  std::printf("%d/%d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
