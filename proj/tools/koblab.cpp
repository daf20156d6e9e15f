// koblab: command-line front end. Reports go to stdout (or --output) as JSON or
// CSV; timings and diagnostics go to stderr so reruns are byte-identical.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "koblab/closed_form.hpp"
#include "koblab/json_io.hpp"
#include "koblab/monotonicity.hpp"
#include "koblab/parallel.hpp"

using namespace koblab;

namespace {

struct Output {
  json report;
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;
};

struct Globals {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string output;
  std::string format = "json";
  std::string golden;
};

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string on success, else a failure detail
};

std::string expect_near(double got, double want, double rel) {
  if (std::abs(got - want) <= rel * std::abs(want)) return {};
  std::ostringstream os;
  os.precision(10);
  os << "got " << got << ", expected " << want << " within " << rel * 100 << "%";
  return os.str();
}

std::string expect(bool ok, const std::string& detail) { return ok ? std::string() : detail; }

template <class E>
std::string expect_throw(const std::function<void()>& fn, const std::string& what) {
  try {
    fn();
  } catch (const E&) {
    return {};
  } catch (const std::exception& e) {
    return std::string("wrong error: ") + e.what();
  }
  return "expected an error: " + what;
}

int run_selftest(const std::string& name, const std::vector<Check>& checks) {
  int failed = 0;
  for (const auto& c : checks) {
    std::string detail;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      detail = std::string("threw: ") + e.what();
    }
    if (detail.empty()) {
      std::cout << "PASS " << name << ": " << c.name << "\n";
    } else {
      std::cout << "FAIL " << name << ": " << c.name << " (" << detail << ")\n";
      ++failed;
    }
  }
  return failed ? 1 : 0;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& z : parse_cvec(s)) {
    if (z.imag() != 0.0) throw ConfigError("expected real numbers in '" + s + "'");
    out.push_back(z.real());
  }
  return out;
}

std::vector<CVec> parse_points(const std::string& s) {
  std::vector<CVec> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!item.empty()) out.push_back(parse_cvec(item));
  return out;
}

// golden comparison -----------------------------------------------------------------

void compare_json(const json& got, const json& want, const std::string& path, double rel, double abs_tol,
                  const json& tolerances, std::vector<std::string>& problems) {
  const std::string key = path.substr(path.find_last_of('/') + 1);
  if (tolerances.contains(key)) rel = tolerances[key].get<double>();
  if (want.is_number()) {
    if (!got.is_number()) {
      problems.push_back(path + ": expected a number");
      return;
    }
    const double g = got.get<double>(), w = want.get<double>();
    if (!(std::abs(g - w) <= abs_tol + rel * std::abs(w)))
      problems.push_back(path + ": got " + got.dump() + ", expected " + want.dump());
    return;
  }
  if (want.is_object()) {
    if (!got.is_object()) {
      problems.push_back(path + ": expected an object");
      return;
    }
    for (const auto& [k, v] : want.items()) {
      if (!got.contains(k))
        problems.push_back(path + "/" + k + ": missing");
      else
        compare_json(got[k], v, path + "/" + k, rel, abs_tol, tolerances, problems);
    }
    return;
  }
  if (want.is_array()) {
    if (!got.is_array() || got.size() != want.size()) {
      problems.push_back(path + ": array length differs");
      return;
    }
    for (std::size_t i = 0; i < want.size(); ++i)
      compare_json(got[i], want[i], path + "/" + std::to_string(i), rel, abs_tol, tolerances, problems);
    return;
  }
  if (got != want) problems.push_back(path + ": got " + got.dump() + ", expected " + want.dump());
}

/// A golden file is either the expected report itself, or
/// {"expected": {...}, "rel": r, "abs": a, "tolerances": {"field": rel, ...}}.
/// Only fields present in the expected report are compared.
int check_golden(const json& report, const std::string& path) {
  const json g = load_json_arg(path);
  const bool wrapped = g.is_object() && g.contains("expected");
  const json& want = wrapped ? g["expected"] : g;
  const double rel = wrapped && g.contains("rel") ? g["rel"].get<double>() : 1e-6;
  const double abs_tol = wrapped && g.contains("abs") ? g["abs"].get<double>() : 1e-12;
  const json tolerances = wrapped && g.contains("tolerances") ? g["tolerances"] : json::object();
  std::vector<std::string> problems;
  compare_json(report, want, "", rel, abs_tol, tolerances, problems);
  for (const auto& p : problems) std::cerr << "golden mismatch " << p << "\n";
  std::cerr << (problems.empty() ? "golden: match\n" : "golden: MISMATCH\n");
  return problems.empty() ? 0 : 1;
}

std::string render(const Output& out, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    os << out.report.dump(2) << "\n";
    return os.str();
  }
  if (out.csv_header.empty()) throw ConfigError("this command has no CSV form");
  for (std::size_t i = 0; i < out.csv_header.size(); ++i) os << (i ? "," : "") << out.csv_header[i];
  os << "\n";
  os.precision(17);
  for (const auto& row : out.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

// l1-annulus ------------------------------------------------------------------------

struct L1Args {
  double R = 0.0, A = 0.0, B = 0.0, scale = 2.0;
  L1Options opt;
};

Output cmd_l1(const L1Args& a, const Globals& g) {
  L1Options opt = a.opt;
  opt.seed = g.seed;
  double A = a.A, B = a.B;
  if (a.R != 0.0) {
    if (!(a.R > 1.0)) throw ConfigError("R must be > 1");
    A = 1.0 / std::sqrt(a.R);
    B = std::sqrt(a.R);
  } else if (!(A > 0.0 && B > A)) {
    throw ConfigError("give --R > 1, or --A and --B with 0 < A < B");
  }
  const InvariantReport r = l1_annulus(A, B, a.scale, opt);
  const double analytic = *r.lower_bound;
  const double sr = std::sqrt(B / A);
  Output out;
  out.report = {{"command", "l1-annulus"},
                {"inner", A},
                {"outer", B},
                {"modulus", B / A},
                {"scale", a.scale},
                {"value", r.value},
                {"analytic", analytic},
                {"relative_error", (r.value - analytic) / analytic},
                {"certificate_max_deviation", r.certificate_parameter},
                {"deviation_limit", 0.05 * (sr - 1.0 / sr)},
                {"evaluations", r.evaluations},
                {"certificate", curve_to_json(*r.curve)}};
  out.csv_header = {"t", "re", "im"};
  for (std::size_t i = 0; i < r.curve->points().size(); ++i) {
    const cplx z = r.curve->points()[i][0];
    out.csv_rows.push_back({r.curve->params()[i], z.real(), z.imag()});
  }
  return out;
}

std::vector<Check> l1_checks() {
  auto near_l1 = [](double R, double want) {
    return [R, want] { return expect_near(l1_annulus(R, 2.0).value, want, 0.01); };
  };
  return {
      {"R=e, scale 2 gives pi^2", near_l1(std::numbers::e, std::numbers::pi * std::numbers::pi)},
      {"R=4, scale 2 gives pi^2/ln 4", near_l1(4.0, std::numbers::pi * std::numbers::pi / std::log(4.0))},
      {"A(1,9), scale 2 gives pi^2/ln 9",
       [] { return expect_near(l1_annulus(1.0, 9.0, 2.0).value, std::numbers::pi * std::numbers::pi / std::log(9.0), 0.01); }},
      {"certificate stays near the unit circle",
       [] {
         const double R = std::numbers::e;
         return expect(l1_annulus(R, 2.0).certificate_parameter < 0.05 * (std::sqrt(R) - 1.0 / std::sqrt(R)),
                       "certificate deviates too far");
       }},
      {"R=1 is rejected", [] { return expect_throw<ConfigError>([] { l1_annulus(1.0, 2.0); }, "R=1"); }},
  };
}

// kob-eval --------------------------------------------------------------------------

struct EvalArgs {
  std::string domain, p, v, budget;
  bool no_estimate = false;
};

Output cmd_kob_eval(const EvalArgs& a, const Globals& g) {
  const Domain d = domain_from_json(load_json_arg(a.domain));
  const CPoint p(parse_cvec(a.p));
  const TVector v(parse_cvec(a.v));
  OptimizerBudget b;
  if (!a.budget.empty()) b = budget_from_json(load_json_arg(a.budget));
  b.seed = g.seed;
  b.threads = g.threads;
  Output out;
  out.report = {{"command", "kob-eval"}, {"domain", domain_to_json(d)}, {"p", to_json(p.coords())}, {"v", to_json(v.comps())}};
  double closed = std::numeric_limits<double>::quiet_NaN(), est = closed;
  if (d.has_closed_metric()) {
    const MetricValue m = kob_royden_closed(d, p, v);
    closed = m.value;
    out.report["closed_form"] = m.value;
  } else {
    require_dim(d, p.dim(), "point");
    if (!membership(d, p)) throw DomainError("point not in domain");
    out.report["closed_form"] = nullptr;
  }
  if (!a.no_estimate) {
    const KobEstimate e = estimate_kob_royden_detailed(d, p, v, b);
    est = e.metric.value;
    out.report["estimate"] = est;
    out.report["source"] = source_name(e.metric.source);
    out.report["disc_degree"] = e.disc.degree;
    json stages = json::array();
    for (double s : e.stage_values) stages.push_back(std::isfinite(s) ? json(s) : json(nullptr));
    out.report["stage_values"] = stages;
    out.report["objective_evaluations"] = e.objective_evaluations;
    if (d.has_closed_metric()) out.report["ratio"] = est / closed;
  }
  out.report["budget"] = budget_to_json(b);
  out.csv_header = {"closed_form", "estimate"};
  out.csv_rows.push_back({closed, est});
  return out;
}

std::vector<Check> kob_eval_checks() {
  const Domain disc = Domain::disc(0.0, 1.0), ball = Domain::ball(2, 1.0);
  return {
      {"disc density at 0, scale 2", [] { return expect_near(poincare_disc_density(0.0, 2.0).value, 2.0, 1e-12); }},
      {"disc density at 0.5, scale 2", [] { return expect_near(poincare_disc_density(0.5, 2.0).value, 8.0 / 3.0, 1e-12); }},
      {"annulus density at |p|=1, R=e",
       [] { return expect_near(annulus_canonical_density(1.0, std::numbers::e, 2.0).value, std::numbers::pi / 2, 1e-12); }},
      {"annulus density at |p|=1, R=e^2",
       [] { return expect_near(annulus_canonical_density(1.0, std::exp(2.0), 2.0).value, std::numbers::pi / 4, 1e-12); }},
      {"Disc(0,1), p=0, v=1", [disc] { return expect_near(kob_royden_closed(disc, {0.0}, {1.0}).value, 1.0, 1e-12); }},
      {"Polydisc(1,2), p=0, v=(1,1)",
       [] { return expect_near(kob_royden_closed(Domain::polydisc({1.0, 2.0}), {0.0, 0.0}, {1.0, 1.0}).value, 1.0, 1e-12); }},
      {"Ball(2,0,1), p=0, v=(3,4)", [ball] { return expect_near(kob_royden_closed(ball, {0.0, 0.0}, {3.0, 4.0}).value, 5.0, 1e-12); }},
      {"disc distance 0 to 0.5", [disc] { return expect_near(kob_distance_closed(disc, {0.0}, {0.5}), std::atanh(0.5), 1e-12); }},
      {"ball distance 0 to (0.5,0)",
       [ball] { return expect_near(kob_distance_closed(ball, {0.0, 0.0}, {0.5, 0.0}), std::atanh(0.5), 1e-12); }},
      {"estimator on the disc centre is 1 within the margin",
       [disc] {
         OptimizerBudget b;
         b.max_degree = 1;
         return expect_near(estimate_kob_royden(disc, {0.0}, {1.0}, b).value, 1.0, 1.01e-3);
       }},
      {"estimator on Ball(2), p=(0.3,0), within 2% above closed",
       [ball] {
         OptimizerBudget b;
         b.max_degree = 4;
         const double c = kob_royden_closed(ball, {0.3, 0.0}, {1.0, 0.0}).value;
         const double e = estimate_kob_royden(ball, {0.3, 0.0}, {1.0, 0.0}, b).value;
         return expect(e >= c - 1e-9 && e <= 1.02 * c, "estimate " + std::to_string(e) + " vs " + std::to_string(c));
       }},
      {"point outside the disc is rejected",
       [disc] { return expect_throw<DomainError>([disc] { kob_royden_closed(disc, {1.5}, {1.0}); }, "outside"); }},
  };
}

// monotonicity ----------------------------------------------------------------------

struct MonoArgs {
  std::string inner, outer, p;
  int probes = 16;
  bool uniform = false;
  int samples = 32;
};

Output cmd_monotonicity(const MonoArgs& a, const Globals& g) {
  const Domain inner = domain_from_json(load_json_arg(a.inner));
  const Domain outer = domain_from_json(load_json_arg(a.outer));
  MonotonicityOptions opt;
  opt.seed = g.seed;
  opt.threads = g.threads;
  Output out;
  out.report = {{"command", "monotonicity"}, {"inner", domain_to_json(inner)}, {"outer", domain_to_json(outer)}};
  std::vector<double> ratios;
  if (a.uniform) {
    const auto u = uniform_monotonicity_constant(inner, outer, a.samples, opt);
    out.report["mode"] = "uniform";
    out.report["result"] = report_to_json(u);
    ratios = u.ratios;
  } else {
    if (a.p.empty()) throw ConfigError("--p is required unless --uniform is given");
    const auto r = lemma_compare_bound(inner, outer, CPoint(parse_cvec(a.p)), a.probes, opt);
    out.report["mode"] = "pointwise";
    out.report["p"] = to_json(parse_cvec(a.p));
    out.report["result"] = report_to_json(r);
    ratios = r.ratios;
  }
  out.csv_header = {"index", "ratio"};
  for (std::size_t i = 0; i < ratios.size(); ++i) out.csv_rows.push_back({static_cast<double>(i), ratios[i]});
  return out;
}

std::vector<Check> monotonicity_checks() {
  return {
      {"Disc(0,1) in Disc(0,2) at 0: c = 1/2, tight",
       [] {
         const auto r = lemma_compare_bound(Domain::disc(0.0, 1.0), Domain::disc(0.0, 2.0), {0.0}, 8);
         return expect_near(r.c_bound, 0.5, 1e-9) + expect_near(r.observed_ratio, 0.5, 1e-9);
       }},
      {"Ball(2,0,1) in Ball(2,0,1.25) at 0: c = 0.8, tight",
       [] {
         const auto r = lemma_compare_bound(Domain::ball(2, 1.0), Domain::ball(2, 1.25), {0.0, 0.0}, 8);
         return expect_near(r.c_bound, 0.8, 1e-9) + expect_near(r.observed_ratio, 0.8, 1e-9);
       }},
      {"Annulus(1,2) in Annulus(0.5,4) at 1.5: observed <= bound < 1",
       [] {
         const auto r = lemma_compare_bound(Domain::annulus(1.0, 2.0), Domain::annulus(0.5, 4.0), {1.5}, 4);
         return expect(r.c_bound < 1.0 && r.observed_ratio <= r.c_bound, "bound violated");
       }},
      {"uniform Disc(0,1) in Disc(0,2): c about 1/2",
       [] {
         const auto u = uniform_monotonicity_constant(Domain::disc(0.0, 1.0), Domain::disc(0.0, 2.0), 64);
         return expect(u.c <= 0.51 && u.c > 0.0, "c = " + std::to_string(u.c));
       }},
      {"uniform TubeSphere(1,0.2) in TubeSphere(1,0.4): c < 1",
       [] {
         const auto u =
             uniform_monotonicity_constant(Domain::tube_sphere(1, 0.2), Domain::tube_sphere(1, 0.4), 8);
         return expect(u.c < 1.0, "c = " + std::to_string(u.c));
       }},
  };
}

// hausdorff -------------------------------------------------------------------------

struct HausArgs {
  std::string domain, shape = "circle", center = "0", from, to, metric = "kobayashi", schedule;
  double radius = 1.0, scale = 1.0, rho = 1.0;
  int coord = 0, samples = 64, k = 1, levels = 1;
};

Output cmd_hausdorff(const HausArgs& a, const Globals&) {
  const Domain d = domain_from_json(load_json_arg(a.domain));
  MetricKind metric;
  if (a.metric == "kobayashi")
    metric = MetricKind::Kobayashi;
  else if (a.metric == "euclidean")
    metric = MetricKind::Euclidean;
  else
    throw ConfigError("--metric is kobayashi or euclidean");
  MeasureOptions opt = default_measure_options(d, a.scale);
  std::vector<double> schedule = a.schedule.empty() ? std::vector<double>{0.5, 0.25, 0.125, 0.0625}
                                                     : parse_reals(a.schedule);
  Output out;
  out.report = {{"command", "hausdorff"}, {"domain", domain_to_json(d)}, {"shape", a.shape}};
  MeasureReport r;
  if (a.shape == "circle" || a.shape == "segment") {
    const SampledCurve c = a.shape == "circle"
                               ? SampledCurve::circle(static_cast<std::size_t>(d.dim()), static_cast<std::size_t>(a.coord),
                                                      parse_complex(a.center), a.radius, a.samples)
                               : SampledCurve::polyline({CPoint(parse_cvec(a.from)), CPoint(parse_cvec(a.to))}, false);
    require_inside(d, c);
    r = hausdorff_k_measure(d, c, a.k, metric, schedule, opt);
    if (metric == MetricKind::Kobayashi) {
      const KobayashiMetric oracle(d, opt.oracle);
      out.report["metric_length"] = curve_length_metric(oracle, c, LengthMode::Integrated, a.scale);
    }
  } else if (a.shape == "sphere") {
    const SphereTriangulation base = a.k == 1 ? circle_triangulation(a.samples) : icosphere(a.levels);
    const SphereMeshMap m = real_sphere_map(base, a.rho);
    require_inside(d, m);
    r = hausdorff_k_measure(d, m, a.k, metric, schedule, opt);
  } else {
    throw ConfigError("--shape is circle, segment or sphere");
  }
  out.report["measure"] = report_to_json(r);
  out.csv_header = {"epsilon", "pieces", "total"};
  for (const auto& c : r.schedule)
    out.csv_rows.push_back({c.epsilon, static_cast<double>(c.pieces.size()), c.total});
  return out;
}

std::vector<Check> hausdorff_checks() {
  return {
      {"unit circle in M(R=e), k=1, scale 2: pi^2",
       [] {
         const Domain M = Domain::annulus(std::exp(-0.5), std::exp(0.5));
         const auto c = SampledCurve::circle(1, 0, 0.0, 1.0, 256);
         const auto r = hausdorff_k_measure(M, c, 1, MetricKind::Kobayashi, {0.5, 0.25, 0.125},
                                            default_measure_options(M, 2.0));
         return expect_near(r.value, std::numbers::pi * std::numbers::pi, 0.02);
       }},
      {"segment 0 to 0.5 in the disc: artanh(0.5)",
       [] {
         const Domain D = Domain::disc(0.0, 1.0);
         const auto c = SampledCurve::polyline({{0.0}, {0.5}}, false);
         const auto r =
             hausdorff_k_measure(D, c, 1, MetricKind::Kobayashi, {0.1, 0.05, 0.025}, default_measure_options(D));
         return expect_near(r.value, std::atanh(0.5), 0.02);
       }},
      {"constant mesh has measure 0",
       [] {
         const Domain T = Domain::tube_circle(2, 0.3);
         const auto m = make_sphere_map(circle_triangulation(16), [](const Vec3&) { return CVec{1.0, 0.0}; });
         return expect(sphere_map_measure_upper(T, m, 1, MetricKind::Kobayashi, default_measure_options(T)) == 0.0,
                       "nonzero");
       }},
  };
}

// tube-lk ---------------------------------------------------------------------------

struct LkArgs {
  int k = 1;
  std::string radii = "0.1,0.15,0.2,0.25,0.3";
  int mesh_density = 0;
  bool no_shrink = false;
};

Output cmd_tube_lk(const LkArgs& a, const Globals& g) {
  const std::vector<double> radii = parse_reals(a.radii);
  std::vector<InvariantReport> reports(radii.size());
  parallel_for(radii.size(), g.threads, [&](std::size_t i) {
    LkOptions opt = default_lk_options(a.k, radii[i]);
    if (a.mesh_density > 0) opt.mesh_density = a.mesh_density;
    opt.shrink_search = !a.no_shrink;
    reports[i] = lk_tube_upper(a.k, radii[i], opt);
  });
  Output out;
  json rows = json::array();
  bool decreasing = true;
  double min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    json c = json::array();
    for (const auto& [rho, v] : reports[i].candidates) c.push_back({{"rho", rho}, {"value", v}});
    rows.push_back({{"r", radii[i]}, {"value", reports[i].value}, {"best_rho", reports[i].certificate_parameter}, {"candidates", c}});
    out.csv_rows.push_back({radii[i], reports[i].value, reports[i].certificate_parameter});
    if (i > 0 && radii[i] > radii[i - 1]) {
      const double margin = reports[i - 1].value - reports[i].value;
      min_margin = std::min(min_margin, margin);
      if (!(margin > 0.0)) decreasing = false;
    }
  }
  out.report = {{"command", "tube-lk"}, {"k", a.k}, {"shrink_search", !a.no_shrink}, {"rows", rows},
                {"strictly_decreasing", decreasing}, {"min_margin", std::isfinite(min_margin) ? json(min_margin) : json(nullptr)}};
  out.csv_header = {"r", "value", "best_rho"};
  return out;
}

std::vector<Check> tube_lk_checks() {
  return {
      {"k=1: value at r=0.2 exceeds value at r=0.3",
       [] {
         const double a = lk_tube_upper(1, 0.2).value, b = lk_tube_upper(1, 0.3).value;
         return expect(b > 0.0 && std::isfinite(a) && a > b, "not decreasing");
       }},
      {"k=2: value at r=0.2 exceeds value at r=0.3",
       [] {
         const double a = lk_tube_upper(2, 0.2).value, b = lk_tube_upper(2, 0.3).value;
         return expect(b > 0.0 && std::isfinite(a) && a > b, "not decreasing");
       }},
      {"vk of the core circle equals the unshrunk lk value",
       [] {
         LkOptions opt = default_lk_options(1, 0.25);
         opt.shrink_search = false;
         const auto lk = lk_tube_upper(1, 0.25, opt);
         const double vk = vk_tube_upper(1, 0.25, real_sphere_map(circle_triangulation(opt.mesh_density)), opt.measure);
         return expect_near(vk, lk.value, 1e-12);
       }},
      {"degree-0 candidate is not admissible",
       [] {
         const auto m = make_sphere_map(circle_triangulation(32), [](const Vec3& x) {
           return CVec{std::cos(0.2 * x[1]), std::sin(0.2 * x[1])};
         });
         return expect_throw<ConfigError>(
             [&] { vk_tube_upper(1, 0.25, m, default_lk_options(1, 0.25).measure); }, "degree 0");
       }},
  };
}

// fixed-point -----------------------------------------------------------------------

struct FixedArgs {
  std::string map, domain, starts;
  FixedPointOptions opt;
};

Output cmd_fixed_point(const FixedArgs& a, const Globals& g) {
  const PolyMap f = polymap_from_json(load_json_arg(a.map));
  const Domain U = domain_from_json(load_json_arg(a.domain));
  FixedPointOptions opt = a.opt;
  opt.seed = g.seed;
  opt.threads = g.threads;
  opt.monotonicity.seed = g.seed;
  opt.monotonicity.threads = g.threads;
  const FixedPointReport r = iterate_to_fixed_point(f, U, parse_points(a.starts), opt);
  Output out;
  out.report = {{"command", "fixed-point"}, {"map", polymap_to_json(f)}, {"domain", domain_to_json(U)},
                {"result", report_to_json(r)}};
  out.csv_header = {"step"};
  for (int i = 0; i < U.dim(); ++i) {
    out.csv_header.push_back("re" + std::to_string(i));
    out.csv_header.push_back("im" + std::to_string(i));
  }
  out.csv_header.push_back("kob_distance_to_z0");
  for (std::size_t k = 0; k < r.iterates.size(); ++k) {
    std::vector<double> row{static_cast<double>(k)};
    for (const auto& z : r.iterates[k]) {
      row.push_back(z.real());
      row.push_back(z.imag());
    }
    row.push_back(k < r.kob_rates.size() ? r.kob_rates[k] : std::numeric_limits<double>::quiet_NaN());
    out.csv_rows.push_back(std::move(row));
  }
  return out;
}

std::vector<Check> fixed_point_checks() {
  const Domain disc = Domain::disc(0.0, 1.0);
  const PolyMap half = PolyMap::affine(1, 1, {0.5}, {0.0});
  const PolyMap shift = PolyMap::affine(1, 1, {0.5}, {0.25});
  return {
      {"z/2 has image margin 1/2", [=] { return expect_near(check_strict_image(half, disc).delta, 0.5, 1e-5); }},
      {"z/2+1/4 has image margin 1/4", [=] { return expect_near(check_strict_image(shift, disc).delta, 0.25, 1e-5); }},
      {"identity is not strictly contracting",
       [=] { return expect_throw<DomainError>([=] { check_strict_image(PolyMap::identity(1), disc); }, "identity"); }},
      {"z/2 from 0.9 converges to 0",
       [=] {
         const auto r = iterate_to_fixed_point(half, disc, {{0.9}});
         return expect(std::abs(r.z0[0]) < 1e-10 && r.tail_within_bound, "z0 or rate wrong");
       }},
      {"z/2+1/4 from three starts converges to 1/2",
       [=] {
         const auto r = iterate_to_fixed_point(shift, disc, {{0.0}, {cplx(0.0, 0.9)}, {-0.5}});
         return expect(std::abs(r.z0[0] - 0.5) < 1e-10 && r.distinct_starts_agreement < 1e-10, "z0 wrong");
       }},
      {"linear ball map converges to (0.1125, 0.0375)",
       [] {
         const PolyMap f = PolyMap::affine(2, 2, {0.0, 1.0 / 3, 1.0 / 3, 0.0}, {0.1, 0.0});
         const auto r = iterate_to_fixed_point(f, Domain::ball(2, 1.0), {{0.0, 0.0}, {0.5, -0.5}});
         return expect(distance(r.z0, CVec{0.1125, 0.0375}) < 1e-10, "z0 wrong");
       }},
  };
}

// tube-degree -----------------------------------------------------------------------

struct DegreeArgs {
  std::string map, source, target;
  int mesh_density = 256;
  bool collapse = false;
};

Output cmd_tube_degree(const DegreeArgs& a, const Globals&) {
  const PolyMap f = polymap_from_json(load_json_arg(a.map));
  const Domain s = domain_from_json(load_json_arg(a.source));
  const Domain t = domain_from_json(load_json_arg(a.target));
  Output out;
  out.report = {{"command", "tube-degree"}, {"source", domain_to_json(s)}, {"target", domain_to_json(t)}};
  if (a.collapse) {
    const DegreeCollapse c = degree_collapse_demo(f, s, t);
    out.report["degree"] = c.degree;
    out.report["collapse"] = report_to_json(c);
  } else {
    out.report["degree"] = tube_map_degree(f, s, t, a.mesh_density);
  }
  out.csv_header = {"degree"};
  out.csv_rows.push_back({out.report["degree"].get<double>()});
  return out;
}

std::vector<Check> tube_degree_checks() {
  const Domain t3 = Domain::tube_circle(2, 0.3);
  return {
      {"identity on TubeCircle(2,0.3) has degree 1",
       [=] { return expect(tube_map_degree(PolyMap::identity(2), t3, t3) == 1, "degree != 1"); }},
      {"constant map to (1,0) has degree 0",
       [=] { return expect(tube_map_degree(PolyMap::constant(2, {1.0, 0.0}), t3, t3) == 0, "degree != 0"); }},
      {"(z1^2, 0) from TubeCircle(2,0.1) into TubeCircle(2,0.5) has degree 2",
       [] {
         const PolyMap f(2, 2, {{{2, 0}, {1.0, 0.0}}});
         return expect(tube_map_degree(f, Domain::tube_circle(2, 0.1), Domain::tube_circle(2, 0.5)) == 2, "degree != 2");
       }},
      {"contracting tube map collapses with degree 0",
       [=] {
         const PolyMap f(2, 2, {{{0, 0}, {1.0, 0.0}}, {{1, 0}, {0.05, 0.0}}});
         const auto c = degree_collapse_demo(f, t3, Domain::tube_circle(2, 0.1));
         return expect(c.degree == 0 && c.collapse_step && c.multiplicative, "no collapse");
       }},
      {"(z1, 0) on a single tube is not strictly contracting",
       [=] {
         const PolyMap f(2, 2, {{{1, 0}, {1.0, 0.0}}});
         return expect_throw<DomainError>([&] { check_strict_image(f, t3); }, "not contracting");
       }},
      {"A(1,10) to A(1,2) by 1.5+0.04z is forced trivial",
       [] {
         const PolyMap f = PolyMap::affine(1, 1, {0.04}, {1.5});
         const auto v = annulus_map_homotopy_verdict(f, Domain::annulus(1.0, 10.0), Domain::annulus(1.0, 2.0));
         return expect(v.verdict == HomotopyVerdict::TrivialForced && v.core_winding == 0, "verdict");
       }},
      {"A(1,2) into A(1,4) by inclusion is not forced, winding 1",
       [] {
         const auto v =
             annulus_map_homotopy_verdict(PolyMap::identity(1), Domain::annulus(1.0, 2.0), Domain::annulus(1.0, 4.0));
         return expect(v.verdict == HomotopyVerdict::NotForced && v.core_winding == 1, "verdict");
       }},
      {"z^2 is not a self-map of A(1,4)",
       [] {
         const PolyMap f(1, 1, {{{2}, {1.0}}});
         const Domain A = Domain::annulus(1.0, 4.0);
         return expect_throw<DomainError>([&] { annulus_map_homotopy_verdict(f, A, A); }, "containment");
       }},
  };
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const DomainError*>(&e)) return 3;
  if (dynamic_cast<const BudgetError*>(&e)) return 4;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kobayashi metric laboratory: estimators, invariants and contraction experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (default: KOBLAB_THREADS or 1)");
  app.add_option("--output", g.output, "Write the report here instead of stdout");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--golden", g.golden, "Compare the report against a stored baseline");

  std::function<Output()> command;
  std::function<std::vector<Check>()> checks;
  std::string command_name;
  bool selftest = false;
  auto add = [&](const std::string& name, const std::string& help, auto& args, auto run, auto table) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_flag("--selftest", selftest, "Run this command's example table");
    sub->callback([&, name, run, table] {
      command_name = name;
      command = [&, run] { return run(args, g); };
      checks = table;
    });
    return sub;
  };

  L1Args l1;
  auto* s_l1 = add("l1-annulus", "Shortest winding-one loop in an annulus", l1, cmd_l1, l1_checks);
  s_l1->add_option("--R", l1.R, "Annulus {1/sqrt(R) < |z| < sqrt(R)}");
  s_l1->add_option("--A", l1.A, "Inner radius");
  s_l1->add_option("--B", l1.B, "Outer radius");
  s_l1->add_option("--scale", l1.scale, "Metric scale (2: curvature -1)")->capture_default_str();
  s_l1->add_option("--samples", l1.opt.samples, "Loop samples")->capture_default_str();
  s_l1->add_option("--coefficients", l1.opt.coefficients, "Profile coefficients")->capture_default_str();
  s_l1->add_option("--restarts", l1.opt.restarts, "Simplex restarts")->capture_default_str();
  s_l1->add_option("--max-iters", l1.opt.max_iters, "Simplex iterations per restart")->capture_default_str();

  EvalArgs ev;
  auto* s_ev = add("kob-eval", "Kobayashi-Royden metric: closed form and disc estimate", ev, cmd_kob_eval, kob_eval_checks);
  s_ev->add_option("--domain", ev.domain, "Domain JSON file or inline JSON");
  s_ev->add_option("--p", ev.p, "Point, comma-separated complex coordinates");
  s_ev->add_option("--v", ev.v, "Tangent vector, comma-separated complex coordinates");
  s_ev->add_option("--budget", ev.budget, "Optimizer budget JSON");
  s_ev->add_flag("--no-estimate", ev.no_estimate, "Closed form only");

  MonoArgs mo;
  auto* s_mo = add("monotonicity", "Comparison constant for nested domains", mo, cmd_monotonicity, monotonicity_checks);
  s_mo->add_option("--inner", mo.inner, "Inner domain JSON");
  s_mo->add_option("--outer", mo.outer, "Outer domain JSON");
  s_mo->add_option("--p", mo.p, "Point for the pointwise bound");
  s_mo->add_option("--probes", mo.probes, "Probe directions at p")->capture_default_str();
  s_mo->add_flag("--uniform", mo.uniform, "Sampled uniform constant over the inner domain");
  s_mo->add_option("--samples", mo.samples, "Sample points for --uniform")->capture_default_str();

  HausArgs ha;
  auto* s_ha = add("hausdorff", "Hausdorff k-measure of a circle, segment or sphere", ha, cmd_hausdorff, hausdorff_checks);
  s_ha->add_option("--domain", ha.domain, "Domain JSON");
  s_ha->add_option("--shape", ha.shape, "circle, segment or sphere")->capture_default_str();
  s_ha->add_option("--center", ha.center, "Circle centre (complex)");
  s_ha->add_option("--radius", ha.radius, "Circle radius")->capture_default_str();
  s_ha->add_option("--coord", ha.coord, "Coordinate carrying the circle")->capture_default_str();
  s_ha->add_option("--samples", ha.samples, "Circle samples / circle-mesh segments")->capture_default_str();
  s_ha->add_option("--from", ha.from, "Segment start");
  s_ha->add_option("--to", ha.to, "Segment end");
  s_ha->add_option("--k", ha.k, "Measure dimension")->capture_default_str();
  s_ha->add_option("--levels", ha.levels, "Icosphere subdivisions for --shape sphere")->capture_default_str();
  s_ha->add_option("--rho", ha.rho, "Sphere radius for --shape sphere")->capture_default_str();
  s_ha->add_option("--metric", ha.metric, "kobayashi or euclidean")->capture_default_str();
  s_ha->add_option("--scale", ha.scale, "Metric scale")->capture_default_str();
  s_ha->add_option("--schedule", ha.schedule, "Decreasing epsilons, comma-separated");

  LkArgs lk;
  auto* s_lk = add("tube-lk", "Upper bounds on l_k of sphere tubes across radii", lk, cmd_tube_lk, tube_lk_checks);
  s_lk->add_option("--k", lk.k, "Sphere dimension, 1 or 2")->capture_default_str();
  s_lk->add_option("--radii", lk.radii, "Tube radii, comma-separated")->capture_default_str();
  s_lk->add_option("--mesh-density", lk.mesh_density, "Circle segments (k=1) or icosphere levels (k=2)");
  s_lk->add_flag("--no-shrink", lk.no_shrink, "Only the core sphere itself");

  FixedArgs fp;
  auto* s_fp = add("fixed-point", "Iterate a strictly contracting self-map", fp, cmd_fixed_point, fixed_point_checks);
  s_fp->add_option("--map", fp.map, "PolyMap JSON");
  s_fp->add_option("--domain", fp.domain, "Domain JSON");
  s_fp->add_option("--starts", fp.starts, "Starts separated by ';' (default: quasi-random)");
  s_fp->add_option("--tol", fp.opt.tol, "Step tolerance")->capture_default_str();
  s_fp->add_option("--max-iter", fp.opt.max_iter, "Iteration budget")->capture_default_str();
  s_fp->add_option("--image-samples", fp.opt.image_samples, "Samples for the strict-image check")->capture_default_str();

  DegreeArgs dg;
  auto* s_dg = add("tube-degree", "Degree of a map between circle tubes", dg, cmd_tube_degree, tube_degree_checks);
  s_dg->add_option("--map", dg.map, "PolyMap JSON");
  s_dg->add_option("--source", dg.source, "Source tube JSON");
  s_dg->add_option("--target", dg.target, "Target tube JSON");
  s_dg->add_option("--mesh-density", dg.mesh_density, "Samples of the core circle")->capture_default_str();
  s_dg->add_flag("--collapse", dg.collapse, "Iterate and test the degree collapse");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (g.threads <= 0) {
    const char* env = std::getenv("KOBLAB_THREADS");
    g.threads = env ? std::max(1, std::atoi(env)) : 1;
  }

  try {
    if (selftest) return run_selftest(command_name, checks());
    const auto t0 = std::chrono::steady_clock::now();
    const Output out = command();
    std::cerr << command_name << ": "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    const std::string text = render(out, g.format);
    if (g.output.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(g.output);
      if (!f) throw ConfigError("cannot write '" + g.output + "'");
      f << text;
    }
    if (!g.golden.empty()) return check_golden(out.report, g.golden);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}
