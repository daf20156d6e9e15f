#include "koblab/contraction.hpp"

#include <algorithm>
#include <cmath>

#include "koblab/closed_form.hpp"
#include "koblab/invariants.hpp"
#include "koblab/parallel.hpp"

namespace koblab {

StrictImage check_strict_image(const PolyMap& f, const Domain& U, int samples, std::uint64_t seed) {
  if (f.n_in() != U.dim() || f.n_out() != U.dim()) throw ConfigError("map is not a self-map of the domain's C^n");
  const auto pts = probe_points(U, samples, seed);
  double margin = std::numeric_limits<double>::infinity(), depth = 0.0;
  for (const auto& p : pts) {
    depth = std::max(depth, U.signed_distance(p));
    const CVec fp = f(p);
    const double m = U.signed_distance(fp);
    if (!(m > 0.0))
      throw DomainError("map leaves the domain: " + format_point(p) + " maps to " + format_point(fp));
    margin = std::min(margin, m);
  }
  if (margin < 1e-3 * depth) throw DomainError("image not relatively compact (at sampling density)");
  Generic g;
  g.n = U.dim();
  g.bbox = U.bbox();
  g.convex = U.convex();
  g.label = "strict-image(" + U.kind_name() + ")";
  const double half = 0.5 * margin;
  g.field = [U, half](std::span<const cplx> p) { return U.signed_distance(p) - half; };
  return {Domain::generic(std::move(g)), margin};
}

namespace {

struct Orbit {
  std::vector<CVec> points;
  bool converged = false;
};

Orbit run_orbit(const PolyMap& f, CVec z, double tol, int max_iter) {
  Orbit o;
  o.points.push_back(z);
  for (int it = 0; it < max_iter; ++it) {
    CVec next = f(z);
    const double step = distance(next, z);
    o.points.push_back(next);
    z = std::move(next);
    if (step < tol) {
      o.converged = true;
      break;
    }
  }
  return o;
}

}  // namespace

FixedPointReport iterate_to_fixed_point(const PolyMap& f, const Domain& U, std::vector<CVec> starts,
                                        const FixedPointOptions& opt) {
  if (!(opt.tol > 0.0) || opt.max_iter < 1) throw ConfigError("tol and max_iter must be positive");
  const StrictImage si = check_strict_image(f, U, opt.image_samples, opt.seed);
  if (starts.empty()) starts = sample_interior(U, opt.default_starts, opt.seed + 7);
  for (const auto& s : starts) {
    if (static_cast<int>(s.size()) != U.dim()) throw ConfigError("start has the wrong dimension");
    if (!(U.signed_distance(s) > 0.0)) throw DomainError("start " + format_point(s) + " is not in the domain");
  }

  std::vector<Orbit> orbits(starts.size());
  parallel_for(starts.size(), opt.threads,
               [&](std::size_t i) { orbits[i] = run_orbit(f, starts[i], opt.tol, opt.max_iter); });
  for (const auto& o : orbits)
    if (!o.converged) throw BudgetError("did not converge in budget");

  FixedPointReport r;
  r.starts = starts;
  for (const auto& o : orbits) {
    r.limits.push_back(o.points.back());
    r.steps.push_back(static_cast<int>(o.points.size()) - 1);
  }
  for (std::size_t i = 0; i < r.limits.size(); ++i)
    for (std::size_t j = i + 1; j < r.limits.size(); ++j)
      r.distinct_starts_agreement = std::max(r.distinct_starts_agreement, distance(r.limits[i], r.limits[j]));
  if (r.distinct_starts_agreement > 10.0 * opt.tol)
    throw InternalError("uniqueness violation — inconsistent estimates");
  r.z0 = r.limits.front();
  r.residual = distance(f(r.z0), r.z0);
  r.converged = true;
  r.iterates = orbits.front().points;
  r.image_margin = si.delta;

  const auto mono = uniform_monotonicity_constant(si.V, U, opt.monotonicity_samples, opt.monotonicity);
  r.c_certified = mono.c_certified;
  r.c_sampled = mono.c;

  const KobayashiMetric FU = make_oracle(U, opt.monotonicity.estimated);
  const bool closed = has_closed_distance(U);
  const std::size_t orbit_count = closed ? orbits.size() : 1;
  r.comparability_min = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < orbit_count; ++s) {
    std::vector<double> d, e;
    for (const auto& z : orbits[s].points) {
      const double dz = kob_distance(FU, r.z0, z, opt.graph);
      if (dz < 1e-8) break;
      d.push_back(dz);
      e.push_back(distance(r.z0, z));
    }
    if (s == 0) r.kob_rates = d;
    const std::size_t first = d.size() > 11 ? d.size() - 11 : 0;
    for (std::size_t k = first; k + 1 < d.size(); ++k) {
      r.tail_ratios.push_back(d[k + 1] / d[k]);
      r.comparability_min = std::min(r.comparability_min, e[k] / d[k]);
      r.comparability_max = std::max(r.comparability_max, e[k] / d[k]);
    }
  }
  if (r.tail_ratios.empty()) r.comparability_min = 0.0;
  r.max_tail_ratio = r.tail_ratios.empty() ? 0.0 : *std::max_element(r.tail_ratios.begin(), r.tail_ratios.end());
  r.tail_within_bound = r.max_tail_ratio <= r.c_certified + 0.05;
  return r;
}

DegreeCollapse degree_collapse_demo(const PolyMap& f, const Domain& source, const Domain& target, int samples,
                                    int horizon) {
  const auto* s = source.as<TubeCircle>();
  const auto* t = target.as<TubeCircle>();
  if (!s || !t) throw ConfigError("degree collapse needs circle tubes");
  if (s->n != t->n || !(t->r < s->r)) throw ConfigError("target must be a thinner tube of the same dimension");
  require_maps_into(f, source, target, samples);
  check_strict_image(f, source, samples);

  DegreeCollapse out;
  out.degree = tube_map_degree(f, source, target);
  // f^j maps the target into itself, so each power is again a map source -> target
  long poly_degree = 1;
  for (int j = 1; j <= horizon; ++j) {
    poly_degree *= std::max(1, f.degree());
    if (poly_degree > 64) break;
    const int dj = tube_map_degree(f.power(j), source, target);
    out.power_degrees.emplace_back(j, dj);
    long expect = 1;
    for (int i = 0; i < j; ++i) expect *= out.degree;
    if (dj != expect) out.multiplicative = false;
    if (j >= 4) break;
  }

  out.z0 = run_orbit(f, CVec(static_cast<std::size_t>(s->n), cplx(1.0, 0.0)), 1e-13, 100000).points.back();
  out.target_margin = target.signed_distance(out.z0);
  auto pts = probe_points(source, samples, 11);
  for (int j = 1; j <= horizon; ++j) {
    double sup = 0.0;
    for (auto& p : pts) {
      p = f(p);
      sup = std::max(sup, distance(p, out.z0));
    }
    out.collapse_radius = sup;
    if (sup < out.target_margin) {
      out.collapse_step = j;
      break;
    }
  }
  if (out.collapse_step && out.degree != 0) throw InternalError("collapse observed for a map of nonzero degree");
  return out;
}

}  // namespace koblab
