#include "koblab/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "koblab/parallel.hpp"

namespace koblab {

KobayashiMetric make_oracle(const Domain& d, const OracleOptions& estimated) {
  return d.has_closed_metric() ? KobayashiMetric(d) : KobayashiMetric(d, estimated);
}

std::vector<CVec> probe_directions(int n, int count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("need at least one probe vector");
  std::vector<CVec> out;
  for (int i = 0; i < n && static_cast<int>(out.size()) < count; ++i) {
    CVec e(static_cast<std::size_t>(n));
    e[static_cast<std::size_t>(i)] = 1.0;
    out.push_back(std::move(e));
  }
  std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
  std::normal_distribution<double> g;
  while (static_cast<int>(out.size()) < count) {
    CVec v(static_cast<std::size_t>(n));
    for (auto& z : v) z = {g(rng), g(rng)};
    out.push_back(scaled(v, 1.0 / norm(v)));
  }
  return out;
}

MonotonicityReport lemma_compare_bound(const Domain& inner, const Domain& outer, const CPoint& p, int probe_vectors,
                                       const MonotonicityOptions& opt) {
  require_dim(inner, p.dim(), "point");
  if (!membership(inner, p)) throw DomainError("point not in domain");
  MonotonicityReport r;
  r.delta = domain_separation(inner, outer);
  r.b_lower = inner.has_closed_metric() ? closed_unit_minimum(inner, p.coords()) : 1.0 / domain_diameter(inner);
  r.c_bound = 1.0 / (1.0 + r.delta * r.b_lower);
  const KobayashiMetric Fi = make_oracle(inner, opt.estimated), Fo = make_oracle(outer, opt.estimated);
  const auto probes = probe_directions(inner.dim(), probe_vectors, opt.seed);
  r.ratios.assign(probes.size(), 0.0);
  parallel_for(probes.size(), opt.threads,
               [&](std::size_t i) { r.ratios[i] = Fo(p.coords(), probes[i]) / Fi(p.coords(), probes[i]); });
  r.observed_ratio = *std::max_element(r.ratios.begin(), r.ratios.end());
  return r;
}

UniformMonotonicity uniform_monotonicity_constant(const Domain& U, const Domain& V, int sample_points,
                                                  const MonotonicityOptions& opt) {
  if (sample_points < 1) throw ConfigError("need at least one sample point");
  UniformMonotonicity out;
  out.delta = domain_separation(U, V);
  const Domain W = inflate(U, 0.5 * out.delta);
  out.c_certified = 1.0 / (1.0 + 0.5 * out.delta / domain_diameter(W));

  const auto points = sample_interior(U, sample_points, opt.seed);
  const auto dirs = probe_directions(U.dim(), sample_points, opt.seed + 1);
  const KobayashiMetric FU = make_oracle(U, opt.estimated), FV = make_oracle(V, opt.estimated);
  out.samples = sample_points;
  out.ratios.assign(points.size(), 0.0);
  parallel_for(points.size(), opt.threads, [&](std::size_t i) {
    // axis directions first, then seeded random ones
    out.ratios[i] = FV(points[i], dirs[i]) / FU(points[i], dirs[i]);
  });
  out.c = *std::max_element(out.ratios.begin(), out.ratios.end());
  if (!(out.c < 1.0)) throw InternalError("monotonicity violated — estimator inconsistency");
  return out;
}

}  // namespace koblab
