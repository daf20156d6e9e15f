#pragma once

#include "koblab/metric.hpp"

namespace koblab {

struct MonotonicityReport {
  double delta = 0.0;
  double b_lower = 0.0;
  double c_bound = 1.0;
  /// max over probe vectors of F_outer(p, v) / F_inner(p, v)
  double observed_ratio = 0.0;
  std::vector<double> ratios;
};

struct MonotonicityOptions {
  /// Oracle settings for domains without a closed-form metric.
  OracleOptions estimated{light_budget()};
  std::uint64_t seed = 0;
  int threads = 1;
};

/// Oracle for d: closed form, or the estimator with the given options.
KobayashiMetric make_oracle(const Domain& d, const OracleOptions& estimated);

/// Unit probe vectors: the coordinate axes followed by seeded random unit vectors.
std::vector<CVec> probe_directions(int n, int count, std::uint64_t seed);

/// c = 1 / (1 + delta * b) for closure(inner) in outer at p, with b the exact
/// minimum of F_inner(p, .) over unit vectors for closed-form inner domains and
/// 1 / diam(inner) otherwise.
MonotonicityReport lemma_compare_bound(const Domain& inner, const Domain& outer, const CPoint& p, int probe_vectors,
                                       const MonotonicityOptions& opt = {});

struct UniformMonotonicity {
  /// max sampled F_V / F_U (the reported constant, below 1)
  double c = 0.0;
  /// 1 / (1 + (delta / 2) * b_W) from the sandwich U in W in V, W = U inflated by
  /// delta / 2, b_W = 1 / diam(W); holds for every (p, v) with p in U.
  double c_certified = 1.0;
  double delta = 0.0;
  int samples = 0;
  std::vector<double> ratios;
};

/// Sampled sup over p in U and unit v of F_V(p, v) / F_U(p, v), for closure(U) in V.
/// A sampled ratio >= 1 contradicts monotonicity and raises InternalError.
UniformMonotonicity uniform_monotonicity_constant(const Domain& U, const Domain& V, int sample_points,
                                                  const MonotonicityOptions& opt = {});

}  // namespace koblab
