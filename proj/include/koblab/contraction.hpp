#pragma once

#include <optional>

#include "koblab/distance.hpp"
#include "koblab/monotonicity.hpp"
#include "koblab/polymap.hpp"

namespace koblab {

struct StrictImage {
  /// {p : dist_to_complement(U, p) > delta / 2}, as a Generic domain.
  Domain V;
  /// min over sampled images of dist_to_complement(U, f(p)).
  double delta;
};

/// Sampled check that f(U) stays a positive distance away from the boundary of U.
StrictImage check_strict_image(const PolyMap& f, const Domain& U, int samples = 2000, std::uint64_t seed = 0);

struct FixedPointOptions {
  double tol = 1e-12;
  int max_iter = 10000;
  int image_samples = 2000;
  /// Points for the sampled F_U / F_V ratio reported next to c_certified.
  int monotonicity_samples = 16;
  /// Number of quasi-random starts drawn when none are given.
  int default_starts = 16;
  GraphOptions graph;
  MonotonicityOptions monotonicity;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct FixedPointReport {
  CVec z0;
  double residual = 0.0;  // |f(z0) - z0|
  std::vector<CVec> starts;
  std::vector<CVec> limits;
  std::vector<int> steps;
  /// Orbit of the first start.
  std::vector<CVec> iterates;
  /// d_U(z0, f^k(p)) along the orbit of the first start, until it drops below 1e-8.
  std::vector<double> kob_rates;
  /// d_U(z0, f^{k+1}(p)) / d_U(z0, f^k(p)) over the last (up to) ten recorded steps,
  /// taken over every start when the distance has a closed form.
  std::vector<double> tail_ratios;
  double max_tail_ratio = 0.0;
  double c_certified = 1.0;
  double c_sampled = 0.0;
  double image_margin = 0.0;
  bool converged = false;
  bool tail_within_bound = false;
  double distinct_starts_agreement = 0.0;
  /// min / max of |z0 - f^k(p)| / d_U(z0, f^k(p)) along the recorded tail.
  double comparability_min = 0.0;
  double comparability_max = 0.0;
};

FixedPointReport iterate_to_fixed_point(const PolyMap& f, const Domain& U, std::vector<CVec> starts,
                                        const FixedPointOptions& opt = {});

struct DegreeCollapse {
  int degree = 0;
  /// (j, tube_map_degree(f^j)) for the powers that were composed.
  std::vector<std::pair<int, int>> power_degrees;
  bool multiplicative = true;
  CVec z0;
  /// First j with sup over samples of |f^j(p) - z0| below the target margin at z0.
  std::optional<int> collapse_step;
  double collapse_radius = 0.0;
  double target_margin = 0.0;
};

/// f: source -> target between circle tubes, target nested in source: computes
/// deg f, deg(f^j) = (deg f)^j, and the step at which sampled iterates fall into a
/// ball around the fixed point contained in the target.
DegreeCollapse degree_collapse_demo(const PolyMap& f, const Domain& source, const Domain& target,
                                    int samples = 2000, int horizon = 60);

}  // namespace koblab
