#pragma once

#include <cstdint>

#include "koblab/closed_form.hpp"
#include "koblab/geometry.hpp"

namespace koblab {

struct OptimizerBudget {
  int max_degree = 6;
  int restarts = 8;
  int max_iters = 2000;
  /// Extra Nelder-Mead rounds per stage, each restarted from the best point with a smaller simplex.
  int polish = 3;
  int boundary_angles = 256;
  /// Relative safety shrink applied to every optimized disc before certification.
  double margin = 1e-3;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

/// f(z) = sum_j coeffs[j] z^j with coeffs[0] = p and coeffs[1] a positive multiple of v.
struct PolyDiscCandidate {
  int degree = 1;
  std::vector<CVec> coeffs;
  int boundary_samples = 0;

  CVec eval(cplx z) const;
  /// r with f'(0) = v / r.
  double radius_for(const TVector& v) const { return v.euclid_norm() / norm(coeffs[1]); }
};

/// Affine disc p + z * v/|v| * dist(p) * (1 - margin); always admissible.
PolyDiscCandidate seed_affine_disc(const Domain& d, const CPoint& p, const TVector& v, double margin = 1e-3);

/// Checks f(closed disc) inside d with Lipschitz cell bounds. For convex domains
/// only the boundary circle is certified (the image lies in the convex hull of it).
bool certify_disc(const Domain& d, const PolyDiscCandidate& f, int initial_cells = 256);

struct KobEstimate {
  MetricValue metric;
  PolyDiscCandidate disc;
  /// Certified r after the stage of each degree 1..max_degree (infinity when a stage
  /// produced no certified disc). The reported value is the minimum of these and the seed.
  std::vector<double> stage_values;
  long objective_evaluations = 0;
};

/// Upper bound on F(p, v) from optimized polynomial discs.
KobEstimate estimate_kob_royden_detailed(const Domain& d, const CPoint& p, const TVector& v,
                                         const OptimizerBudget& budget);

MetricValue estimate_kob_royden(const Domain& d, const CPoint& p, const TVector& v, const OptimizerBudget& budget);

}  // namespace koblab
