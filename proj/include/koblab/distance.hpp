#pragma once

#include "koblab/metric.hpp"

namespace koblab {

struct QuadratureOptions {
  /// Adaptive splitting stops when the relative change drops below this.
  double rel_tol = 1e-6;
  int max_depth = 12;
  /// Gauss-Legendre nodes per panel (1..8).
  int order = 8;
};

/// Quadrature options for estimated metrics, where each node costs an optimization.
QuadratureOptions light_quadrature();

/// Integral of F(z, b - a) dt along the straight segment z = a + t (b - a), with
/// Gauss-Legendre panels split until converged (a single panel when max_depth is 0). Throws DomainError when a
/// node leaves the domain.
double segment_length(const KobayashiMetric& m, std::span<const cplx> a, std::span<const cplx> b,
                      const QuadratureOptions& q = {});

enum class LengthMode { PartitionSum, Integrated };

struct GraphOptions {
  double resolution = 0.05;
  /// Cap on lattice nodes inside the search box.
  long max_nodes = 2'000'000;
  /// Pattern-search the interior vertices of the shortest lattice path (removes
  /// the direction bias of the lattice stencil).
  bool refine = true;
};

/// Shortest-path distance on a lattice graph. Lattice points live on the grid
/// anchored at the lower corner of the domain's bounding box and the endpoints are
/// put in a fixed order, so (p, q) and (q, p) give the same graph and value. Edge
/// weights are 8-point Gauss-Legendre metric lengths; the search box is the
/// bounding box of p and q padded by max(|p - q| / 2, 4 h).
struct GraphDistance {
  double value = 0.0;
  long nodes = 0;
  long relaxed_edges = 0;
};

GraphDistance kob_distance_graph(const KobayashiMetric& m, std::span<const cplx> p, std::span<const cplx> q,
                                 const GraphOptions& opt = {});
double kob_distance_graph(const Domain& d, const CPoint& p, const CPoint& q, double resolution);

/// Closed-form distance when available, otherwise the lattice graph distance.
double kob_distance(const KobayashiMetric& m, std::span<const cplx> p, std::span<const cplx> q,
                    const GraphOptions& opt = {});

/// Metric length of a sampled curve, multiplied by `scale`. PartitionSum sums
/// distances between consecutive samples (a lower bound on the length that grows
/// under refinement); Integrated sums segment integrals of the infinitesimal metric.
double curve_length_metric(const KobayashiMetric& m, const SampledCurve& c, LengthMode mode, double scale = 1.0,
                           const QuadratureOptions& q = {}, const GraphOptions& g = {});
double curve_length_metric(const Domain& d, const SampledCurve& c, LengthMode mode, double scale = 1.0);

}  // namespace koblab
