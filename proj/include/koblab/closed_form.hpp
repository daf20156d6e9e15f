#pragma once

#include "koblab/geometry.hpp"

namespace koblab {

enum class Source { ClosedForm, EstimatedUpperBound };

const char* source_name(Source s);

/// A metric length with its normalization. scale 1 is the Kobayashi
/// normalization (unit disc density 1 at the origin), scale 2 the curvature -1
/// Poincare normalization.
struct MetricValue {
  double value = 0.0;
  double scale = 1.0;
  Source source = Source::ClosedForm;
};

/// scale / (1 - |p|^2) on the unit disc.
MetricValue poincare_disc_density(cplx p, double scale);

/// Canonical complete metric density on {1/sqrt(R) < |z| < sqrt(R)}.
MetricValue annulus_canonical_density(cplx p, double R, double scale);

/// Exact Kobayashi-Royden length on Disc, Ball, Polydisc; for Annulus(A, B) the
/// canonical density of the normalized annulus of modulus B/A.
MetricValue kob_royden_closed(const Domain& d, const CPoint& p, const TVector& v);

/// Same as kob_royden_closed, on raw spans and without dimension checks.
double kob_royden_closed_raw(const Domain& d, std::span<const cplx> p, std::span<const cplx> v);

/// Kobayashi distance on Disc, Ball and Polydisc.
double kob_distance_closed(const Domain& d, const CPoint& p, const CPoint& q);
double kob_distance_closed_raw(const Domain& d, std::span<const cplx> p, std::span<const cplx> q);

bool has_closed_distance(const Domain& d);

/// min over Euclidean unit vectors v of F(p, v), for closed-form kinds.
double closed_unit_minimum(const Domain& d, std::span<const cplx> p);

}  // namespace koblab
