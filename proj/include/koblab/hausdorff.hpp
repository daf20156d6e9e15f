#pragma once

#include <string>

#include "koblab/distance.hpp"

namespace koblab {

enum class MetricKind { Euclidean, Kobayashi };

const char* metric_name(MetricKind k);

struct CoverPiece {
  double diameter;
  double contribution;
};

struct CoverEstimate {
  double epsilon = 0.0;
  int k = 1;
  std::vector<CoverPiece> pieces;
  double total = 0.0;
};

/// Sums of diameter^k over parameter-cell covers, one per epsilon. `value` is the
/// largest total over the schedule; it approaches the measure from the cover side.
struct MeasureReport {
  int k = 1;
  MetricKind metric = MetricKind::Euclidean;
  double scale = 1.0;
  std::vector<CoverEstimate> schedule;
  double value = 0.0;
};

struct MeasureOptions {
  double scale = 1.0;
  /// Maximum number of halvings (curves) or 1-to-4 splits (triangles) per cell.
  int max_depth = 12;
  OracleOptions oracle;
  QuadratureOptions quadrature;
};

/// Measure options matched to the domain: full budgets for closed-form metrics,
/// light ones otherwise.
MeasureOptions default_measure_options(const Domain& d, double scale = 1.0);

/// Distance used for piece diameters: Euclidean, or Kobayashi (closed form where
/// available, otherwise the integrated metric length of the straight segment).
class PieceMetric {
 public:
  PieceMetric(const Domain& d, MetricKind kind, const MeasureOptions& opt);
  double operator()(std::span<const cplx> a, std::span<const cplx> b) const;
  const KobayashiMetric& oracle() const { return oracle_; }

 private:
  MetricKind kind_;
  KobayashiMetric oracle_;
  QuadratureOptions quad_;
  double scale_;
};

MeasureReport hausdorff_k_measure(const Domain& d, const SampledCurve& c, int k, MetricKind metric,
                                  const std::vector<double>& epsilon_schedule, const MeasureOptions& opt);
MeasureReport hausdorff_k_measure(const Domain& d, const SphereMeshMap& mesh, int k, MetricKind metric,
                                  const std::vector<double>& epsilon_schedule, const MeasureOptions& opt);

/// Sum of (image diameter)^k over the mesh simplices at native resolution.
double sphere_map_measure_upper(const Domain& d, const SphereMeshMap& mesh, int k, MetricKind metric,
                                const MeasureOptions& opt);
double sphere_map_measure_upper(const PieceMetric& dist, const SphereMeshMap& mesh, int k);

/// Sum of squared Euclidean image-triangle diameters over the sum of their areas,
/// for a k = 2 mesh: the factor relating the uncalibrated 2-measure of this
/// triangulation to surface area when every triangle is flat.
double flat_calibration(const SphereMeshMap& mesh);

}  // namespace koblab
