#pragma once

#include <functional>
#include <optional>

#include "koblab/hausdorff.hpp"
#include "koblab/polymap.hpp"

namespace koblab {

/// Accumulated change of arg(z[coordinate] - about) over a closed curve, / 2 pi.
int winding_number(const SampledCurve& c, cplx about, std::size_t coordinate, double residue_tol = 0.1);

/// Same, for a closed loop given by its samples (the last sample connects to the first).
int winding_of_samples(const std::vector<cplx>& loop, cplx about, double residue_tol = 0.1);

using Projection = std::function<std::vector<double>(std::span<const cplx>)>;

/// Degree of the mesh map followed by radial projection to S^k. The default
/// projection takes the real parts of a C^{k+1} image, or (Re z, Im z) of a C^1
/// image when k = 1. The mesh must resolve the map: the rounding residue of the
/// summed angles must stay below residue_tol.
int sphere_degree(const SphereMeshMap& m, double residue_tol = 0.1);
int sphere_degree(const SphereMeshMap& m, const Projection& proj, double residue_tol = 0.1);
/// Degree of the nearest-point projection to the core of a tube (or annulus) after the map.
int sphere_degree(const Domain& d, const SphereMeshMap& m, double residue_tol = 0.1);

/// Checks f(source) inside target on interior and near-boundary samples; throws
/// DomainError naming a witness point otherwise.
void require_maps_into(const PolyMap& f, const Domain& source, const Domain& target, int samples,
                       std::uint64_t seed = 0);

/// Winding about 0 of the first coordinate of f(e^{it}, 0, ..., 0), after a sampled
/// containment check of f(source) in target.
int tube_map_degree(const PolyMap& f, const Domain& source, const Domain& target, int mesh_density = 256);

struct InvariantReport {
  double value = 0.0;
  double scale = 1.0;
  std::optional<double> lower_bound;
  std::optional<SampledCurve> curve;
  std::optional<SphereMeshMap> mesh;
  /// l1: max | |z| / sqrt(AB) - 1 | over the certificate; lk: radius factor of the best core sphere.
  double certificate_parameter = 0.0;
  long evaluations = 0;
  /// Per-candidate values (lk: one per tried core-sphere radius).
  std::vector<std::pair<double, double>> candidates;
};

struct L1Options {
  int samples = 256;
  /// Fourier coefficients of log r(theta): constant, 16 cosines, 15 sines.
  int coefficients = 32;
  int max_iters = 6000;
  int restarts = 3;
  std::uint64_t seed = 0;
};

/// Shortest winding-one loop in the canonical metric of A(A, B), searched over
/// radial profiles r(theta) = sqrt(AB) exp(h(theta)) starting from a random profile.
InvariantReport l1_annulus(double A, double B, double scale, const L1Options& opt = {});
inline InvariantReport l1_annulus(double R, double scale, const L1Options& opt = {}) {
  if (!(R > 1.0)) throw ConfigError("R must be > 1");
  return l1_annulus(1.0 / std::sqrt(R), std::sqrt(R), scale, opt);
}

struct LkOptions {
  /// k = 1: circle segments; k = 2: icosphere subdivision levels.
  int mesh_density = 0;
  bool shrink_search = true;
  MeasureOptions measure;
};

LkOptions default_lk_options(int k, double r);

/// Upper bound on l_k(T_r): Hausdorff-Kobayashi k-measure (scale 1) of the core
/// sphere S^k, and with shrink_search of radially rescaled copies, keeping the minimum.
InvariantReport lk_tube_upper(int k, double r, const LkOptions& opt);
inline InvariantReport lk_tube_upper(int k, double r) { return lk_tube_upper(k, r, default_lk_options(k, r)); }

/// Hausdorff-Kobayashi measure of a candidate with nonzero projected degree.
double vk_tube_upper(int k, double r, const SphereMeshMap& candidate, const MeasureOptions& opt);

enum class HomotopyVerdict { TrivialForced, NotForced };
const char* verdict_name(HomotopyVerdict v);

struct AnnulusVerdict {
  HomotopyVerdict verdict;
  int core_winding;
  double source_modulus;
  double target_modulus;
};

/// TrivialForced iff B1/A1 > B2/A2; cross-checked by the winding of f on the core circle.
AnnulusVerdict annulus_map_homotopy_verdict(const PolyMap& f, const Domain& source, const Domain& target,
                                            int samples = 4000);

}  // namespace koblab
