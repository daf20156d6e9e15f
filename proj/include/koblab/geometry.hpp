#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <variant>
#include <vector>

#include "koblab/cvec.hpp"
#include "koblab/errors.hpp"

namespace koblab {

/// A point of C^n. Finite coordinates, n >= 1.
class CPoint {
 public:
  CPoint() = default;
  explicit CPoint(CVec coords);
  CPoint(std::initializer_list<cplx> coords) : CPoint(CVec(coords)) {}

  std::size_t dim() const { return coords_.size(); }
  const CVec& coords() const { return coords_; }
  cplx operator[](std::size_t i) const { return coords_[i]; }
  operator std::span<const cplx>() const { return coords_; }

 private:
  CVec coords_;
};

/// A tangent vector at some point of C^n; caches its Euclidean norm.
class TVector {
 public:
  TVector() = default;
  explicit TVector(CVec comps);
  TVector(std::initializer_list<cplx> comps) : TVector(CVec(comps)) {}

  std::size_t dim() const { return comps_.size(); }
  const CVec& comps() const { return comps_; }
  double euclid_norm() const { return norm_; }
  cplx operator[](std::size_t i) const { return comps_[i]; }
  operator std::span<const cplx>() const { return comps_; }

 private:
  CVec comps_;
  double norm_ = 0.0;
};

// Closed-form domain kinds -------------------------------------------------

struct Disc {
  cplx center;
  double radius;
};

struct Annulus {
  double inner;
  double outer;
};

struct Ball {
  int n;
  CVec center;
  double radius;
};

/// Polydisc centred at the origin.
struct Polydisc {
  std::vector<double> radii;
};

/// Tube of radius r around the unit circle {(e^{it}, 0, ..., 0)} in C^n.
struct TubeCircle {
  int n;
  double r;
};

/// Tube of radius r around the real unit sphere S^k in R^{k+1} inside C^{k+1}.
struct TubeSphere {
  int k;
  double r;
};

/// Axis-aligned box in the real coordinates (Re z_0, Im z_0, Re z_1, ...).
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// A domain given by a signed distance-like field: positive inside, 1-Lipschitz,
/// equal to the Euclidean distance to the complement at interior points.
struct Generic {
  int n;
  std::function<double(std::span<const cplx>)> field;
  Box bbox;
  bool convex = false;
  std::string label = "generic";
};

class Domain {
 public:
  using Kind = std::variant<Disc, Annulus, Ball, Polydisc, TubeCircle, TubeSphere, Generic>;

  static Domain disc(cplx center, double radius);
  static Domain annulus(double inner, double outer);
  static Domain ball(int n, CVec center, double radius);
  static Domain ball(int n, double radius) { return ball(n, CVec(static_cast<std::size_t>(n)), radius); }
  static Domain polydisc(std::vector<double> radii);
  static Domain tube_circle(int n, double r);
  static Domain tube_sphere(int k, double r);
  static Domain generic(Generic g);

  const Kind& kind() const { return kind_; }
  int dim() const;
  std::string kind_name() const;
  bool convex() const;
  bool has_closed_metric() const;
  Box bbox() const;

  /// Positive inside, negative outside; equals the distance to the complement
  /// inside for every closed-form kind.
  double signed_distance(std::span<const cplx> p) const;

  template <class T>
  const T* as() const {
    return std::get_if<T>(&kind_);
  }

 private:
  explicit Domain(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

void require_dim(const Domain& d, std::size_t n, const char* what);

bool membership(const Domain& d, const CPoint& p);
double dist_to_complement(const Domain& d, const CPoint& p);

/// Euclidean distance between `inner` and the complement of `outer`.
double domain_separation(const Domain& inner, const Domain& outer);

/// A domain W with cl(d) in W whose points lie within `amount` of d.
Domain inflate(const Domain& d, double amount);

/// Diameter of the domain (exact for closed forms, bounding box otherwise).
double domain_diameter(const Domain& d);

/// Deterministic pseudo-random interior points.
std::vector<CVec> sample_interior(const Domain& d, int count, std::uint64_t seed);

/// Points on the boundary of a closed-form domain (approximately, for Generic).
std::vector<CVec> sample_boundary(const Domain& d, int count, std::uint64_t seed);

/// Interior samples plus, for closed-form kinds, points pulled 1e-6 of the way
/// from boundary samples toward interior ones.
std::vector<CVec> probe_points(const Domain& d, int count, std::uint64_t seed);

/// Nearest point of the core manifold, as a real unit vector, for tubes and
/// annuli (the projection used to define degree).
std::vector<double> core_projection(const Domain& d, std::span<const cplx> p);

// Curves ---------------------------------------------------------------------

class SampledCurve {
 public:
  SampledCurve(std::vector<double> params, std::vector<CPoint> points, bool closed);

  /// Polyline with parameters 0, 1, ..., N.
  static SampledCurve polyline(std::vector<CPoint> points, bool closed);

  /// Circle `center + radius * e^{i t}` in coordinate `coord` of C^n, traversed `turns` times.
  static SampledCurve circle(std::size_t n, std::size_t coord, cplx center, double radius, int samples,
                             int turns = 1);

  const std::vector<double>& params() const { return params_; }
  const std::vector<CPoint>& points() const { return points_; }
  bool closed() const { return closed_; }
  std::size_t segments() const { return points_.size() - 1; }
  std::size_t dim() const { return points_.front().dim(); }

  /// Point at parameter t (piecewise linear).
  CVec at(double t) const;

 private:
  std::vector<double> params_;
  std::vector<CPoint> points_;
  bool closed_;
};

void require_inside(const Domain& d, const SampledCurve& c);

// Sphere meshes ------------------------------------------------------------

using Vec3 = std::array<double, 3>;
/// Vertex indices; for k = 1 only the first two entries are used and the third is -1.
using Simplex = std::array<int, 3>;

class SphereMeshMap {
 public:
  /// Validates the triangulation (manifold, oriented, Euler characteristic).
  SphereMeshMap(int k, std::vector<Vec3> vertices, std::vector<Simplex> simplices, std::vector<CPoint> images);

  int k() const { return k_; }
  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  const std::vector<CPoint>& images() const { return images_; }

  /// Same triangulation, new images.
  SphereMeshMap with_images(std::vector<CPoint> images) const;

 private:
  int k_;
  std::vector<Vec3> vertices_;
  std::vector<Simplex> simplices_;
  std::vector<CPoint> images_;
};

void require_inside(const Domain& d, const SphereMeshMap& m);

/// Base triangulation of S^k without images.
struct SphereTriangulation {
  int k;
  std::vector<Vec3> vertices;
  std::vector<Simplex> simplices;
};

/// Regular polygon on the unit circle (in the xy-plane), counter-clockwise.
SphereTriangulation circle_triangulation(int segments);

/// Icosahedron subdivided `levels` times, projected to the unit sphere, outward-oriented.
SphereTriangulation icosphere(int levels);

/// Builds a mesh map by evaluating `map` at every vertex.
SphereMeshMap make_sphere_map(const SphereTriangulation& base,
                              const std::function<CVec(const Vec3&)>& map);

/// Vertex x in R^{k+1} scaled by rho, as a real point of C^{k+1}.
SphereMeshMap real_sphere_map(const SphereTriangulation& base, double rho = 1.0);

}  // namespace koblab
