#include "koblab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace koblab {

namespace {

double tube_circle_core_distance(std::span<const cplx> p) {
  double s = std::abs(p[0]) - 1.0;
  double d2 = s * s;
  for (std::size_t i = 1; i < p.size(); ++i) d2 += std::norm(p[i]);
  return std::sqrt(d2);
}

double tube_sphere_core_distance(std::span<const cplx> p) {
  double x2 = 0.0, y2 = 0.0;
  for (const auto& z : p) {
    x2 += z.real() * z.real();
    y2 += z.imag() * z.imag();
  }
  double s = std::sqrt(x2) - 1.0;
  return std::sqrt(s * s + y2);
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string(what) + " must be positive and finite");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

CPoint::CPoint(CVec coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ConfigError("CPoint needs at least one coordinate");
  if (!all_finite(coords_)) throw ConfigError("CPoint coordinates must be finite");
}

TVector::TVector(CVec comps) : comps_(std::move(comps)) {
  if (comps_.empty()) throw ConfigError("TVector needs at least one component");
  if (!all_finite(comps_)) throw ConfigError("TVector components must be finite");
  norm_ = norm(comps_);
}

// Domain ----------------------------------------------------------------------

Domain Domain::disc(cplx center, double radius) {
  require_positive(radius, "disc radius");
  return Domain(Disc{center, radius});
}

Domain Domain::annulus(double inner, double outer) {
  require_positive(inner, "annulus inner radius");
  require_positive(outer, "annulus outer radius");
  if (!(outer > inner)) throw ConfigError("annulus needs outer > inner");
  return Domain(Annulus{inner, outer});
}

Domain Domain::ball(int n, CVec center, double radius) {
  if (n < 1) throw ConfigError("ball dimension must be >= 1");
  if (center.size() != static_cast<std::size_t>(n)) throw ConfigError("ball center has wrong dimension");
  require_positive(radius, "ball radius");
  return Domain(Ball{n, std::move(center), radius});
}

Domain Domain::polydisc(std::vector<double> radii) {
  if (radii.empty()) throw ConfigError("polydisc needs at least one radius");
  for (double r : radii) require_positive(r, "polydisc radius");
  return Domain(Polydisc{std::move(radii)});
}

Domain Domain::tube_circle(int n, double r) {
  if (n < 1) throw ConfigError("tube dimension must be >= 1");
  if (!(r > 0.0 && r < 1.0)) throw ConfigError("circle tube radius must lie in (0, 1)");
  return Domain(TubeCircle{n, r});
}

Domain Domain::tube_sphere(int k, double r) {
  if (k < 1) throw ConfigError("sphere tube needs k >= 1");
  if (!(r > 0.0 && r < 0.5)) throw ConfigError("sphere tube radius must lie in (0, 1/2)");
  return Domain(TubeSphere{k, r});
}

Domain Domain::generic(Generic g) {
  if (g.n < 1) throw ConfigError("generic domain dimension must be >= 1");
  if (!g.field) throw ConfigError("generic domain needs a distance field");
  if (g.bbox.lo.size() != static_cast<std::size_t>(2 * g.n) || g.bbox.hi.size() != g.bbox.lo.size())
    throw ConfigError("generic domain bounding box must have 2n real coordinates");
  return Domain(std::move(g));
}

int Domain::dim() const {
  return std::visit(overloaded{[](const Disc&) { return 1; }, [](const Annulus&) { return 1; },
                               [](const Ball& b) { return b.n; },
                               [](const Polydisc& p) { return static_cast<int>(p.radii.size()); },
                               [](const TubeCircle& t) { return t.n; }, [](const TubeSphere& t) { return t.k + 1; },
                               [](const Generic& g) { return g.n; }},
                    kind_);
}

std::string Domain::kind_name() const {
  return std::visit(overloaded{[](const Disc&) { return std::string("disc"); },
                               [](const Annulus&) { return std::string("annulus"); },
                               [](const Ball&) { return std::string("ball"); },
                               [](const Polydisc&) { return std::string("polydisc"); },
                               [](const TubeCircle&) { return std::string("tube_circle"); },
                               [](const TubeSphere&) { return std::string("tube_sphere"); },
                               [](const Generic& g) { return g.label; }},
                    kind_);
}

bool Domain::convex() const {
  if (const auto* g = as<Generic>()) return g->convex;
  return as<Disc>() || as<Ball>() || as<Polydisc>();
}

bool Domain::has_closed_metric() const { return as<Disc>() || as<Ball>() || as<Polydisc>() || as<Annulus>(); }

Box Domain::bbox() const {
  Box b;
  auto push = [&b](double lo, double hi) {
    b.lo.push_back(lo);
    b.hi.push_back(hi);
  };
  std::visit(overloaded{[&](const Disc& d) {
                          push(d.center.real() - d.radius, d.center.real() + d.radius);
                          push(d.center.imag() - d.radius, d.center.imag() + d.radius);
                        },
                        [&](const Annulus& a) {
                          push(-a.outer, a.outer);
                          push(-a.outer, a.outer);
                        },
                        [&](const Ball& ball) {
                          for (const auto& c : ball.center) {
                            push(c.real() - ball.radius, c.real() + ball.radius);
                            push(c.imag() - ball.radius, c.imag() + ball.radius);
                          }
                        },
                        [&](const Polydisc& p) {
                          for (double r : p.radii) {
                            push(-r, r);
                            push(-r, r);
                          }
                        },
                        [&](const TubeCircle& t) {
                          push(-1.0 - t.r, 1.0 + t.r);
                          push(-1.0 - t.r, 1.0 + t.r);
                          for (int i = 1; i < t.n; ++i) {
                            push(-t.r, t.r);
                            push(-t.r, t.r);
                          }
                        },
                        [&](const TubeSphere& t) {
                          for (int i = 0; i <= t.k; ++i) {
                            push(-1.0 - t.r, 1.0 + t.r);
                            push(-t.r, t.r);
                          }
                        },
                        [&](const Generic& g) { b = g.bbox; }},
             kind_);
  return b;
}

double Domain::signed_distance(std::span<const cplx> p) const {
  return std::visit(
      overloaded{[&](const Disc& d) { return d.radius - std::abs(p[0] - d.center); },
                 [&](const Annulus& a) {
                   double r = std::abs(p[0]);
                   return std::min(r - a.inner, a.outer - r);
                 },
                 [&](const Ball& b) { return b.radius - distance(p, b.center); },
                 [&](const Polydisc& pd) {
                   double s = std::numeric_limits<double>::infinity();
                   for (std::size_t i = 0; i < pd.radii.size(); ++i) s = std::min(s, pd.radii[i] - std::abs(p[i]));
                   return s;
                 },
                 [&](const TubeCircle& t) { return t.r - tube_circle_core_distance(p); },
                 [&](const TubeSphere& t) { return t.r - tube_sphere_core_distance(p); },
                 [&](const Generic& g) { return g.field(p); }},
      kind_);
}

void require_dim(const Domain& d, std::size_t n, const char* what) {
  if (static_cast<int>(n) != d.dim()) {
    std::ostringstream os;
    os << what << " has dimension " << n << " but the " << d.kind_name() << " domain lives in C^" << d.dim();
    throw ConfigError(os.str());
  }
}

bool membership(const Domain& d, const CPoint& p) {
  require_dim(d, p.dim(), "point");
  return d.signed_distance(p.coords()) > 0.0;
}

double dist_to_complement(const Domain& d, const CPoint& p) {
  require_dim(d, p.dim(), "point");
  double s = d.signed_distance(p.coords());
  if (!(s > 0.0)) throw DomainError("point not in domain");
  return s;
}

namespace {

// Conservative separation for a generic inner domain: lattice points near the
// inner boundary, each credited with the Lipschitz slack of its cell.
double lattice_separation(const Domain& inner, const Domain& outer) {
  const Box box = inner.bbox();
  const std::size_t dims = box.lo.size();
  const int n = inner.dim();
  constexpr double kMaxPoints = 2.0e6;
  int per_axis = 32;
  double previous = std::numeric_limits<double>::quiet_NaN();
  double best = std::numeric_limits<double>::quiet_NaN();
  for (int refinement = 0; refinement < 4; ++refinement) {
    if (std::pow(static_cast<double>(per_axis), static_cast<double>(dims)) > kMaxPoints) break;
    std::vector<double> h(dims);
    double diag2 = 0.0;
    for (std::size_t i = 0; i < dims; ++i) {
      h[i] = (box.hi[i] - box.lo[i]) / (per_axis - 1);
      diag2 += h[i] * h[i];
    }
    const double slack = 0.5 * std::sqrt(diag2);
    std::vector<int> idx(dims, 0);
    CVec z(static_cast<std::size_t>(n));
    double sep = std::numeric_limits<double>::infinity();
    bool any = false;
    while (true) {
      for (int c = 0; c < n; ++c)
        z[c] = {box.lo[2 * c] + h[2 * c] * idx[2 * c], box.lo[2 * c + 1] + h[2 * c + 1] * idx[2 * c + 1]};
      double s_in = inner.signed_distance(z);
      if (s_in > -slack && s_in < slack) {
        any = true;
        sep = std::min(sep, outer.signed_distance(z) - slack);
      }
      std::size_t a = 0;
      while (a < dims && ++idx[a] == per_axis) idx[a++] = 0;
      if (a == dims) break;
    }
    if (!any) break;
    best = sep;
    if (!std::isnan(previous) && std::abs(sep - previous) < 0.01 * std::abs(previous)) break;
    previous = sep;
    per_axis *= 2;
  }
  if (std::isnan(best)) throw BudgetError("could not sample the inner domain boundary");
  return best;
}

}  // namespace

double domain_separation(const Domain& inner, const Domain& outer) {
  if (inner.dim() != outer.dim()) throw ConfigError("domain_separation: dimension mismatch");
  double sep = std::numeric_limits<double>::quiet_NaN();
  if (const auto* a = inner.as<Disc>(); a && outer.as<Disc>()) {
    const auto* b = outer.as<Disc>();
    sep = b->radius - (std::abs(a->center - b->center) + a->radius);
  } else if (const auto* a = inner.as<Ball>(); a && outer.as<Ball>()) {
    const auto* b = outer.as<Ball>();
    sep = b->radius - (distance(a->center, b->center) + a->radius);
  } else if (const auto* a = inner.as<Annulus>(); a && outer.as<Annulus>()) {
    const auto* b = outer.as<Annulus>();
    sep = std::min(a->inner - b->inner, b->outer - a->outer);
  } else if (const auto* a = inner.as<Polydisc>(); a && outer.as<Polydisc>()) {
    const auto* b = outer.as<Polydisc>();
    sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a->radii.size(); ++i) sep = std::min(sep, b->radii[i] - a->radii[i]);
  } else if (const auto* a = inner.as<TubeCircle>(); a && outer.as<TubeCircle>()) {
    sep = outer.as<TubeCircle>()->r - a->r;
  } else if (const auto* a = inner.as<TubeSphere>(); a && outer.as<TubeSphere>()) {
    sep = outer.as<TubeSphere>()->r - a->r;
  } else if (inner.as<Generic>()) {
    sep = lattice_separation(inner, outer);
  } else {
    sep = std::numeric_limits<double>::infinity();
    for (const auto& b : sample_boundary(inner, 4096, 7)) sep = std::min(sep, outer.signed_distance(b));
  }
  if (!(sep > 0.0)) throw DomainError("not relatively compact");
  return sep;
}

Domain inflate(const Domain& d, double amount) {
  if (!(amount > 0.0)) throw ConfigError("inflation amount must be positive");
  return std::visit(
      overloaded{[&](const Disc& x) { return Domain::disc(x.center, x.radius + amount); },
                 [&](const Annulus& x) { return Domain::annulus(std::max(x.inner - amount, 0.5 * x.inner), x.outer + amount); },
                 [&](const Ball& x) { return Domain::ball(x.n, x.center, x.radius + amount); },
                 [&](const Polydisc& x) {
                   auto radii = x.radii;
                   const double step = amount / std::sqrt(static_cast<double>(radii.size()));
                   for (double& r : radii) r += step;
                   return Domain::polydisc(std::move(radii));
                 },
                 [&](const TubeCircle& x) { return Domain::tube_circle(x.n, std::min(x.r + amount, 0.5 * (x.r + 1.0))); },
                 [&](const TubeSphere& x) { return Domain::tube_sphere(x.k, std::min(x.r + amount, 0.5 * (x.r + 0.5))); },
                 [&](const Generic& x) {
                   Generic g = x;
                   auto field = x.field;
                   g.field = [field, amount](std::span<const cplx> p) { return field(p) + amount; };
                   for (auto& lo : g.bbox.lo) lo -= amount;
                   for (auto& hi : g.bbox.hi) hi += amount;
                   g.label = x.label + "+inflated";
                   return Domain::generic(std::move(g));
                 }},
      d.kind());
}

double domain_diameter(const Domain& d) {
  return std::visit(overloaded{[](const Disc& x) { return 2.0 * x.radius; },
                               [](const Annulus& x) { return 2.0 * x.outer; },
                               [](const Ball& x) { return 2.0 * x.radius; },
                               [](const Polydisc& x) {
                                 double s = 0.0;
                                 for (double r : x.radii) s += r * r;
                                 return 2.0 * std::sqrt(s);
                               },
                               [](const TubeCircle& x) { return 2.0 * std::hypot(1.0 + x.r, x.r); },
                               [](const TubeSphere& x) { return 2.0 * std::hypot(1.0 + x.r, x.r); },
                               [](const Generic& g) {
                                 double s = 0.0;
                                 for (std::size_t i = 0; i < g.bbox.lo.size(); ++i)
                                   s += (g.bbox.hi[i] - g.bbox.lo[i]) * (g.bbox.hi[i] - g.bbox.lo[i]);
                                 return std::sqrt(s);
                               }},
                    d.kind());
}

std::vector<CVec> sample_interior(const Domain& d, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Box box = d.bbox();
  const int n = d.dim();
  std::vector<std::uniform_real_distribution<double>> axes;
  for (std::size_t i = 0; i < box.lo.size(); ++i) axes.emplace_back(box.lo[i], box.hi[i]);
  std::vector<CVec> out;
  out.reserve(static_cast<std::size_t>(count));
  const long max_attempts = 2000L * count + 10000;
  CVec z(static_cast<std::size_t>(n));
  for (long attempt = 0; attempt < max_attempts && static_cast<int>(out.size()) < count; ++attempt) {
    for (int c = 0; c < n; ++c) z[c] = {axes[2 * c](rng), axes[2 * c + 1](rng)};
    if (d.signed_distance(z) > 0.0) out.push_back(z);
  }
  if (static_cast<int>(out.size()) < count) throw BudgetError("interior sampling exhausted its attempt budget");
  return out;
}

std::vector<CVec> sample_boundary(const Domain& d, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<CVec> out;
  out.reserve(static_cast<std::size_t>(count));
  auto unit_gaussian = [&](std::size_t real_dims) {
    std::vector<double> g(real_dims);
    double s = 0.0;
    for (auto& x : g) {
      x = gauss(rng);
      s += x * x;
    }
    s = std::sqrt(s);
    for (auto& x : g) x /= s;
    return g;
  };
  for (int i = 0; i < count; ++i) {
    const double t = two_pi * i / count;
    std::visit(overloaded{[&](const Disc& x) { out.push_back({x.center + std::polar(x.radius, t)}); },
                          [&](const Annulus& x) {
                            out.push_back({std::polar(i % 2 == 0 ? x.inner : x.outer, t)});
                          },
                          [&](const Ball& x) {
                            auto g = unit_gaussian(2 * static_cast<std::size_t>(x.n));
                            CVec z(x.center);
                            for (int c = 0; c < x.n; ++c) z[c] += x.radius * cplx(g[2 * c], g[2 * c + 1]);
                            out.push_back(std::move(z));
                          },
                          [&](const Polydisc& x) {
                            CVec z(x.radii.size());
                            for (std::size_t c = 0; c < z.size(); ++c)
                              z[c] = std::polar(x.radii[c] * std::sqrt(unif(rng)), two_pi * unif(rng));
                            const std::size_t face = static_cast<std::size_t>(i) % z.size();
                            z[face] = std::polar(x.radii[face], t);
                            out.push_back(std::move(z));
                          },
                          [&](const TubeCircle& x) {
                            const double th = two_pi * unif(rng);
                            // normal space: radial direction in z_1 plus all of C^{n-1}
                            auto g = unit_gaussian(1 + 2 * static_cast<std::size_t>(x.n - 1));
                            CVec z(static_cast<std::size_t>(x.n));
                            z[0] = std::polar(1.0 + x.r * g[0], th);
                            for (int c = 1; c < x.n; ++c) z[c] = x.r * cplx(g[2 * c - 1], g[2 * c]);
                            out.push_back(std::move(z));
                          },
                          [&](const TubeSphere& x) {
                            auto s = unit_gaussian(static_cast<std::size_t>(x.k + 1));
                            // normal space: real radial direction plus the whole imaginary R^{k+1}
                            auto g = unit_gaussian(static_cast<std::size_t>(x.k + 2));
                            CVec z(static_cast<std::size_t>(x.k + 1));
                            for (int c = 0; c <= x.k; ++c) z[c] = {s[c] * (1.0 + x.r * g[0]), x.r * g[c + 1]};
                            out.push_back(std::move(z));
                          },
                          [&](const Generic&) {
                            throw ConfigError("boundary sampling is not available for generic domains");
                          }},
               d.kind());
  }
  return out;
}

std::vector<double> core_projection(const Domain& d, std::span<const cplx> p) {
  if (d.as<TubeSphere>()) {
    std::vector<double> x(p.size());
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      x[i] = p[i].real();
      s += x[i] * x[i];
    }
    s = std::sqrt(s);
    if (s == 0.0) throw DomainError("projection undefined");
    for (auto& xi : x) xi /= s;
    return x;
  }
  if (d.as<TubeCircle>() || d.as<Annulus>() || d.as<Disc>()) {
    const double a = std::abs(p[0]);
    if (a == 0.0) throw DomainError("projection undefined");
    return {p[0].real() / a, p[0].imag() / a};
  }
  throw ConfigError("no core projection for a " + d.kind_name() + " domain");
}

// Curves -------------------------------------------------------------------------

SampledCurve::SampledCurve(std::vector<double> params, std::vector<CPoint> points, bool closed)
    : params_(std::move(params)), points_(std::move(points)), closed_(closed) {
  if (points_.size() < 2) throw ConfigError("a sampled curve needs at least two samples");
  if (params_.size() != points_.size()) throw ConfigError("curve parameters and points differ in length");
  for (std::size_t i = 1; i < params_.size(); ++i)
    if (!(params_[i] > params_[i - 1])) throw ConfigError("curve parameters must be strictly increasing");
  for (const auto& p : points_)
    if (p.dim() != points_.front().dim()) throw ConfigError("curve points have mixed dimensions");
  if (closed_ && distance(points_.front().coords(), points_.back().coords()) > 1e-12)
    throw ConfigError("closed curve must end where it starts");
}

SampledCurve SampledCurve::polyline(std::vector<CPoint> points, bool closed) {
  std::vector<double> params(points.size());
  for (std::size_t i = 0; i < params.size(); ++i) params[i] = static_cast<double>(i);
  return SampledCurve(std::move(params), std::move(points), closed);
}

SampledCurve SampledCurve::circle(std::size_t n, std::size_t coord, cplx center, double radius, int samples,
                                  int turns) {
  if (samples < 3) throw ConfigError("a circle needs at least three samples");
  if (coord >= n) throw ConfigError("circle coordinate out of range");
  std::vector<double> params;
  std::vector<CPoint> points;
  for (int j = 0; j <= samples; ++j) {
    const double t = 2.0 * std::numbers::pi * turns * j / samples;
    CVec z(n);
    z[coord] = center + std::polar(radius, j == samples ? 0.0 : t);
    params.push_back(t);
    points.emplace_back(std::move(z));
  }
  return SampledCurve(std::move(params), std::move(points), true);
}

CVec SampledCurve::at(double t) const {
  if (t <= params_.front()) return points_.front().coords();
  if (t >= params_.back()) return points_.back().coords();
  auto it = std::upper_bound(params_.begin(), params_.end(), t);
  const std::size_t j = static_cast<std::size_t>(it - params_.begin());
  const double w = (t - params_[j - 1]) / (params_[j] - params_[j - 1]);
  return lerp(points_[j - 1].coords(), points_[j].coords(), w);
}

void require_inside(const Domain& d, const SampledCurve& c) {
  require_dim(d, c.dim(), "curve");
  for (std::size_t i = 0; i < c.points().size(); ++i)
    if (!(d.signed_distance(c.points()[i].coords()) > 0.0))
      throw DomainError("curve exits the domain at sample " + std::to_string(i));
}

// Sphere meshes ------------------------------------------------------------------

SphereMeshMap::SphereMeshMap(int k, std::vector<Vec3> vertices, std::vector<Simplex> simplices,
                             std::vector<CPoint> images)
    : k_(k), vertices_(std::move(vertices)), simplices_(std::move(simplices)), images_(std::move(images)) {
  if (k_ != 1 && k_ != 2) throw ConfigError("sphere meshes support k = 1 or k = 2");
  const int nv = static_cast<int>(vertices_.size());
  if (images_.size() != vertices_.size()) throw ConfigError("need one image per mesh vertex");
  if (images_.empty()) throw ConfigError("empty sphere mesh");
  for (const auto& im : images_)
    if (im.dim() != images_.front().dim()) throw ConfigError("mesh images have mixed dimensions");
  for (const auto& v : vertices_) {
    const double r = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (std::abs(r - 1.0) > 1e-9) throw ConfigError("mesh vertex is not on the unit sphere");
    if (k_ == 1 && v[2] != 0.0) throw ConfigError("circle mesh vertex leaves the xy-plane");
  }
  const int arity = k_ + 1;
  std::vector<int> usage(static_cast<std::size_t>(nv), 0);
  for (const auto& s : simplices_) {
    for (int a = 0; a < arity; ++a) {
      if (s[a] < 0 || s[a] >= nv) throw ConfigError("simplex references a missing vertex");
      for (int b = 0; b < a; ++b)
        if (s[a] == s[b]) throw ConfigError("degenerate simplex with repeated vertex");
      ++usage[static_cast<std::size_t>(s[a])];
    }
  }
  for (int u : usage)
    if (u == 0) throw ConfigError("non-manifold triangulation: isolated vertex");

  if (k_ == 1) {
    std::vector<int> next(static_cast<std::size_t>(nv), -1), heads(static_cast<std::size_t>(nv), 0);
    for (const auto& s : simplices_) {
      if (next[static_cast<std::size_t>(s[0])] != -1)
        throw ConfigError("non-manifold triangulation: vertex starts two edges");
      next[static_cast<std::size_t>(s[0])] = s[1];
      ++heads[static_cast<std::size_t>(s[1])];
    }
    for (int v = 0; v < nv; ++v)
      if (next[static_cast<std::size_t>(v)] == -1 || heads[static_cast<std::size_t>(v)] != 1)
        throw ConfigError("non-manifold triangulation: every vertex needs exactly two incident edges");
    if (nv - static_cast<int>(simplices_.size()) != 0) throw ConfigError("Euler characteristic of S^1 must be 0");
    int steps = 0;
    int v = 0;
    do {
      v = next[static_cast<std::size_t>(v)];
      ++steps;
    } while (v != 0 && steps <= nv);
    if (steps != nv) throw ConfigError("circle mesh is not a single loop");
    return;
  }

  std::map<std::pair<int, int>, int> directed;
  for (const auto& s : simplices_)
    for (int a = 0; a < 3; ++a) ++directed[{s[a], s[(a + 1) % 3]}];
  for (const auto& [edge, count] : directed) {
    if (count != 1) throw ConfigError("non-manifold or inconsistently oriented triangulation");
    auto rev = directed.find({edge.second, edge.first});
    if (rev == directed.end() || rev->second != 1)
      throw ConfigError("non-manifold triangulation: edge not shared by exactly two triangles");
  }
  const int edges = static_cast<int>(directed.size()) / 2;
  const int euler = nv - edges + static_cast<int>(simplices_.size());
  if (euler != 2) throw ConfigError("Euler characteristic of S^2 must be 2, got " + std::to_string(euler));
}

SphereMeshMap SphereMeshMap::with_images(std::vector<CPoint> images) const {
  return SphereMeshMap(k_, vertices_, simplices_, std::move(images));
}

void require_inside(const Domain& d, const SphereMeshMap& m) {
  require_dim(d, m.images().front().dim(), "mesh image");
  for (std::size_t i = 0; i < m.images().size(); ++i)
    if (!(d.signed_distance(m.images()[i].coords()) > 0.0))
      throw DomainError("mesh image leaves the domain at vertex " + std::to_string(i));
}

SphereTriangulation circle_triangulation(int segments) {
  if (segments < 3) throw ConfigError("a circle mesh needs at least three segments");
  SphereTriangulation t{1, {}, {}};
  for (int i = 0; i < segments; ++i) {
    const double a = 2.0 * std::numbers::pi * i / segments;
    t.vertices.push_back({std::cos(a), std::sin(a), 0.0});
    t.simplices.push_back({i, (i + 1) % segments, -1});
  }
  return t;
}

SphereTriangulation icosphere(int levels) {
  if (levels < 0) throw ConfigError("icosphere level must be nonnegative");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
                         {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  auto normalize = [](Vec3 p) {
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    return Vec3{p[0] / r, p[1] / r, p[2] / r};
  };
  for (auto& p : v) p = normalize(p);
  std::vector<Simplex> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                            {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                            {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < levels; ++level) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      const Vec3 m{(v[a][0] + v[b][0]) / 2, (v[a][1] + v[b][1]) / 2, (v[a][2] + v[b][2]) / 2};
      v.push_back(normalize(m));
      const int id = static_cast<int>(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<Simplex> next;
    next.reserve(f.size() * 4);
    for (const auto& t : f) {
      const int a = midpoint(t[0], t[1]), b = midpoint(t[1], t[2]), c = midpoint(t[2], t[0]);
      next.push_back({t[0], a, c});
      next.push_back({t[1], b, a});
      next.push_back({t[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  return {2, std::move(v), std::move(f)};
}

SphereMeshMap make_sphere_map(const SphereTriangulation& base, const std::function<CVec(const Vec3&)>& map) {
  std::vector<CPoint> images;
  images.reserve(base.vertices.size());
  for (const auto& v : base.vertices) images.emplace_back(map(v));
  return SphereMeshMap(base.k, base.vertices, base.simplices, std::move(images));
}

SphereMeshMap real_sphere_map(const SphereTriangulation& base, double rho) {
  return make_sphere_map(base, [&](const Vec3& x) {
    CVec z(static_cast<std::size_t>(base.k + 1));
    for (int i = 0; i <= base.k; ++i) z[i] = rho * x[i];
    return z;
  });
}

std::vector<CVec> probe_points(const Domain& d, int count, std::uint64_t seed) {
  std::vector<CVec> pts = sample_interior(d, count, seed);
  if (d.as<Generic>()) return pts;
  const auto inner = pts;
  const auto bnd = sample_boundary(d, count, seed + 1);
  for (std::size_t i = 0; i < bnd.size(); ++i) {
    CVec q = lerp(bnd[i], inner[i % inner.size()], 1e-6);
    if (d.signed_distance(q) > 0.0) pts.push_back(std::move(q));
  }
  return pts;
}

}  // namespace koblab
