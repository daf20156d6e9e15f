#pragma once

// Shared generators and independent reference values for the unit tests.

#include <complex>
#include <random>
#include <vector>

#include "koblab/cvec.hpp"

namespace koblab::testing {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

/// Uniform point of the open disc |z - c| < r.
inline cplx random_in_disc(std::mt19937_64& g, cplx c = 0.0, double r = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rad = r * std::sqrt(u(g));
  return c + std::polar(rad, 2.0 * M_PI * u(g));
}

/// Uniform point of the ball ||z|| < r in C^n.
inline CVec random_in_ball(std::mt19937_64& g, int n, double r = 1.0) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CVec z(static_cast<std::size_t>(n));
  for (auto& x : z) x = {nd(g), nd(g)};
  const double s = r * std::pow(u(g), 1.0 / (2 * n)) / norm(z);
  for (auto& x : z) x *= s;
  return z;
}

inline CVec random_direction(std::mt19937_64& g, int n) {
  std::normal_distribution<double> nd;
  CVec v(static_cast<std::size_t>(n));
  for (auto& x : v) x = {nd(g), nd(g)};
  const double s = norm(v);
  for (auto& x : v) x /= s;
  return v;
}

/// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

/// Poincare distance in the disc D(c, r) (curvature -4 normalization).
inline double disc_distance(cplx c, double r, cplx a, cplx b) {
  const cplx wa = (a - c) / r, wb = (b - c) / r;
  return std::atanh(std::abs((wa - wb) / (1.0 - std::conj(wa) * wb)));
}

/// Ball metric and distance via the complex line through the data: the slice of
/// the unit ball by a complex line is a disc, and that slice is a holomorphic
/// retract of the ball, so the ball quantities equal the slice-disc quantities.
struct Slice {
  cplx centre;  // in the line coordinate zeta of p + zeta * u
  double radius;
};

inline Slice ball_slice(std::span<const cplx> p, std::span<const cplx> u) {
  const cplx pu = hdot(p, u);  // sum p conj(u)
  const double rho2 = 1.0 - norm2(p) + std::norm(pu);
  return {-pu, std::sqrt(rho2)};
}

inline double ball_metric_by_slice(std::span<const cplx> p, std::span<const cplx> v) {
  const double nv = norm(v);
  CVec u(v.begin(), v.end());
  for (auto& x : u) x /= nv;
  const Slice s = ball_slice(p, u);
  return nv * s.radius / (s.radius * s.radius - std::norm(s.centre));
}

inline double ball_distance_by_slice(std::span<const cplx> a, std::span<const cplx> b) {
  const CVec d = sub(b, a);
  const double nd = norm(d);
  if (nd == 0.0) return 0.0;
  CVec u = d;
  for (auto& x : u) x /= nd;
  const Slice s = ball_slice(a, u);
  return disc_distance(s.centre, s.radius, 0.0, nd);
}

}  // namespace koblab::testing
