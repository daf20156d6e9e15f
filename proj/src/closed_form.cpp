#include "koblab/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace koblab {

const char* source_name(Source s) {
  return s == Source::ClosedForm ? "closed_form" : "estimated_upper_bound";
}

MetricValue poincare_disc_density(cplx p, double scale) {
  if (!(scale > 0.0)) throw ConfigError("scale must be positive");
  const double a = std::norm(p);
  if (!(a < 1.0)) throw DomainError("point not in disc");
  return {scale / (1.0 - a), scale, Source::ClosedForm};
}

MetricValue annulus_canonical_density(cplx p, double R, double scale) {
  if (!(R > 1.0) || !std::isfinite(R)) throw ConfigError("annulus modulus R must be > 1");
  if (!(scale > 0.0)) throw ConfigError("scale must be positive");
  const double r = std::abs(p);
  const double lnR = std::log(R);
  const double c = std::numbers::pi / (2.0 * lnR);
  const double lr = std::log(r);
  if (!(std::abs(lr) < 0.5 * lnR)) throw DomainError("point not in annulus");
  return {0.5 * scale * c / (r * std::cos(c * lr)), scale, Source::ClosedForm};
}

namespace {

double disc_density(cplx c, double R, cplx p) { return R / (R * R - std::norm(p - c)); }

}  // namespace

double kob_royden_closed_raw(const Domain& d, std::span<const cplx> p, std::span<const cplx> v) {
  if (const auto* x = d.as<Disc>()) return std::abs(v[0]) * disc_density(x->center, x->radius, p[0]);
  if (const auto* x = d.as<Ball>()) {
    CVec w(p.size()), u(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      w[i] = (p[i] - x->center[i]) / x->radius;
      u[i] = v[i] / x->radius;
    }
    const double s = 1.0 - norm2(w);
    return std::sqrt(norm2(u) / s + std::norm(hdot(u, w)) / (s * s));
  }
  if (const auto* x = d.as<Polydisc>()) {
    double best = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      best = std::max(best, std::abs(v[i]) * disc_density(0.0, x->radii[i], p[i]));
    return best;
  }
  if (const auto* x = d.as<Annulus>()) {
    const double k = std::sqrt(x->inner * x->outer);
    return annulus_canonical_density(p[0] / k, x->outer / x->inner, 1.0).value * std::abs(v[0]) / k;
  }
  throw ConfigError("no closed form for a " + d.kind_name() + " domain");
}

MetricValue kob_royden_closed(const Domain& d, const CPoint& p, const TVector& v) {
  require_dim(d, p.dim(), "point");
  require_dim(d, v.dim(), "vector");
  if (!d.has_closed_metric()) throw ConfigError("no closed form for a " + d.kind_name() + " domain");
  if (!(d.signed_distance(p.coords()) > 0.0)) throw DomainError("point not in domain");
  return {kob_royden_closed_raw(d, p.coords(), v.comps()), 1.0, Source::ClosedForm};
}

bool has_closed_distance(const Domain& d) { return d.as<Disc>() || d.as<Ball>() || d.as<Polydisc>(); }

namespace {

double disc_distance(cplx a, cplx b) {
  const double t = std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
  return std::atanh(std::min(t, 1.0));
}

}  // namespace

double kob_distance_closed_raw(const Domain& d, std::span<const cplx> p, std::span<const cplx> q) {
  if (const auto* x = d.as<Disc>())
    return disc_distance((p[0] - x->center) / x->radius, (q[0] - x->center) / x->radius);
  if (const auto* x = d.as<Ball>()) {
    CVec a(p.size()), b(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      a[i] = (p[i] - x->center[i]) / x->radius;
      b[i] = (q[i] - x->center[i]) / x->radius;
    }
    // 1 - |phi_a(b)|^2 = (1-|a|^2)(1-|b|^2)/|1-<b,a>|^2
    const double den = std::norm(1.0 - hdot(b, a));
    const double t2 = 1.0 - (1.0 - norm2(a)) * (1.0 - norm2(b)) / den;
    if (t2 <= 0.0) return 0.0;
    // for close points use the difference form to avoid cancellation
    if (t2 < 1e-6) {
      const CVec diff = sub(a, b);
      const double num = norm2(diff) * (1.0 - norm2(a)) + std::norm(hdot(diff, a));
      return std::atanh(std::sqrt(std::max(0.0, num / den)));
    }
    return std::atanh(std::min(std::sqrt(t2), 1.0));
  }
  if (const auto* x = d.as<Polydisc>()) {
    double best = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      best = std::max(best, disc_distance(p[i] / x->radii[i], q[i] / x->radii[i]));
    return best;
  }
  throw ConfigError("no closed form for a " + d.kind_name() + " domain");
}

double kob_distance_closed(const Domain& d, const CPoint& p, const CPoint& q) {
  require_dim(d, p.dim(), "point");
  require_dim(d, q.dim(), "point");
  if (!has_closed_distance(d)) throw ConfigError("no closed form for a " + d.kind_name() + " domain");
  if (!(d.signed_distance(p.coords()) > 0.0) || !(d.signed_distance(q.coords()) > 0.0))
    throw DomainError("point not in domain");
  return kob_distance_closed_raw(d, p.coords(), q.coords());
}

double closed_unit_minimum(const Domain& d, std::span<const cplx> p) {
  if (const auto* x = d.as<Disc>()) return disc_density(x->center, x->radius, p[0]);
  if (const auto* x = d.as<Ball>()) {
    double w2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) w2 += std::norm((p[i] - x->center[i]) / x->radius);
    // minimized by v orthogonal to p - c
    return 1.0 / (x->radius * std::sqrt(1.0 - w2));
  }
  if (const auto* x = d.as<Polydisc>()) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double c = disc_density(0.0, x->radii[i], p[i]);
      s += 1.0 / (c * c);
    }
    return 1.0 / std::sqrt(s);
  }
  if (d.as<Annulus>()) {
    const CVec one{cplx(1.0, 0.0)};
    return kob_royden_closed_raw(d, p, one);
  }
  throw ConfigError("no closed form for a " + d.kind_name() + " domain");
}

}  // namespace koblab
