#include "koblab/invariants.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace koblab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int round_turns(double turns, double residue_tol, const char* what) {
  const double k = std::round(turns);
  if (std::abs(turns - k) >= residue_tol) throw BudgetError(what);
  return static_cast<int>(k);
}

}  // namespace

int winding_of_samples(const std::vector<cplx>& loop, cplx about, double residue_tol) {
  if (loop.size() < 3) throw ConfigError("a loop needs at least three samples");
  double total = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const cplx a = loop[i] - about, b = loop[(i + 1) % loop.size()] - about;
    if (a == 0.0 || b == 0.0) throw DomainError("curve passes through the winding centre");
    const double step = std::arg(b / a);
    // steps near a half turn leave the direction of travel ambiguous
    if (std::abs(step) > 0.5 * std::numbers::pi) throw BudgetError("curve too coarse for winding");
    total += step;
  }
  return round_turns(total / kTwoPi, residue_tol, "curve too coarse for winding");
}

int winding_number(const SampledCurve& c, cplx about, std::size_t coordinate, double residue_tol) {
  if (!c.closed()) throw ConfigError("winding number needs a closed curve");
  if (coordinate >= c.dim()) throw ConfigError("winding coordinate out of range");
  std::vector<cplx> loop;
  for (std::size_t i = 0; i + 1 < c.points().size(); ++i) loop.push_back(c.points()[i][coordinate]);
  return winding_of_samples(loop, about, residue_tol);
}

namespace {

using R3 = std::array<double, 3>;

R3 to_unit3(const std::vector<double>& x, int k) {
  if (static_cast<int>(x.size()) != k + 1) throw ConfigError("projection has the wrong dimension");
  R3 u{0.0, 0.0, 0.0};
  double s = 0.0;
  for (int i = 0; i <= k; ++i) {
    u[i] = x[i];
    s += x[i] * x[i];
  }
  s = std::sqrt(s);
  if (s == 0.0) throw DomainError("projection undefined");
  for (auto& c : u) c /= s;
  return u;
}

double dot3(const R3& a, const R3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

int sphere_degree(const SphereMeshMap& m, const Projection& proj, double residue_tol) {
  const int k = m.k();
  std::vector<R3> u;
  u.reserve(m.images().size());
  for (const auto& im : m.images()) u.push_back(to_unit3(proj(im.coords()), k));
  double total = 0.0;
  for (const auto& s : m.simplices()) {
    if (k == 1) {
      const R3 &a = u[s[0]], &b = u[s[1]];
      const double step = std::atan2(a[0] * b[1] - a[1] * b[0], dot3(a, b));
      if (std::abs(step) > 0.5 * std::numbers::pi) throw BudgetError("mesh too coarse");
      total += step;
      continue;
    }
    const R3 &a = u[s[0]], &b = u[s[1]], &c = u[s[2]];
    if (dot3(a, b) < 0.0 || dot3(b, c) < 0.0 || dot3(c, a) < 0.0) throw BudgetError("mesh too coarse");
    // signed solid angle of the spherical triangle (Van Oosterom and Strackee)
    const R3 bxc{b[1] * c[2] - b[2] * c[1], b[2] * c[0] - b[0] * c[2], b[0] * c[1] - b[1] * c[0]};
    const double num = dot3(a, bxc);
    const double den = 1.0 + dot3(a, b) + dot3(b, c) + dot3(c, a);
    total += 2.0 * std::atan2(num, den);
  }
  const double turns = k == 1 ? total / kTwoPi : total / (2.0 * kTwoPi);
  return round_turns(turns, residue_tol, "mesh too coarse");
}

int sphere_degree(const SphereMeshMap& m, double residue_tol) {
  const int k = m.k();
  const std::size_t n = m.images().front().dim();
  Projection proj;
  if (n == static_cast<std::size_t>(k + 1)) {
    proj = [](std::span<const cplx> z) {
      std::vector<double> x(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) x[i] = z[i].real();
      return x;
    };
  } else if (k == 1 && n == 1) {
    proj = [](std::span<const cplx> z) { return std::vector<double>{z[0].real(), z[0].imag()}; };
  } else {
    throw ConfigError("no default projection for this image dimension; pass a domain or a projection");
  }
  return sphere_degree(m, proj, residue_tol);
}

int sphere_degree(const Domain& d, const SphereMeshMap& m, double residue_tol) {
  require_inside(d, m);
  return sphere_degree(m, [&d](std::span<const cplx> z) { return core_projection(d, z); }, residue_tol);
}

void require_maps_into(const PolyMap& f, const Domain& source, const Domain& target, int samples,
                       std::uint64_t seed) {
  if (f.n_in() != source.dim()) throw ConfigError("map input dimension differs from the source domain");
  if (f.n_out() != target.dim()) throw ConfigError("map output dimension differs from the target domain");
  const std::vector<CVec> pts = probe_points(source, samples, seed);
  for (const auto& p : pts) {
    const CVec fp = f(p);
    if (!(target.signed_distance(fp) > 0.0))
      throw DomainError("map leaves the target: source point " + format_point(p) + " maps to " + format_point(fp));
  }
}

int tube_map_degree(const PolyMap& f, const Domain& source, const Domain& target, int mesh_density) {
  if (!source.as<TubeCircle>() || !target.as<TubeCircle>()) throw ConfigError("tube_map_degree needs circle tubes");
  if (mesh_density < 8) throw ConfigError("mesh density must be >= 8");
  require_maps_into(f, source, target, std::max(2000, mesh_density));
  for (int samples = mesh_density;; samples *= 2) {
    std::vector<cplx> loop;
    CVec z(static_cast<std::size_t>(source.dim()));
    for (int i = 0; i < samples; ++i) {
      z[0] = std::polar(1.0, kTwoPi * i / samples);
      loop.push_back(f(z)[0]);
    }
    try {
      return winding_of_samples(loop, 0.0);
    } catch (const BudgetError&) {
      if (samples > (1 << 20)) throw;
    }
  }
}

// l1 ---------------------------------------------------------------------------

namespace {

struct Profile {
  int ncos, nsin;
  std::vector<double> cosines, sines;  // [sample][harmonic]

  Profile(int coefficients, int samples) {
    if (coefficients < 1) throw ConfigError("need at least one profile coefficient");
    ncos = coefficients / 2;
    nsin = coefficients - 1 - ncos;
    cosines.resize(static_cast<std::size_t>(samples * ncos));
    sines.resize(static_cast<std::size_t>(samples * nsin));
    for (int i = 0; i < samples; ++i) {
      const double th = kTwoPi * i / samples;
      for (int j = 0; j < ncos; ++j) cosines[static_cast<std::size_t>(i * ncos + j)] = std::cos((j + 1) * th);
      for (int j = 0; j < nsin; ++j) sines[static_cast<std::size_t>(i * nsin + j)] = std::sin((j + 1) * th);
    }
  }

  double h(const double* x, int i) const {
    double s = x[0];
    for (int j = 0; j < ncos; ++j) s += x[1 + j] * cosines[static_cast<std::size_t>(i * ncos + j)];
    for (int j = 0; j < nsin; ++j) s += x[1 + ncos + j] * sines[static_cast<std::size_t>(i * nsin + j)];
    return s;
  }
};

struct LoopProblem {
  Domain dom;
  double k, half_log;
  int samples;
  Profile prof;
  mutable long evals = 0;

  std::vector<cplx> loop(const double* x) const {
    std::vector<cplx> z(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) z[static_cast<std::size_t>(i)] = std::polar(k * std::exp(prof.h(x, i)), kTwoPi * i / samples);
    return z;
  }

  // metric length (scale 1) with 4-point Gauss-Legendre per chord; infinity if outside
  double length(const double* x) const {
    ++evals;
    static const double gx[4] = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281, 0.9305681557970263};
    static const double gw[4] = {0.1739274225568719, 0.3260725774431281, 0.3260725774431281, 0.1739274225568719};
    const auto z = loop(x);
    double total = 0.0;
    const CVec one{cplx(1.0, 0.0)};
    for (int i = 0; i < samples; ++i) {
      const cplx a = z[static_cast<std::size_t>(i)], b = z[static_cast<std::size_t>((i + 1) % samples)];
      const double chord = std::abs(b - a);
      for (int g = 0; g < 4; ++g) {
        const cplx w = a + gx[g] * (b - a);
        if (!(std::abs(std::log(std::abs(w) / k)) < half_log)) return std::numeric_limits<double>::infinity();
        const CVec pt{w};
        total += gw[g] * chord * kob_royden_closed_raw(dom, pt, one);
      }
    }
    return total;
  }
};

struct L1Context {
  const LoopProblem* prob;
};

double l1_trampoline(const gsl_vector* x, void* params) {
  const auto* ctx = static_cast<L1Context*>(params);
  const double v = ctx->prob->length(x->data);
  return std::isfinite(v) ? v : 1e300;
}

}  // namespace

InvariantReport l1_annulus(double A, double B, double scale, const L1Options& opt) {
  if (!(A > 0.0) || !(B > A)) throw ConfigError("annulus needs 0 < A < B");
  if (!(scale > 0.0)) throw ConfigError("scale must be positive");
  if (opt.samples < 16) throw ConfigError("need at least 16 loop samples");
  LoopProblem prob{Domain::annulus(A, B), std::sqrt(A * B), 0.5 * std::log(B / A), opt.samples,
                   Profile(opt.coefficients, opt.samples)};
  const std::size_t dim = static_cast<std::size_t>(opt.coefficients);

  // random start: a shifted, wobbly loop well inside the annulus
  std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ULL + 17);
  std::uniform_real_distribution<double> shift(-0.3, 0.3);
  std::normal_distribution<double> g;
  std::vector<double> x(dim, 0.0);
  do {
    x[0] = shift(rng) * prob.half_log;
    for (std::size_t j = 1; j < dim; ++j) {
      const int harmonic = 1 + static_cast<int>(j <= static_cast<std::size_t>(prob.prof.ncos) ? j - 1 : j - 1 - prob.prof.ncos);
      x[j] = 0.05 * prob.half_log * g(rng) / harmonic;
    }
  } while (!std::isfinite(prob.length(x.data())));

  L1Context ctx{&prob};
  gsl_multimin_function fn{&l1_trampoline, dim, &ctx};
  gsl_vector* gx = gsl_vector_alloc(dim);
  gsl_vector* ss = gsl_vector_alloc(dim);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  for (int round = 0; round <= opt.restarts; ++round) {
    for (std::size_t j = 0; j < dim; ++j) gsl_vector_set(gx, j, x[j]);
    gsl_vector_set_all(ss, 0.1 * prob.half_log / (1 + round));
    gsl_multimin_fminimizer_set(s, &fn, gx, ss);
    for (int it = 0; it < opt.max_iters; ++it) {
      if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-9) == GSL_SUCCESS) break;
    }
    for (std::size_t j = 0; j < dim; ++j) x[j] = gsl_vector_get(s->x, j);
  }
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(gx);

  const auto z = prob.loop(x.data());
  std::vector<double> params;
  std::vector<CPoint> points;
  double deviation = 0.0;
  for (int i = 0; i <= opt.samples; ++i) {
    const cplx w = z[static_cast<std::size_t>(i % opt.samples)];
    params.push_back(kTwoPi * i / opt.samples);
    points.emplace_back(CVec{w});
    deviation = std::max(deviation, std::abs(std::abs(w) / prob.k - 1.0));
  }
  SampledCurve curve(std::move(params), std::move(points), true);

  InvariantReport r;
  r.scale = scale;
  r.value = curve_length_metric(KobayashiMetric(prob.dom), curve, LengthMode::Integrated, scale);
  r.lower_bound = 0.5 * scale * std::numbers::pi * std::numbers::pi / std::log(B / A);
  r.certificate_parameter = deviation;
  r.evaluations = prob.evals;
  r.curve = std::move(curve);
  return r;
}

// l_k on sphere tubes ----------------------------------------------------------------

LkOptions default_lk_options(int k, double r) {
  LkOptions o;
  o.mesh_density = k == 1 ? 32 : 1;
  o.measure = default_measure_options(Domain::tube_sphere(k, r), 1.0);
  return o;
}

InvariantReport lk_tube_upper(int k, double r, const LkOptions& opt) {
  if (k != 1 && k != 2) throw ConfigError("l_k is available for k = 1 and k = 2");
  const Domain T = Domain::tube_sphere(k, r);
  const SphereTriangulation base = k == 1 ? circle_triangulation(opt.mesh_density) : icosphere(opt.mesh_density);
  std::vector<double> radii{1.0};
  if (opt.shrink_search) radii = {1.0 - 0.5 * r, 1.0 - 0.25 * r, 1.0, 1.0 + 0.25 * r};
  const PieceMetric dist(T, MetricKind::Kobayashi, opt.measure);
  InvariantReport best;
  best.value = std::numeric_limits<double>::infinity();
  for (double rho : radii) {
    SphereMeshMap mesh = real_sphere_map(base, rho);
    double v;
    try {
      require_inside(T, mesh);
      v = sphere_map_measure_upper(dist, mesh, k);
    } catch (const DomainError&) {
      continue;  // the piecewise-linear sphere leaves the tube; not a candidate
    }
    best.candidates.emplace_back(rho, v);
    if (v < best.value) {
      best.value = v;
      best.certificate_parameter = rho;
      best.mesh = std::move(mesh);
    }
  }
  if (!best.mesh) throw DomainError("no candidate sphere fits inside the tube");
  best.scale = opt.measure.scale;
  best.evaluations = dist.oracle().estimator_calls();
  return best;
}

double vk_tube_upper(int k, double r, const SphereMeshMap& candidate, const MeasureOptions& opt) {
  const Domain T = Domain::tube_sphere(k, r);
  if (candidate.k() != k) throw ConfigError("candidate mesh has the wrong dimension");
  if (sphere_degree(T, candidate) == 0) throw ConfigError("not in the admissible family");
  return sphere_map_measure_upper(T, candidate, k, MetricKind::Kobayashi, opt);
}

// annulus maps -------------------------------------------------------------------

const char* verdict_name(HomotopyVerdict v) {
  return v == HomotopyVerdict::TrivialForced ? "TrivialForced" : "NotForced";
}

AnnulusVerdict annulus_map_homotopy_verdict(const PolyMap& f, const Domain& source, const Domain& target,
                                            int samples) {
  const auto* s = source.as<Annulus>();
  const auto* t = target.as<Annulus>();
  if (!s || !t) throw ConfigError("annulus verdict needs annulus source and target");
  require_maps_into(f, source, target, samples);
  AnnulusVerdict v;
  v.source_modulus = s->outer / s->inner;
  v.target_modulus = t->outer / t->inner;
  v.verdict = v.source_modulus > v.target_modulus ? HomotopyVerdict::TrivialForced : HomotopyVerdict::NotForced;
  std::vector<cplx> loop;
  const double rc = 0.5 * (s->inner + s->outer);
  for (int i = 0; i < 1024; ++i) loop.push_back(f(CVec{std::polar(rc, kTwoPi * i / 1024)})[0]);
  v.core_winding = winding_of_samples(loop, 0.0);
  if (v.verdict == HomotopyVerdict::TrivialForced && v.core_winding != 0)
    throw InternalError("core winding contradicts forced triviality");
  return v;
}

}  // namespace koblab
