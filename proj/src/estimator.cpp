#include "koblab/estimator.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_poly.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "koblab/parallel.hpp"

namespace koblab {

void OptimizerBudget::validate() const {
  if (max_degree < 1) throw ConfigError("budget.max_degree must be >= 1");
  if (restarts < 1) throw ConfigError("budget.restarts must be >= 1");
  if (max_iters < 1) throw ConfigError("budget.max_iters must be >= 1");
  if (polish < 0) throw ConfigError("budget.polish must be >= 0");
  if (boundary_angles < 8) throw ConfigError("budget.boundary_angles must be >= 8");
  if (!(margin > 0.0 && margin < 0.5)) throw ConfigError("budget.margin must lie in (0, 0.5)");
}

CVec PolyDiscCandidate::eval(cplx z) const {
  CVec out(coeffs.front().size(), cplx(0.0, 0.0));
  for (std::size_t j = coeffs.size(); j-- > 0;)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] * z + coeffs[j][i];
  return out;
}

PolyDiscCandidate seed_affine_disc(const Domain& d, const CPoint& p, const TVector& v, double margin) {
  require_dim(d, v.dim(), "vector");
  const double dist = dist_to_complement(d, p);
  if (!(v.euclid_norm() > 0.0)) throw ConfigError("tangent vector must be nonzero");
  PolyDiscCandidate c;
  c.degree = 1;
  c.coeffs = {p.coords(), scaled(v.comps(), dist * (1.0 - margin) / v.euclid_norm())};
  return c;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest t with p + t' w inside the ball |q - c| < R for all t' < t, where p is inside.
double ball_exit(std::span<const cplx> q, std::span<const cplx> w, double R) {
  const double a = norm2(w);
  if (a == 0.0) return kInf;
  const double hb = hdot(q, w).real();
  const double c0 = norm2(q) - R * R;
  const double root = std::sqrt(std::max(0.0, hb * hb - a * c0));
  return hb > 0.0 ? -c0 / (hb + root) : (root - hb) / a;
}

// First positive t with |p + t w| = A, for |p| > A; infinity when the ray misses.
double hole_hit(cplx p, cplx w, double A) {
  const double a = std::norm(w);
  const double hb = (p * std::conj(w)).real();
  const double c1 = std::norm(p) - A * A;
  if (a == 0.0 || hb >= 0.0) return kInf;
  const double disc = hb * hb - a * c1;
  if (disc < 0.0) return kInf;
  return c1 / (-hb + std::sqrt(disc));
}

// Tubes: with X = squared norm of the core-plane part and Y the rest, a point is
// inside iff (sqrt(X) - 1)^2 + Y < r^2, i.e. iff (X + Y + 1 - r^2)^2 - 4X < 0 (the
// square is of a positive number since r < 1). Along a ray this is a quartic in t;
// the exit is its smallest positive root (near-real roots included, to stay conservative).
double tube_exit(double X0, double X1, double X2, double Y0, double Y1, double Y2, double r) {
  const double s0 = X0 + Y0 + 1.0 - r * r, s1 = X1 + Y1, s2 = X2 + Y2;
  if (s2 <= 0.0) return kInf;
  const double c[5] = {s0 * s0 - 4.0 * X0, 2.0 * s0 * s1 - 4.0 * X1, s1 * s1 + 2.0 * s0 * s2 - 4.0 * X2,
                       2.0 * s1 * s2, s2 * s2};
  auto P = [&c](double t) { return (((c[4] * t + c[3]) * t + c[2]) * t + c[1]) * t + c[0]; };
  // P is monotone between consecutive critical points; the first bracket with a
  // nonnegative right end holds the exit
  double crit[3];
  const int nc = gsl_poly_solve_cubic(3.0 * c[3] / (4.0 * c[4]), 2.0 * c[2] / (4.0 * c[4]), c[1] / (4.0 * c[4]),
                                      &crit[0], &crit[1], &crit[2]);
  double lo = 0.0;
  double hi = -1.0;
  for (int i = 0; i < nc && hi < 0.0; ++i) {
    if (crit[i] <= lo) continue;
    if (P(crit[i]) >= 0.0)
      hi = crit[i];
    else
      lo = crit[i];
  }
  if (hi < 0.0) {
    double step = 1.0 / std::sqrt(s2);
    hi = lo + step;
    while (P(hi) < 0.0) {
      lo = hi;
      step *= 2.0;
      hi += step;
      if (!std::isfinite(hi)) return kInf;
    }
  }
  // Illinois regula falsi, keeping lo on the inside
  double flo = P(lo), fhi = P(hi);
  int side = 0;
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    double t = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    const double ft = P(t);
    if (ft < 0.0) {
      lo = t;
      flo = ft;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = t;
      fhi = ft;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
  }
  return lo;
}

// First exit parameter of t -> p + t w. Conservative (never past the true exit).
double ray_exit(const Domain& d, std::span<const cplx> p, std::span<const cplx> w, double cap) {
  if (const auto* x = d.as<Disc>()) {
    const cplx q = p[0] - x->center;
    return ball_exit(std::span<const cplx>(&q, 1), w, x->radius);
  }
  if (const auto* x = d.as<Ball>()) {
    thread_local CVec q;
    q.assign(p.begin(), p.end());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= x->center[i];
    return ball_exit(q, w, x->radius);
  }
  if (const auto* x = d.as<Polydisc>()) {
    double t = kInf;
    for (std::size_t i = 0; i < p.size(); ++i)
      t = std::min(t, ball_exit(p.subspan(i, 1), w.subspan(i, 1), x->radii[i]));
    return t;
  }
  if (const auto* x = d.as<Annulus>())
    return std::min(ball_exit(p, w, x->outer), hole_hit(p[0], w[0], x->inner));
  if (const auto* x = d.as<TubeSphere>()) {
    double X0 = 0, X1 = 0, X2 = 0, Y0 = 0, Y1 = 0, Y2 = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      X0 += p[i].real() * p[i].real();
      X1 += 2.0 * p[i].real() * w[i].real();
      X2 += w[i].real() * w[i].real();
      Y0 += p[i].imag() * p[i].imag();
      Y1 += 2.0 * p[i].imag() * w[i].imag();
      Y2 += w[i].imag() * w[i].imag();
    }
    return tube_exit(X0, X1, X2, Y0, Y1, Y2, x->r);
  }
  if (const auto* x = d.as<TubeCircle>()) {
    const double X0 = std::norm(p[0]), X1 = 2.0 * (p[0] * std::conj(w[0])).real(), X2 = std::norm(w[0]);
    double Y0 = 0, Y1 = 0, Y2 = 0;
    for (std::size_t i = 1; i < p.size(); ++i) {
      Y0 += std::norm(p[i]);
      Y1 += 2.0 * (p[i] * std::conj(w[i])).real();
      Y2 += std::norm(w[i]);
    }
    return tube_exit(X0, X1, X2, Y0, Y1, Y2, x->r);
  }
  // sphere tracing on the exact interior distance
  const double wn = norm(w);
  if (wn == 0.0) return kInf;
  thread_local CVec q;
  q.resize(p.size());
  double t = 0.0;
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = p[i] + t * w[i];
    const double s = d.signed_distance(q);
    if (s <= 1e-10 * (1.0 + t * wn)) break;
    t += s / wn;
    if (t >= cap) return cap;
  }
  return t;
}

struct NmResult {
  std::vector<double> x;
  double fval;
  long evals;
};

struct NmContext {
  const std::function<double(const double*)>* f;
  long evals;
};

double nm_trampoline(const gsl_vector* x, void* params) {
  auto* ctx = static_cast<NmContext*>(params);
  ++ctx->evals;
  return (*ctx->f)(x->data);
}

NmResult nelder_mead(const std::function<double(const double*)>& f, std::vector<double> x0, double step,
                     int max_iters) {
  const std::size_t dim = x0.size();
  NmContext ctx{&f, 0};
  gsl_multimin_function fn{&nm_trampoline, dim, &ctx};
  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* ss = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(x, i, x0[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  for (int it = 0; it < max_iters; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-7) == GSL_SUCCESS) break;
  }
  NmResult out{std::vector<double>(dim), s->fval, ctx.evals};
  for (std::size_t i = 0; i < dim; ++i) out.x[i] = gsl_vector_get(s->x, i);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return out;
}

// Scale of the disc p + s * g(z), g(z) = u z + sum_{j>=2} b_j z^j, that keeps the
// sampled points of the closed unit disc inside d.
class ShapeProblem {
 public:
  ShapeProblem(const Domain& d, CVec p, CVec u, int max_degree, int angles)
      : d_(d), p_(std::move(p)), u_(std::move(u)), n_(p_.size()), max_degree_(max_degree) {
    cap_ = 4.0 * domain_diameter(d);
    std::vector<std::pair<double, int>> rings;
    if (d.convex()) {
      rings = {{1.0, angles}};
    } else {
      rings = {{0.5, std::max(16, angles / 4)}, {0.8, angles / 2}, {0.95, angles}, {1.0, angles}};
    }
    for (const auto& [rho, count] : rings) {
      for (int k = 0; k < count; ++k) {
        const cplx z = std::polar(rho, 2.0 * std::numbers::pi * (k + 0.5 * (rho < 1.0)) / count);
        std::vector<cplx> pw(static_cast<std::size_t>(max_degree) + 1);
        pw[0] = 1.0;
        for (int j = 1; j <= max_degree; ++j) pw[j] = pw[j - 1] * z;
        powers_.push_back(std::move(pw));
      }
    }
  }

  std::size_t dim() const { return n_; }

  /// x holds b_2..b_m as interleaved (re, im) per coordinate.
  double scale(const double* x, int m) const {
    CVec w(n_);
    double best = kInf;
    for (const auto& pw : powers_) {
      for (std::size_t i = 0; i < n_; ++i) {
        cplx acc = u_[i] * pw[1];
        for (int j = 2; j <= m; ++j) {
          const std::size_t o = 2 * ((static_cast<std::size_t>(j) - 2) * n_ + i);
          acc += cplx(x[o], x[o + 1]) * pw[j];
        }
        w[i] = acc;
      }
      best = std::min(best, ray_exit(d_, p_, w, cap_));
    }
    return best;
  }

  PolyDiscCandidate candidate(const std::vector<double>& x, int m, double s) const {
    PolyDiscCandidate c;
    c.degree = m;
    c.boundary_samples = static_cast<int>(powers_.size());
    c.coeffs.push_back(p_);
    c.coeffs.push_back(scaled(u_, s));
    for (int j = 2; j <= m; ++j) {
      CVec a(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t o = 2 * ((static_cast<std::size_t>(j) - 2) * n_ + i);
        a[i] = s * cplx(x[o], x[o + 1]);
      }
      c.coeffs.push_back(std::move(a));
    }
    return c;
  }

 private:
  const Domain& d_;
  CVec p_, u_;
  std::size_t n_;
  int max_degree_;
  double cap_;
  std::vector<std::vector<cplx>> powers_;
};

double lipschitz_on(const PolyDiscCandidate& f, double rho) {
  double L = 0.0, pw = 1.0;
  for (std::size_t j = 1; j < f.coeffs.size(); ++j) {
    L += static_cast<double>(j) * norm(f.coeffs[j]) * pw;
    pw *= rho;
  }
  return L;
}

struct StageRun {
  double s = 0.0;
  std::vector<double> x;
};

}  // namespace

bool certify_disc(const Domain& d, const PolyDiscCandidate& f, int initial_cells) {
  constexpr long kCellBudget = 4'000'000;
  long cells = 0;
  auto sd_at = [&](cplx z) { return d.signed_distance(f.eval(z)); };
  if (d.convex()) {
    const double L = lipschitz_on(f, 1.0);
    std::vector<std::pair<double, double>> stack;  // (centre angle, half width)
    const double hw0 = std::numbers::pi / initial_cells;
    for (int k = 0; k < initial_cells; ++k) stack.emplace_back((2 * k + 1) * hw0, hw0);
    while (!stack.empty()) {
      auto [th, hw] = stack.back();
      stack.pop_back();
      if (++cells > kCellBudget) return false;
      const double s = sd_at(std::polar(1.0, th));
      if (!(s > 0.0)) return false;
      if (s > L * hw) continue;
      if (hw < 1e-12) return false;
      stack.emplace_back(th - hw / 2, hw / 2);
      stack.emplace_back(th + hw / 2, hw / 2);
    }
    return true;
  }
  struct Cell {
    double ra, rb, ta, tb;
  };
  std::vector<Cell> stack;
  const double edges[] = {0.5, 0.75, 0.9, 1.0};
  for (int e = 0; e + 1 < 4; ++e)
    for (int k = 0; k < initial_cells; ++k)
      stack.push_back({edges[e], edges[e + 1], 2 * std::numbers::pi * k / initial_cells,
                       2 * std::numbers::pi * (k + 1) / initial_cells});
  // central disc |z| <= rho, shrunk until its single-point test passes
  for (double rho = 0.5;; rho *= 0.5) {
    const double s = sd_at(0.0);
    if (!(s > 0.0)) return false;
    if (s > lipschitz_on(f, rho) * rho) break;
    if (rho < 1e-9) return false;
    for (int k = 0; k < 16; ++k)
      stack.push_back({rho / 2, rho, 2 * std::numbers::pi * k / 16, 2 * std::numbers::pi * (k + 1) / 16});
  }
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    if (++cells > kCellBudget) return false;
    const double rm = 0.5 * (c.ra + c.rb), tm = 0.5 * (c.ta + c.tb);
    const double radial = 0.5 * (c.rb - c.ra), angular = 0.5 * c.rb * (c.tb - c.ta);
    const double s = sd_at(std::polar(rm, tm));
    if (!(s > 0.0)) return false;
    if (s > lipschitz_on(f, c.rb) * (radial + angular)) continue;
    if (radial + angular < 1e-12) return false;
    if (radial > angular) {
      stack.push_back({c.ra, rm, c.ta, c.tb});
      stack.push_back({rm, c.rb, c.ta, c.tb});
    } else {
      stack.push_back({c.ra, c.rb, c.ta, tm});
      stack.push_back({c.ra, c.rb, tm, c.tb});
    }
  }
  return true;
}

KobEstimate estimate_kob_royden_detailed(const Domain& d, const CPoint& p, const TVector& v,
                                         const OptimizerBudget& budget) {
  budget.validate();
  require_dim(d, p.dim(), "point");
  require_dim(d, v.dim(), "vector");
  if (!membership(d, p)) throw DomainError("point not in domain");
  if (!(v.euclid_norm() > 0.0)) throw ConfigError("tangent vector must be nonzero");

  KobEstimate out;
  out.disc = seed_affine_disc(d, p, v, budget.margin);
  double best_r = out.disc.radius_for(v);

  const int M = budget.max_degree;
  const CVec u = scaled(v.comps(), 1.0 / v.euclid_norm());
  ShapeProblem problem(d, p.coords(), u, M, budget.boundary_angles);
  const std::size_t n = problem.dim();

  auto certify_stage = [&](const std::vector<double>& x, int m, double s) -> std::pair<double, PolyDiscCandidate> {
    if (!(s > 0.0) || !std::isfinite(s)) return {kInf, {}};
    double sc = s * (1.0 - budget.margin);
    for (int attempt = 0; attempt < 60; ++attempt, sc *= 1.0 - budget.margin) {
      PolyDiscCandidate c = problem.candidate(x, m, sc);
      if (certify_disc(d, c, budget.boundary_angles)) return {v.euclid_norm() / sc, std::move(c)};
    }
    return {kInf, {}};
  };

  std::vector<std::vector<StageRun>> runs(static_cast<std::size_t>(budget.restarts));
  std::vector<long> evals(runs.size(), 0);
  if (M >= 2) {
    parallel_for(runs.size(), budget.threads, [&](std::size_t i) {
      std::mt19937_64 rng(budget.seed * 0x9E3779B97F4A7C15ULL + i);
      std::normal_distribution<double> gauss(0.0, 0.3);
      std::vector<double> x(2 * n, 0.0);
      if (i > 0)
        for (auto& xi : x) xi = gauss(rng);
      for (int m = 2; m <= M; ++m) {
        x.resize(2 * n * static_cast<std::size_t>(m - 1), 0.0);
        std::function<double(const double*)> obj = [&](const double* y) { return -problem.scale(y, m); };
        NmResult r = nelder_mead(obj, x, 0.2, budget.max_iters);
        evals[i] += r.evals;
        // A collapsed simplex in high dimension stalls short of the optimum; restart it.
        double step = 0.1;
        for (int round = 0; round < budget.polish; ++round, step *= 0.5) {
          NmResult again = nelder_mead(obj, r.x, step, budget.max_iters);
          evals[i] += again.evals;
          const bool gain = again.fval < r.fval - 1e-9 * std::abs(r.fval);
          if (again.fval < r.fval) r = std::move(again);
          if (!gain) break;
        }
        x = r.x;
        runs[i].push_back({-r.fval, x});
      }
    });
  }
  for (long e : evals) out.objective_evaluations += e;

  out.stage_values.assign(static_cast<std::size_t>(M), kInf);
  {
    auto [r1, c1] = certify_stage({}, 1, problem.scale(nullptr, 1));
    ++out.objective_evaluations;
    out.stage_values[0] = r1;
    if (r1 < best_r) {
      best_r = r1;
      out.disc = std::move(c1);
    }
  }
  for (int m = 2; m <= M; ++m) {
    std::size_t pick = 0;
    for (std::size_t i = 1; i < runs.size(); ++i)
      if (runs[i][m - 2].s > runs[pick][m - 2].s) pick = i;
    auto [rm, cm] = certify_stage(runs[pick][m - 2].x, m, runs[pick][m - 2].s);
    out.stage_values[static_cast<std::size_t>(m - 1)] = rm;
    if (rm < best_r) {
      best_r = rm;
      out.disc = std::move(cm);
    }
  }
  out.metric = {best_r, 1.0, Source::EstimatedUpperBound};
  return out;
}

MetricValue estimate_kob_royden(const Domain& d, const CPoint& p, const TVector& v, const OptimizerBudget& budget) {
  return estimate_kob_royden_detailed(d, p, v, budget).metric;
}

}  // namespace koblab
