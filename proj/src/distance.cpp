#include "koblab/distance.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

namespace koblab {

namespace {

struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int order) : x(static_cast<std::size_t>(order)), w(static_cast<std::size_t>(order)) {
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order));
    for (std::size_t i = 0; i < x.size(); ++i) gsl_integration_glfixed_point(0.0, 1.0, i, &x[i], &w[i], t);
    gsl_integration_glfixed_table_free(t);
  }
};

const GaussLegendre& gauss_legendre(int order) {
  static const GaussLegendre rules[] = {GaussLegendre(1), GaussLegendre(2), GaussLegendre(3), GaussLegendre(4),
                                        GaussLegendre(5), GaussLegendre(6), GaussLegendre(7), GaussLegendre(8)};
  if (order < 1 || order > 8) throw ConfigError("quadrature order must lie in 1..8");
  return rules[order - 1];
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// One Gauss-Legendre panel over [t0, t1] of F(a + t d, d); infinity if a node is outside.
double panel(const KobayashiMetric& m, std::span<const cplx> a, std::span<const cplx> d, double t0, double t1,
             int order = 8) {
  const auto& g = gauss_legendre(order);
  CVec z(a.size());
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double t = t0 + (t1 - t0) * g.x[i];
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = a[j] + t * d[j];
    if (!(m.domain().signed_distance(z) > 0.0)) return kInf;
    s += g.w[i] * m(z, d);
  }
  return s * (t1 - t0);
}

double adaptive(const KobayashiMetric& m, std::span<const cplx> a, std::span<const cplx> d, double t0, double t1,
                double whole, const QuadratureOptions& q, int depth) {
  const double tm = 0.5 * (t0 + t1);
  const double left = panel(m, a, d, t0, tm, q.order), right = panel(m, a, d, tm, t1, q.order);
  const double both = left + right;
  if (!std::isfinite(both)) return kInf;
  if (depth >= q.max_depth || std::abs(both - whole) <= q.rel_tol * std::abs(both) || both < 1e-300) return both;
  return adaptive(m, a, d, t0, tm, left, q, depth + 1) + adaptive(m, a, d, tm, t1, right, q, depth + 1);
}

bool lex_less(std::span<const cplx> a, std::span<const cplx> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
  }
  return false;
}

// Edge weight independent of orientation.
double edge_weight(const KobayashiMetric& m, std::span<const cplx> a, std::span<const cplx> b) {
  if (lex_less(b, a)) std::swap(a, b);
  const CVec d = sub(b, a);
  return panel(m, a, d, 0.0, 1.0);
}

// Local pattern search on interior path vertices; the polyline stays inside the
// domain and its length only decreases.
double refine_path(const KobayashiMetric& m, std::vector<CVec>& path, double h) {
  const std::size_t n = path.size();
  std::vector<double> seg(n - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) total += seg[i] = edge_weight(m, path[i], path[i + 1]);
  if (n < 3) return total;
  const std::size_t D = 2 * path[0].size();
  for (double step = 0.5 * h; step > h / 128; step *= 0.5) {
    for (int sweep = 0; sweep < 50; ++sweep) {
      bool moved = false;
      for (std::size_t i = 1; i + 1 < n; ++i) {
        for (std::size_t k = 0; k < 2 * D; ++k) {
          CVec trial = path[i];
          const double delta = (k % 2 == 0 ? step : -step);
          if ((k / 2) % 2 == 0)
            trial[k / 4] += cplx(delta, 0.0);
          else
            trial[k / 4] += cplx(0.0, delta);
          if (!(m.domain().signed_distance(trial) > 0.0)) continue;
          const double a = edge_weight(m, path[i - 1], trial), b = edge_weight(m, trial, path[i + 1]);
          if (a + b < seg[i - 1] + seg[i] - 1e-15) {
            total += a + b - seg[i - 1] - seg[i];
            seg[i - 1] = a;
            seg[i] = b;
            path[i] = std::move(trial);
            moved = true;
          }
        }
      }
      if (!moved) break;
    }
  }
  total = 0.0;
  for (double s : seg) total += s;
  return total;
}

}  // namespace

QuadratureOptions light_quadrature() { return {1e-3, 0, 3}; }

double segment_length(const KobayashiMetric& m, std::span<const cplx> a, std::span<const cplx> b,
                      const QuadratureOptions& q) {
  require_dim(m.domain(), a.size(), "segment endpoint");
  require_dim(m.domain(), b.size(), "segment endpoint");
  const CVec d = sub(b, a);
  if (norm(d) == 0.0) return 0.0;
  const double whole = panel(m, a, d, 0.0, 1.0, q.order);
  const double val = !std::isfinite(whole) || q.max_depth == 0 ? whole : adaptive(m, a, d, 0.0, 1.0, whole, q, 0);
  if (!std::isfinite(val)) throw DomainError("segment leaves the domain");
  return val;
}

GraphDistance kob_distance_graph(const KobayashiMetric& m, std::span<const cplx> p, std::span<const cplx> q,
                                 const GraphOptions& opt) {
  const Domain& dom = m.domain();
  require_dim(dom, p.size(), "point");
  require_dim(dom, q.size(), "point");
  if (!(opt.resolution > 0.0)) throw ConfigError("graph resolution must be positive");
  if (!(dom.signed_distance(p) > 0.0) || !(dom.signed_distance(q) > 0.0)) throw DomainError("point not in domain");
  if (distance(p, q) == 0.0) return {0.0, 1, 0};
  if (lex_less(q, p)) std::swap(p, q);

  const double h = opt.resolution;
  const Box bb = dom.bbox();
  const std::size_t D = bb.lo.size();
  auto real_coord = [](std::span<const cplx> z, std::size_t k) { return k % 2 == 0 ? z[k / 2].real() : z[k / 2].imag(); };
  const double pad = std::max(0.5 * distance(p, q), 4.0 * h);
  std::vector<long> imin(D), extent(D);
  long total = 1;
  for (std::size_t k = 0; k < D; ++k) {
    const double lo = std::max(bb.lo[k], std::min(real_coord(p, k), real_coord(q, k)) - pad);
    const double hi = std::min(bb.hi[k], std::max(real_coord(p, k), real_coord(q, k)) + pad);
    imin[k] = static_cast<long>(std::ceil((lo - bb.lo[k]) / h));
    const long imax = static_cast<long>(std::floor((hi - bb.lo[k]) / h));
    extent[k] = std::max(0L, imax - imin[k] + 1);
    if (extent[k] > 0 && total > opt.max_nodes / extent[k]) throw BudgetError("graph too large at this resolution");
    total *= extent[k];
  }
  auto position = [&](long flat) {
    CVec z(D / 2);
    for (std::size_t k = 0; k < D; ++k) {
      const long i = flat % extent[k];
      flat /= extent[k];
      const double x = bb.lo[k] + h * static_cast<double>(imin[k] + i);
      if (k % 2 == 0)
        z[k / 2].real(x);
      else
        z[k / 2].imag(x);
    }
    return z;
  };
  std::vector<long> stride(D, 1);
  for (std::size_t k = 1; k < D; ++k) stride[k] = stride[k - 1] * extent[k - 1];

  // vertices: lattice flats 0..total-1, p = total, q = total + 1
  const long P = total, Q = total + 1;
  std::vector<char> inside(static_cast<std::size_t>(total), 0);
  long interior = 0;
  for (long f = 0; f < total; ++f) {
    inside[static_cast<std::size_t>(f)] = dom.signed_distance(position(f)) > 0.0;
    interior += inside[static_cast<std::size_t>(f)];
  }

  // lattice nodes attached to an off-lattice point: index window around its cell
  auto attached = [&](std::span<const cplx> z) {
    std::vector<long> out;
    std::vector<long> lo(D), cnt(D);
    for (std::size_t k = 0; k < D; ++k) {
      const double c = (real_coord(z, k) - bb.lo[k]) / h - static_cast<double>(imin[k]);
      lo[k] = std::max(0L, static_cast<long>(std::floor(c)) - 1);
      const long hi = std::min(extent[k] - 1, static_cast<long>(std::ceil(c)) + 1);
      cnt[k] = hi - lo[k] + 1;
      if (cnt[k] <= 0) return out;
    }
    std::vector<long> idx(D, 0);
    while (true) {
      long f = 0;
      for (std::size_t k = 0; k < D; ++k) f += (lo[k] + idx[k]) * stride[k];
      if (inside[static_cast<std::size_t>(f)]) out.push_back(f);
      std::size_t a = 0;
      while (a < D && ++idx[a] == cnt[a]) idx[a++] = 0;
      if (a == D) break;
    }
    return out;
  };
  const std::vector<long> p_att = attached(p), q_att = attached(q);
  std::unordered_map<long, char> q_near;
  for (long f : q_att) q_near[f] = 1;

  // 3^D - 1 neighbour offsets, with per-axis steps for bounds checks
  std::vector<std::vector<int>> offsets;
  {
    std::vector<int> o(D, -1);
    while (true) {
      if (std::any_of(o.begin(), o.end(), [](int x) { return x != 0; })) offsets.push_back(o);
      std::size_t a = 0;
      while (a < D && ++o[a] == 2) o[a++] = -1;
      if (a == D) break;
    }
  }

  std::unordered_map<long, double> dist;
  std::unordered_map<long, long> pred;
  using Item = std::pair<double, long>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[P] = 0.0;
  heap.push({0.0, P});
  long relaxed = 0;
  auto point_of = [&](long id) -> CVec {
    if (id == P) return CVec(p.begin(), p.end());
    if (id == Q) return CVec(q.begin(), q.end());
    return position(id);
  };
  auto relax = [&](long from, double base, const CVec& a, long to) {
    const double w = edge_weight(m, a, point_of(to));
    ++relaxed;
    if (!std::isfinite(w)) return;
    auto it = dist.find(to);
    if (it == dist.end() || base + w < it->second) {
      dist[to] = base + w;
      pred[to] = from;
      heap.push({base + w, to});
    }
  };
  const bool direct = [&] {
    for (std::size_t k = 0; k < D; ++k)
      if (std::abs(real_coord(p, k) - real_coord(q, k)) > 2.0 * h) return false;
    return true;
  }();

  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    if (u == Q) {
      std::vector<CVec> path;
      for (long v = Q;; v = pred[v]) {
        path.push_back(point_of(v));
        if (v == P) break;
      }
      std::reverse(path.begin(), path.end());
      const double value = opt.refine ? refine_path(m, path, h) : du;
      return {std::min(du, value), interior + 2, relaxed};
    }
    const CVec a = point_of(u);
    if (u == P) {
      for (long f : p_att) relax(u, du, a, f);
      if (direct) relax(u, du, a, Q);
      continue;
    }
    if (q_near.count(u)) relax(u, du, a, Q);
    std::vector<long> idx(D);
    long rest = u;
    for (std::size_t k = 0; k < D; ++k) {
      idx[k] = rest % extent[k];
      rest /= extent[k];
    }
    for (const auto& o : offsets) {
      long f = u;
      bool ok = true;
      for (std::size_t k = 0; k < D && ok; ++k) {
        const long j = idx[k] + o[k];
        ok = j >= 0 && j < extent[k];
        f += o[k] * stride[k];
      }
      if (!ok || !inside[static_cast<std::size_t>(f)]) continue;
      relax(u, du, a, f);
    }
  }
  throw BudgetError("resolution too coarse");
}

double kob_distance_graph(const Domain& d, const CPoint& p, const CPoint& q, double resolution) {
  OracleOptions opt;
  if (!d.has_closed_metric()) opt.budget = light_budget();
  KobayashiMetric m(d, opt);
  return kob_distance_graph(m, p.coords(), q.coords(), GraphOptions{resolution}).value;
}

double kob_distance(const KobayashiMetric& m, std::span<const cplx> p, std::span<const cplx> q,
                    const GraphOptions& opt) {
  if (has_closed_distance(m.domain())) {
    if (!(m.domain().signed_distance(p) > 0.0) || !(m.domain().signed_distance(q) > 0.0))
      throw DomainError("point not in domain");
    return kob_distance_closed_raw(m.domain(), p, q);
  }
  return kob_distance_graph(m, p, q, opt).value;
}

double curve_length_metric(const KobayashiMetric& m, const SampledCurve& c, LengthMode mode, double scale,
                           const QuadratureOptions& q, const GraphOptions& g) {
  if (!(scale > 0.0)) throw ConfigError("scale must be positive");
  require_inside(m.domain(), c);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < c.points().size(); ++i) {
    const auto& a = c.points()[i].coords();
    const auto& b = c.points()[i + 1].coords();
    total += mode == LengthMode::Integrated ? segment_length(m, a, b, q) : kob_distance(m, a, b, g);
  }
  return scale * total;
}

double curve_length_metric(const Domain& d, const SampledCurve& c, LengthMode mode, double scale) {
  OracleOptions opt;
  QuadratureOptions q;
  if (!d.has_closed_metric()) {
    opt.budget = light_budget();
    q = light_quadrature();
  }
  return curve_length_metric(KobayashiMetric(d, opt), c, mode, scale, q);
}

}  // namespace koblab
