#include "koblab/hausdorff.hpp"

#include <algorithm>
#include <cmath>

namespace koblab {

const char* metric_name(MetricKind k) { return k == MetricKind::Euclidean ? "euclidean" : "kobayashi"; }

MeasureOptions default_measure_options(const Domain& d, double scale) {
  MeasureOptions opt;
  opt.scale = scale;
  if (!d.has_closed_metric()) {
    opt.oracle.budget = light_budget();
    opt.quadrature = light_quadrature();
  }
  return opt;
}

PieceMetric::PieceMetric(const Domain& d, MetricKind kind, const MeasureOptions& opt)
    : kind_(kind), oracle_(d, opt.oracle), quad_(opt.quadrature), scale_(opt.scale) {
  if (!(scale_ > 0.0)) throw ConfigError("scale must be positive");
}

double PieceMetric::operator()(std::span<const cplx> a, std::span<const cplx> b) const {
  if (kind_ == MetricKind::Euclidean) return distance(a, b);
  if (distance(a, b) == 0.0) return 0.0;
  if (has_closed_distance(oracle_.domain())) return scale_ * kob_distance_closed_raw(oracle_.domain(), a, b);
  return scale_ * segment_length(oracle_, a, b, quad_);
}

namespace {

double diameter(const PieceMetric& dist, const std::vector<CVec>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, dist(pts[i], pts[j]));
  return best;
}

void validate_schedule(const std::vector<double>& eps) {
  if (eps.empty()) throw ConfigError("epsilon schedule is empty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw ConfigError("epsilon values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw ConfigError("epsilon schedule must be strictly decreasing");
  }
}

void cover_segment(const PieceMetric& dist, const CVec& a, const CVec& b, int k, double eps, int depth, int max_depth,
                   std::vector<CoverPiece>& out) {
  const CVec mid = lerp(a, b, 0.5);
  const double diam = diameter(dist, {a, mid, b});
  if (diam < eps) {
    out.push_back({diam, std::pow(diam, k)});
    return;
  }
  if (depth >= max_depth) throw BudgetError("epsilon unreachable at budget");
  cover_segment(dist, a, mid, k, eps, depth + 1, max_depth, out);
  cover_segment(dist, mid, b, k, eps, depth + 1, max_depth, out);
}

void cover_triangle(const PieceMetric& dist, const CVec& a, const CVec& b, const CVec& c, int k, double eps,
                    int depth, int max_depth, std::vector<CoverPiece>& out) {
  const CVec ab = lerp(a, b, 0.5), bc = lerp(b, c, 0.5), ca = lerp(c, a, 0.5);
  const double diam = diameter(dist, {a, b, c, ab, bc, ca});
  if (diam < eps) {
    out.push_back({diam, std::pow(diam, k)});
    return;
  }
  if (depth >= max_depth) throw BudgetError("epsilon unreachable at budget");
  cover_triangle(dist, a, ab, ca, k, eps, depth + 1, max_depth, out);
  cover_triangle(dist, ab, b, bc, k, eps, depth + 1, max_depth, out);
  cover_triangle(dist, ca, bc, c, k, eps, depth + 1, max_depth, out);
  cover_triangle(dist, ab, bc, ca, k, eps, depth + 1, max_depth, out);
}

MeasureReport finish(int k, MetricKind metric, const MeasureOptions& opt, std::vector<CoverEstimate> sched) {
  MeasureReport r;
  r.k = k;
  r.metric = metric;
  r.scale = metric == MetricKind::Kobayashi ? opt.scale : 1.0;
  for (auto& c : sched) {
    c.total = 0.0;
    for (const auto& p : c.pieces) c.total += p.contribution;
    r.value = std::max(r.value, c.total);
  }
  r.schedule = std::move(sched);
  return r;
}

}  // namespace

MeasureReport hausdorff_k_measure(const Domain& d, const SampledCurve& c, int k, MetricKind metric,
                                  const std::vector<double>& epsilon_schedule, const MeasureOptions& opt) {
  if (k != 1) throw ConfigError("curves support k = 1 only");
  validate_schedule(epsilon_schedule);
  require_inside(d, c);
  const PieceMetric dist(d, metric, opt);
  std::vector<CoverEstimate> sched;
  for (double eps : epsilon_schedule) {
    CoverEstimate ce;
    ce.epsilon = eps;
    ce.k = k;
    for (std::size_t i = 0; i + 1 < c.points().size(); ++i)
      cover_segment(dist, c.points()[i].coords(), c.points()[i + 1].coords(), k, eps, 0, opt.max_depth, ce.pieces);
    sched.push_back(std::move(ce));
  }
  return finish(k, metric, opt, std::move(sched));
}

MeasureReport hausdorff_k_measure(const Domain& d, const SphereMeshMap& mesh, int k, MetricKind metric,
                                  const std::vector<double>& epsilon_schedule, const MeasureOptions& opt) {
  if (k != mesh.k()) throw ConfigError("measure dimension k must equal the mesh dimension");
  validate_schedule(epsilon_schedule);
  require_inside(d, mesh);
  const PieceMetric dist(d, metric, opt);
  const auto& im = mesh.images();
  std::vector<CoverEstimate> sched;
  for (double eps : epsilon_schedule) {
    CoverEstimate ce;
    ce.epsilon = eps;
    ce.k = k;
    for (const auto& s : mesh.simplices()) {
      if (k == 1)
        cover_segment(dist, im[s[0]].coords(), im[s[1]].coords(), k, eps, 0, opt.max_depth, ce.pieces);
      else
        cover_triangle(dist, im[s[0]].coords(), im[s[1]].coords(), im[s[2]].coords(), k, eps, 0, opt.max_depth,
                       ce.pieces);
    }
    sched.push_back(std::move(ce));
  }
  return finish(k, metric, opt, std::move(sched));
}

double sphere_map_measure_upper(const PieceMetric& dist, const SphereMeshMap& mesh, int k) {
  if (k != mesh.k()) throw ConfigError("measure dimension k must equal the mesh dimension");
  const auto& im = mesh.images();
  double total = 0.0;
  for (const auto& s : mesh.simplices()) {
    std::vector<CVec> pts;
    for (int a = 0; a <= k; ++a) pts.push_back(im[s[a]].coords());
    for (int a = 0; a <= k; ++a)
      for (int b = a + 1; b <= k; ++b) pts.push_back(lerp(im[s[a]].coords(), im[s[b]].coords(), 0.5));
    total += std::pow(diameter(dist, pts), k);
  }
  return total;
}

double sphere_map_measure_upper(const Domain& d, const SphereMeshMap& mesh, int k, MetricKind metric,
                                const MeasureOptions& opt) {
  require_inside(d, mesh);
  return sphere_map_measure_upper(PieceMetric(d, metric, opt), mesh, k);
}

double flat_calibration(const SphereMeshMap& mesh) {
  if (mesh.k() != 2) throw ConfigError("flat calibration needs a triangle mesh");
  const auto& im = mesh.images();
  double diam2 = 0.0, area = 0.0;
  for (const auto& s : mesh.simplices()) {
    const CVec& a = im[s[0]].coords();
    const CVec& b = im[s[1]].coords();
    const CVec& c = im[s[2]].coords();
    const double ab = distance(a, b), bc = distance(b, c), ca = distance(c, a);
    diam2 += std::pow(std::max({ab, bc, ca}), 2);
    const double h = 0.5 * (ab + bc + ca);
    area += std::sqrt(std::max(0.0, h * (h - ab) * (h - bc) * (h - ca)));
  }
  if (!(area > 0.0)) throw ConfigError("mesh has no area");
  return diam2 / area;
}

}  // namespace koblab
