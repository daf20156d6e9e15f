#include "koblab/metric.hpp"

#include <cmath>

namespace koblab {

OptimizerBudget light_budget() {
  OptimizerBudget b;
  b.max_degree = 3;
  b.restarts = 2;
  b.max_iters = 300;
  b.boundary_angles = 64;
  b.polish = 0;
  return b;
}

KobayashiMetric::KobayashiMetric(Domain d, OracleOptions opt) : d_(std::move(d)), opt_(std::move(opt)) {
  opt_.budget.validate();
  if (!(opt_.point_quantum > 0.0) || !(opt_.direction_quantum > 0.0))
    throw ConfigError("memo quanta must be positive");
}

namespace {

// Unitary map of the block [from, to) sending a to |a| e_from; applied to every vector in `vs`.
void householder_to_axis(std::span<const cplx> a_in, std::size_t from, std::size_t to,
                         std::initializer_list<CVec*> vs) {
  const CVec a(a_in.begin() + static_cast<long>(from), a_in.begin() + static_cast<long>(to));
  const double an = norm(a);
  if (an == 0.0) return;
  const double th = std::arg(a[0]);
  const cplx alpha = -std::polar(an, th);
  CVec u = a;
  u[0] -= alpha;
  const double uu = norm2(u);
  const cplx fix = -std::polar(1.0, -th);
  for (CVec* v : vs) {
    std::span<cplx> blk(v->data() + from, to - from);
    if (uu > 0.0) {
      const cplx c = 2.0 * hdot(blk, u) / uu;
      for (std::size_t i = 0; i < blk.size(); ++i) blk[i] -= c * u[i];
    }
    blk[0] *= fix;
  }
}

// Real orthogonal version on real and imaginary parts separately.
void real_householder_to_axis(const std::vector<double>& a_in, std::size_t from, std::size_t to,
                              std::initializer_list<CVec*> vs) {
  std::vector<double> u(a_in.begin() + static_cast<long>(from), a_in.begin() + static_cast<long>(to));
  double an = 0.0;
  for (double x : u) an += x * x;
  an = std::sqrt(an);
  if (an == 0.0) return;
  const double alpha = u[0] >= 0.0 ? -an : an;
  u[0] -= alpha;
  double uu = 0.0;
  for (double x : u) uu += x * x;
  const double fix = alpha < 0.0 ? -1.0 : 1.0;
  for (CVec* v : vs) {
    std::span<cplx> blk(v->data() + from, to - from);
    if (uu > 0.0) {
      cplx c = 0.0;
      for (std::size_t i = 0; i < blk.size(); ++i) c += blk[i] * u[i];
      c *= 2.0 / uu;
      for (std::size_t i = 0; i < blk.size(); ++i) blk[i] -= c * u[i];
    }
    blk[0] *= fix;
  }
}

std::vector<double> re_part(const CVec& z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].real();
  return out;
}

std::vector<double> im_part(const CVec& z) {
  std::vector<double> out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = z[i].imag();
  return out;
}

double block_norm(const std::vector<double>& a, std::size_t from) {
  double s = 0.0;
  for (std::size_t i = from; i < a.size(); ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

constexpr double kTiny = 1e-12;

}  // namespace

std::pair<CVec, CVec> KobayashiMetric::canonicalize(std::span<const cplx> p_in, std::span<const cplx> v_in) const {
  CVec p(p_in.begin(), p_in.end()), v(v_in.begin(), v_in.end());
  const std::size_t n = p.size();
  if (d_.as<TubeSphere>()) {
    real_householder_to_axis(re_part(p), 0, n, {&p, &v});
    // conjugation fixes Re p, so it can precede the normalization of coordinates 1..k
    if (p[0].imag() < 0.0) {
      for (auto& z : p) z = std::conj(z);
      for (auto& z : v) z = std::conj(z);
    }
    if (n > 1) {
      if (block_norm(im_part(p), 1) > kTiny)
        real_householder_to_axis(im_part(p), 1, n, {&p, &v});
      else if (block_norm(re_part(v), 1) > kTiny)
        real_householder_to_axis(re_part(v), 1, n, {&p, &v});
      else
        real_householder_to_axis(im_part(v), 1, n, {&p, &v});
    }
  } else if (d_.as<TubeCircle>()) {
    const cplx ph = std::polar(1.0, -std::arg(p[0]));
    p[0] *= ph;
    v[0] *= ph;
    if (n > 1) {
      if (norm(std::span<const cplx>(p).subspan(1)) > kTiny)
        householder_to_axis(p, 1, n, {&p, &v});
      else
        householder_to_axis(v, 1, n, {&p, &v});
    }
  }
  // F(p, e^{i phi} v) = F(p, v): make the first dominant component of v real positive
  const double vn = norm(v);
  std::size_t lead = 0;
  double biggest = 0.0;
  for (std::size_t i = 0; i < n; ++i) biggest = std::max(biggest, std::abs(v[i]));
  while (std::abs(v[lead]) < 0.999 * biggest) ++lead;
  const cplx ph = std::polar(1.0 / vn, -std::arg(v[lead]));
  for (auto& z : v) z *= ph;
  return {std::move(p), std::move(v)};
}

double KobayashiMetric::estimate(std::span<const cplx> p, std::span<const cplx> v) const {
  ++calls_;
  return estimate_kob_royden(d_, CPoint(CVec(p.begin(), p.end())), TVector(CVec(v.begin(), v.end())), opt_.budget)
      .value;
}

double KobayashiMetric::operator()(std::span<const cplx> p, std::span<const cplx> v) const {
  const double vn = norm(v);
  if (vn == 0.0) return 0.0;
  if (closed()) return kob_royden_closed_raw(d_, p, v);
  if (!(d_.signed_distance(p) > 0.0)) throw DomainError("point not in domain");
  auto [cp, cv] = canonicalize(p, v);
  if (!opt_.memoize) return vn * estimate(cp, cv);

  std::vector<long long> key;
  key.reserve(4 * cp.size());
  CVec rp(cp.size()), rv(cv.size());
  auto q = [&key](double x, double h) {
    const long long k = std::llround(x / h);
    key.push_back(k);
    return static_cast<double>(k) * h;
  };
  for (std::size_t i = 0; i < cp.size(); ++i)
    rp[i] = {q(cp[i].real(), opt_.point_quantum), q(cp[i].imag(), opt_.point_quantum)};
  for (std::size_t i = 0; i < cv.size(); ++i)
    rv[i] = {q(cv[i].real(), opt_.direction_quantum), q(cv[i].imag(), opt_.direction_quantum)};
  if (!(d_.signed_distance(rp) > 0.0) || norm(rv) == 0.0) return vn * estimate(cp, cv);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      ++hits_;
      return vn * it->second;
    }
  }
  const double val = estimate(rp, scaled(rv, 1.0 / norm(rv)));
  {
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(key, val);
  }
  return vn * val;
}

}  // namespace koblab
