#include "koblab/polymap.hpp"

#include <algorithm>
#include <map>

namespace koblab {

namespace {

using Poly = std::map<std::vector<int>, cplx>;  // one output coordinate

Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ia, ca] : a)
    for (const auto& [ib, cb] : b) {
      std::vector<int> idx(ia.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = ia[i] + ib[i];
      out[idx] += ca * cb;
    }
  return out;
}

void add_scaled(Poly& acc, const Poly& p, cplx s) {
  for (const auto& [i, c] : p) acc[i] += s * c;
}

}  // namespace

PolyMap::PolyMap(int n_in, int n_out, std::vector<Term> terms) : n_in_(n_in), n_out_(n_out), terms_(std::move(terms)) {
  if (n_in_ < 1 || n_out_ < 1) throw ConfigError("polynomial map dimensions must be >= 1");
  for (const auto& t : terms_) {
    if (t.idx.size() != static_cast<std::size_t>(n_in_)) throw ConfigError("term multi-index has wrong length");
    if (t.coef.size() != static_cast<std::size_t>(n_out_)) throw ConfigError("term coefficient has wrong length");
    if (std::any_of(t.idx.begin(), t.idx.end(), [](int e) { return e < 0; }))
      throw ConfigError("multi-index entries must be nonnegative");
    if (!all_finite(t.coef)) throw ConfigError("coefficients must be finite");
  }
}

PolyMap PolyMap::identity(int n) {
  std::vector<Term> terms;
  for (int i = 0; i < n; ++i) {
    Term t{std::vector<int>(static_cast<std::size_t>(n), 0), CVec(static_cast<std::size_t>(n))};
    t.idx[static_cast<std::size_t>(i)] = 1;
    t.coef[static_cast<std::size_t>(i)] = 1.0;
    terms.push_back(std::move(t));
  }
  return PolyMap(n, n, std::move(terms));
}

PolyMap PolyMap::constant(int n_in, CVec value) {
  const int n_out = static_cast<int>(value.size());
  return PolyMap(n_in, n_out, {Term{std::vector<int>(static_cast<std::size_t>(n_in), 0), std::move(value)}});
}

PolyMap PolyMap::affine(int n_in, int n_out, const std::vector<cplx>& A, CVec b) {
  if (A.size() != static_cast<std::size_t>(n_in * n_out)) throw ConfigError("affine matrix has wrong size");
  std::vector<Term> terms{Term{std::vector<int>(static_cast<std::size_t>(n_in), 0), std::move(b)}};
  for (int j = 0; j < n_in; ++j) {
    Term t{std::vector<int>(static_cast<std::size_t>(n_in), 0), CVec(static_cast<std::size_t>(n_out))};
    t.idx[static_cast<std::size_t>(j)] = 1;
    for (int i = 0; i < n_out; ++i) t.coef[static_cast<std::size_t>(i)] = A[static_cast<std::size_t>(i * n_in + j)];
    terms.push_back(std::move(t));
  }
  return PolyMap(n_in, n_out, std::move(terms));
}

int PolyMap::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int e : t.idx) s += e;
    if (norm(t.coef) > 0.0) d = std::max(d, s);
  }
  return d;
}

CVec PolyMap::operator()(std::span<const cplx> z) const {
  if (z.size() != static_cast<std::size_t>(n_in_)) throw ConfigError("polynomial map applied to wrong dimension");
  CVec out(static_cast<std::size_t>(n_out_));
  for (const auto& t : terms_) {
    cplx mono = 1.0;
    for (std::size_t i = 0; i < t.idx.size(); ++i)
      for (int e = 0; e < t.idx[i]; ++e) mono *= z[i];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.coef[i] * mono;
  }
  return out;
}

PolyMap PolyMap::compose(const PolyMap& g) const {
  if (g.n_out() != n_in_) throw ConfigError("composition dimension mismatch");
  // coordinates of g as polynomials
  std::vector<Poly> gc(static_cast<std::size_t>(n_in_));
  for (const auto& t : g.terms())
    for (int i = 0; i < n_in_; ++i) gc[static_cast<std::size_t>(i)][t.idx] += t.coef[static_cast<std::size_t>(i)];
  std::vector<Poly> result(static_cast<std::size_t>(n_out_));
  std::map<std::vector<int>, Poly> cache;  // monomial of this map evaluated on g
  const Poly one{{std::vector<int>(static_cast<std::size_t>(g.n_in()), 0), 1.0}};
  for (const auto& t : terms_) {
    auto it = cache.find(t.idx);
    if (it == cache.end()) {
      Poly m = one;
      for (std::size_t i = 0; i < t.idx.size(); ++i)
        for (int e = 0; e < t.idx[i]; ++e) m = multiply(m, gc[i]);
      it = cache.emplace(t.idx, std::move(m)).first;
    }
    for (int o = 0; o < n_out_; ++o) add_scaled(result[static_cast<std::size_t>(o)], it->second, t.coef[static_cast<std::size_t>(o)]);
  }
  std::map<std::vector<int>, CVec> merged;
  for (int o = 0; o < n_out_; ++o)
    for (const auto& [idx, c] : result[static_cast<std::size_t>(o)]) {
      auto& v = merged[idx];
      if (v.empty()) v.assign(static_cast<std::size_t>(n_out_), 0.0);
      v[static_cast<std::size_t>(o)] = c;
    }
  std::vector<Term> terms;
  for (auto& [idx, c] : merged)
    if (norm(c) > 0.0) terms.push_back({idx, std::move(c)});
  if (terms.empty()) terms.push_back({std::vector<int>(static_cast<std::size_t>(g.n_in()), 0), CVec(static_cast<std::size_t>(n_out_))});
  return PolyMap(g.n_in(), n_out_, std::move(terms));
}

PolyMap PolyMap::power(int j) const {
  if (j < 1) throw ConfigError("iterate count must be >= 1");
  if (n_in_ != n_out_) throw ConfigError("only self-maps can be iterated");
  PolyMap out = *this;
  for (int i = 1; i < j; ++i) out = compose(out);
  return out;
}

}  // namespace koblab
