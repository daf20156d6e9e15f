#pragma once

#include <vector>

#include "koblab/cvec.hpp"
#include "koblab/errors.hpp"

namespace koblab {

/// Polynomial map C^n_in -> C^n_out, f(z) = sum over terms of coef * z^idx.
class PolyMap {
 public:
  struct Term {
    std::vector<int> idx;
    CVec coef;
  };

  PolyMap(int n_in, int n_out, std::vector<Term> terms);

  static PolyMap identity(int n);
  static PolyMap constant(int n_in, CVec value);
  /// z -> A z + b with A given row-major (n_out x n_in).
  static PolyMap affine(int n_in, int n_out, const std::vector<cplx>& A, CVec b);

  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  const std::vector<Term>& terms() const { return terms_; }
  int degree() const;

  CVec operator()(std::span<const cplx> z) const;

  /// (this o g)(z) = this(g(z)); terms are collected by multi-index.
  PolyMap compose(const PolyMap& g) const;
  PolyMap power(int j) const;

 private:
  int n_in_, n_out_;
  std::vector<Term> terms_;
};

}  // namespace koblab
