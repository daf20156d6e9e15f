#pragma once

// Small helpers over spans of complex numbers. Everything in the library that
// touches coordinates of C^n goes through these.

#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace koblab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline double norm2(std::span<const cplx> a) {
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return s;
}

inline double norm(std::span<const cplx> a) { return std::sqrt(norm2(a)); }

/// Hermitian product <a, b> = sum a_i conj(b_i).
inline cplx hdot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

inline double distance(std::span<const cplx> a, std::span<const cplx> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

inline CVec sub(std::span<const cplx> a, std::span<const cplx> b) {
  CVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline CVec add(std::span<const cplx> a, std::span<const cplx> b) {
  CVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline CVec scaled(std::span<const cplx> a, cplx s) {
  CVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * s;
  return out;
}

/// a + t * b
inline CVec axpy(std::span<const cplx> a, double t, std::span<const cplx> b) {
  CVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * b[i];
  return out;
}

inline CVec lerp(std::span<const cplx> a, std::span<const cplx> b, double t) {
  CVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
  return out;
}

inline bool all_finite(std::span<const cplx> a) {
  for (const auto& x : a)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  return true;
}

/// "(x+yi, ...)" with six significant digits, for error messages.
inline std::string format_point(std::span<const cplx> z) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) os << ", ";
    os << z[i].real() << (z[i].imag() < 0 ? "-" : "+") << std::abs(z[i].imag()) << "i";
  }
  os << ")";
  return os.str();
}

}  // namespace koblab
