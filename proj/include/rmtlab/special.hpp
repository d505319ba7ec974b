#pragma once

#include <cmath>
#include <complex>

#include "errors.hpp"

namespace rmtlab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSqrtPi = 1.77245385090551602730;
inline constexpr double kSqrt2 = 1.41421356237309504880;

// Largest |z| accepted by erf_complex / erfc_complex.
inline constexpr double kErfDomain = 30.0;

namespace detail {

// Maclaurin series in extended precision. Used where |Re z| is small enough that
// the cancellation factor exp(2 Re(z)^2) stays below ~1e6.
inline cplx erf_series(cplx zd) {
  using ld = long double;
  const std::complex<ld> z(zd.real(), zd.imag());
  const std::complex<ld> mz2 = -z * z;
  std::complex<ld> term = z, sum = z;
  const ld n_min = std::norm(z);
  for (int n = 1; n < 4000; ++n) {
    term *= mz2 / ld(n);
    const std::complex<ld> add = term / ld(2 * n + 1);
    sum += add;
    if (n > n_min && std::abs(add) <= 1e-21L * std::abs(sum)) break;
  }
  sum *= 2.0L / 1.772453850905516027298167483341145183L;
  return {double(sum.real()), double(sum.imag())};
}

// Laplace continued fraction for erfc, Re z > 0, evaluated by modified Lentz.
inline cplx erfc_cf(cplx z) {
  const double tiny = 1e-300;
  cplx f = z, C = z, D = 0.0;
  for (int k = 1; k < 20000; ++k) {
    const double a = 0.5 * k;
    D = z + a * D;
    if (std::abs(D) < tiny) D = tiny;
    D = 1.0 / D;
    C = z + a / C;
    if (std::abs(C) < tiny) C = tiny;
    const cplx delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-z * z) / (kSqrtPi * f);
}

inline bool use_series(cplx z) {
  return std::abs(z) <= 4.0 || std::abs(z.real()) <= 2.5;
}

inline void check_domain(cplx z) {
  if (!(std::abs(z) <= kErfDomain))
    throw DomainError("erf argument outside |z| <= 30");
}

}  // namespace detail

// Error function of a complex argument, |z| <= 30. Values whose magnitude
// exceeds the double range come back infinite.
inline cplx erf_complex(cplx z) {
  detail::check_domain(z);
  if (detail::use_series(z)) return detail::erf_series(z);
  if (z.real() > 0) return 1.0 - detail::erfc_cf(z);
  return detail::erfc_cf(-z) - 1.0;
}

// Complementary error function with relative accuracy in the right half plane tail.
inline cplx erfc_complex(cplx z) {
  detail::check_domain(z);
  if (detail::use_series(z)) return 1.0 - detail::erf_series(z);
  if (z.real() > 0) return detail::erfc_cf(z);
  return 2.0 - detail::erfc_cf(-z);
}

// |erf u|^2 - |erf v|^2 without cancellation when both are close to 1, which
// happens whenever u and v share a large real part of the same sign.
inline double erf_abs2_difference(cplx u, cplx v) {
  if (u.real() * v.real() > 0 && std::abs(u.real()) > 1.0 && std::abs(v.real()) > 1.0) {
    const double s = u.real() > 0 ? 1.0 : -1.0;
    const cplx a = erfc_complex(s * u), b = erfc_complex(s * v);
    // |1 - a|^2 - |1 - b|^2
    return -2.0 * a.real() + std::norm(a) + 2.0 * b.real() - std::norm(b);
  }
  return std::norm(erf_complex(u)) - std::norm(erf_complex(v));
}

}  // namespace rmtlab
