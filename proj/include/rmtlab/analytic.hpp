#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ensembles.hpp"
#include "errors.hpp"
#include "special.hpp"

namespace rmtlab {

// ---------------------------------------------------------------------------
// Correlation kernels

// Bulk truncated two-point function of a determinantal plasma at beta = 2.
inline double bulk_rho2T(double r, double rho) { return -rho * rho * std::exp(-kPi * rho * r * r); }

// Edge density profile; the bulk sits at y -> +infinity.
inline cplx edge_profile_H(cplx y) {
  // erf(x) rounds to +-1 for real |x| > 6.
  if (y.imag() == 0.0 && std::abs(y.real()) > 6.0) return y.real() > 0 ? 1.0 / kPi : 0.0;
  return (1.0 + erf_complex(kSqrt2 * y)) / (2.0 * kPi);
}

inline double edge_profile_H_derivative(double y) {
  return kSqrt2 / (kPi * kSqrtPi) * std::exp(-2.0 * y * y);
}

inline double edge_rho2T(double x1, double y1, double x2, double y2) {
  const double dx = x1 - x2, dy = y1 - y2;
  const cplx u = 0.5 * cplx(y1 + y2, dx);
  return -std::exp(-dx * dx - dy * dy) * std::norm(edge_profile_H(u));
}

inline double edge_rho2(double x1, double y1, double x2, double y2) {
  return edge_profile_H(y1).real() * edge_profile_H(y2).real() + edge_rho2T(x1, y1, x2, y2);
}

// Leading large-separation form of edge_rho2T.
inline double edge_rho2T_asymptotic(double dx, double y1, double y2) {
  return -edge_profile_H_derivative(y1) * edge_profile_H_derivative(y2) / (4.0 * dx * dx);
}

inline cplx rq_f(cplx w, cplx z) {
  return cplx(0.0, 1.0 / std::sqrt(2.0 * kPi)) * std::exp(0.5 * (w * w + z * z)) *
         erf_complex((z - w) / kSqrt2);
}

// rq_f(w, z) * rq_f(w2, z2) * exp(extra), with all exponentials combined first so
// that large Gaussian factors cancel before they can overflow.
inline cplx rq_f_product(cplx w, cplx z, cplx w2, cplx z2, cplx extra) {
  const cplx e = 0.5 * (w * w + z * z + w2 * w2 + z2 * z2) + extra;
  return -1.0 / (2.0 * kPi) * std::exp(e) * erf_complex((z - w) / kSqrt2) *
         erf_complex((z2 - w2) / kSqrt2);
}

// One-point density near the real axis of the quaternion Ginibre ensemble.
inline double rq_rho1(double x, double y) {
  if (y < 0) throw DomainError("rq_rho1 needs y >= 0");
  if (y > 5.0) {
    // erfi(sqrt2 y) overflows further out; sum (1/pi) sum_k (2k-1)!! / (4y^2)^k to its smallest term.
    const double q = 1.0 / (4.0 * y * y);
    double term = 1.0, acc = 1.0;
    for (int k = 1; k < 200; ++k) {
      const double next = term * (2 * k - 1) * q;
      if (next >= term || next < 1e-17 * acc) break;
      term = next;
      acc += term;
    }
    return acc / kPi;
  }
  const cplx z(x, y);
  const cplx e = -(x * x + y * y) + 0.5 * (z * z + std::conj(z) * std::conj(z));
  const cplx f = cplx(0.0, 1.0 / std::sqrt(2.0 * kPi)) * std::exp(e) *
                 erf_complex((std::conj(z) - z) / kSqrt2);
  return 2.0 * y * f.real();
}

// Unsimplified product form, complex, for residue checks against rq_rho2T.
inline cplx rq_rho2T_product_form(cplx z1, cplx z2) {
  const cplx e = -std::norm(z1) - std::norm(z2);
  const cplx s = rq_f_product(z1, std::conj(z2), z2, std::conj(z1), e) +
                 rq_f_product(z1, z2, std::conj(z1), std::conj(z2), e);
  return -4.0 * z1.imag() * z2.imag() * s;
}

// Truncated two-point function near the real axis of the quaternion Ginibre
// ensemble. The two products collapse to
//   (2/pi) y1 y2 exp(-2 y1^2 - 2 y2^2) (|erf((z2-z1)/sqrt2)|^2 - |erf((conj z2-z1)/sqrt2)|^2),
// which is evaluated without cancellation far along the axis.
inline double rq_rho2T(cplx z1, cplx z2) {
  const double y1 = z1.imag(), y2 = z2.imag();
  if (y1 < 0 || y2 < 0) throw DomainError("rq_rho2T needs points in the closed upper half plane");
  const double d = erf_abs2_difference((z2 - z1) / kSqrt2, (std::conj(z2) - z1) / kSqrt2);
  return 2.0 / kPi * y1 * y2 * std::exp(-2.0 * (y1 * y1 + y2 * y2)) * d;
}

// Mobius-invariant limit of the truncated CSE correlations: pi^-k det[(1 - z_j conj z_l)^-2].
inline double cse_limit_rhok(const std::vector<cplx>& z) {
  const auto k = static_cast<Eigen::Index>(z.size());
  if (k < 1) throw ParameterError("cse_limit_rhok needs at least one point");
  Eigen::MatrixXcd K(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!(std::abs(z[j]) < 1.0)) throw DomainError("cse_limit_rhok needs |z| < 1");
    for (Eigen::Index l = 0; l < k; ++l) {
      const cplx d = 1.0 - z[j] * std::conj(z[l]);
      K(j, l) = 1.0 / (d * d);
    }
  }
  return K.determinant().real() / std::pow(kPi, double(k));
}

// Exact finite-N one-point density of the CSE truncation:
//   (1/pi) sum_{p=0}^{2N-1} c_p |z|^{2p},  c_p = (p+1)(2N-p)/(2N-1-2p).
inline double cse_trunc_rho1(cplx z, int N) {
  if (N < 1) throw ParameterError("cse_trunc_rho1 needs N >= 1");
  const double s = std::norm(z);
  if (!(s < 1.0)) throw DomainError("cse_trunc_rho1 needs |z| < 1");
  double acc = 0.0;
  for (int p = 2 * N - 1; p >= 0; --p)
    acc = acc * s + double(p + 1) * double(2 * N - p) / double(2 * N - 1 - 2 * p);
  return acc / kPi;
}

// Number of eigenvalues with |z|^2 < s under cse_trunc_rho1.
inline double cse_trunc_mass(double s, int N) {
  s = std::clamp(s, 0.0, 1.0);
  double acc = 0.0;
  for (int p = 2 * N - 1; p >= 0; --p)
    acc = acc * s + double(2 * N - p) / double(2 * N - 1 - 2 * p);
  return acc * s;
}

// ---------------------------------------------------------------------------
// Asymptotic one-body weights of product ensembles, x = |z|^2.

enum class ProductKind { Ginibre, Spherical, Truncated };

inline double product_weight_asymptotic(double x, ProductKind kind, int m, double N_or_n) {
  if (x < 0) throw DomainError("product weight needs x >= 0");
  if (m < 1) throw ParameterError("product weight needs m >= 1");
  const double t = m * std::pow(x, 1.0 / m);
  switch (kind) {
    case ProductKind::Ginibre: return std::exp(-t);
    case ProductKind::Spherical: return std::pow(1.0 + t, -N_or_n);
    case ProductKind::Truncated: return t >= 1.0 ? 0.0 : std::pow(1.0 - t, N_or_n);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Predicted one-point densities, in the sampling frame of the full
// (conjugation-closed) spectrum unless noted.

enum class ModelKind {
  UniformDisk,        // 1/(pi scale^2) on |z| < scale sqrt(N)
  Ellipse,            // 1/(pi (1 - tau^2)) inside semi-axes sqrt(N)(1 +- tau)
  Annulus,            // 1/pi on sqrt(n - N) < |z| < sqrt(n)
  SphereProjected,    // n / (pi (1 + |z|^2)^2) outside r*, r*^2 = n/N - 1
  Pseudosphere,       // n / (pi (1 - |z|^2)^2) on |z| < R; with M, (M-n) / ... on R- < |z| < R+
  ProductGinibre,     // |w|^{2/m-2} / (m pi) on |w| < 1, w = z / N^{m/2}, mass N
  ProductSpherical,   // N |z|^{2/m-2} / (pi m (1 + |z|^{2/m})^2)
  ProductTruncated,   // n |z|^{2/m-2} / (pi m (1 - |z|^{2/m})^2) on |z| < R^m
  RqGinibreProfile,   // rq_rho1, local
  CseTruncExact,      // cse_trunc_rho1
  CseTruncLimit,      // 1 / (pi (1 - |z|^2)^2), local
  EdgeProfile,        // H(Im z), local
};

inline std::string_view model_name(ModelKind k) {
  switch (k) {
    case ModelKind::UniformDisk: return "uniform_disk";
    case ModelKind::Ellipse: return "ellipse";
    case ModelKind::Annulus: return "annulus";
    case ModelKind::SphereProjected: return "sphere_projected";
    case ModelKind::Pseudosphere: return "pseudosphere";
    case ModelKind::ProductGinibre: return "product_ginibre";
    case ModelKind::ProductSpherical: return "product_spherical";
    case ModelKind::ProductTruncated: return "product_truncated";
    case ModelKind::RqGinibreProfile: return "rq_ginibre_profile";
    case ModelKind::CseTruncExact: return "cse_trunc_exact";
    case ModelKind::CseTruncLimit: return "cse_trunc_limit";
    case ModelKind::EdgeProfile: return "edge_profile";
  }
  return "?";
}

struct DensityModel {
  ModelKind kind = ModelKind::UniformDisk;
  double N = 1, n = 0, M = 0, m = 1, tau = 0, scale = 1;

  void validate() const {
    auto fail = [&](const char* why) {
      throw ParameterError(std::string(model_name(kind)) + ": " + why);
    };
    switch (kind) {
      case ModelKind::UniformDisk:
        if (!(N > 0 && scale > 0)) fail("needs N > 0 and scale > 0");
        break;
      case ModelKind::Ellipse:
        if (!(N > 0 && tau >= 0 && tau < 1)) fail("needs N > 0 and 0 <= tau < 1");
        break;
      case ModelKind::Annulus:
      case ModelKind::SphereProjected:
        if (!(N > 0 && n >= N)) fail("needs n >= N > 0");
        break;
      case ModelKind::Pseudosphere:
        if (!(N > 0 && n > 0)) fail("needs N > 0 and n > 0");
        if (M > 0 && !(n >= N && M > n)) fail("rectangular variant needs M > n >= N");
        break;
      case ModelKind::ProductGinibre:
      case ModelKind::ProductSpherical:
        if (!(N > 0 && m >= 1)) fail("needs N > 0 and m >= 1");
        break;
      case ModelKind::ProductTruncated:
        if (!(N > 0 && n > 0 && m >= 1)) fail("needs N, n > 0 and m >= 1");
        break;
      case ModelKind::CseTruncExact:
        if (!(N >= 1)) fail("needs N >= 1");
        break;
      default:
        break;
    }
  }

  static DensityModel uniform_disk(double N, double scale = 1.0) {
    return {ModelKind::UniformDisk, N, 0, 0, 1, 0, scale};
  }
  static DensityModel ellipse(double N, double tau) { return {ModelKind::Ellipse, N, 0, 0, 1, tau, 1}; }
  static DensityModel annulus(double n, double N) { return {ModelKind::Annulus, N, n, 0, 1, 0, 1}; }
  static DensityModel sphere_projected(double n, double N) {
    return {ModelKind::SphereProjected, N, n, 0, 1, 0, 1};
  }
  static DensityModel pseudosphere(double n, double N, double M = 0) {
    return {ModelKind::Pseudosphere, N, n, M, 1, 0, 1};
  }
  static DensityModel product_ginibre(int m, double N) { return {ModelKind::ProductGinibre, N, 0, 0, double(m), 0, 1}; }
  static DensityModel product_spherical(int m, double N) {
    return {ModelKind::ProductSpherical, N, 0, 0, double(m), 0, 1};
  }
  static DensityModel product_truncated(int m, double n, double N) {
    return {ModelKind::ProductTruncated, N, n, 0, double(m), 0, 1};
  }
  static DensityModel of(ModelKind k, double N = 1) { return {k, N, 0, 0, 1, 0, 1}; }
};

// Inner and outer support radii (outer may be infinite).
struct Support {
  double inner = 0.0;
  double outer = std::numeric_limits<double>::infinity();
};

inline Support support_radii(const DensityModel& d) {
  d.validate();
  switch (d.kind) {
    case ModelKind::UniformDisk: return {0.0, d.scale * std::sqrt(d.N)};
    case ModelKind::Ellipse: return {0.0, std::sqrt(d.N) * (1 + d.tau)};
    case ModelKind::Annulus: return {std::sqrt(d.n - d.N), std::sqrt(d.n)};
    case ModelKind::SphereProjected: return {std::sqrt(d.n / d.N - 1.0), INFINITY};
    case ModelKind::Pseudosphere:
      if (d.M > 0) return {std::sqrt((d.n - d.N) / (d.M - d.N)), std::sqrt(d.n / d.M)};
      return {0.0, std::sqrt(d.N / (d.n + d.N))};
    case ModelKind::ProductGinibre: return {0.0, std::pow(d.N, 0.5 * d.m)};
    case ModelKind::ProductSpherical: return {0.0, INFINITY};
    case ModelKind::ProductTruncated: return {0.0, std::pow(d.N / (d.n + d.N), 0.5 * d.m)};
    case ModelKind::CseTruncExact:
    case ModelKind::CseTruncLimit: return {0.0, 1.0};
    default: return {0.0, INFINITY};
  }
}

// Total mass over the support; empty for local profiles that do not integrate.
inline std::optional<double> total_mass(const DensityModel& d) {
  switch (d.kind) {
    case ModelKind::RqGinibreProfile:
    case ModelKind::CseTruncLimit:
    case ModelKind::EdgeProfile: return std::nullopt;
    default: return d.N;
  }
}

inline bool is_radial(const DensityModel& d) {
  return d.kind != ModelKind::Ellipse && d.kind != ModelKind::RqGinibreProfile &&
         d.kind != ModelKind::EdgeProfile;
}

inline double predicted_density(const DensityModel& d, cplx z) {
  d.validate();
  const double r = std::abs(z), s = r * r;
  const Support sup = support_radii(d);
  const bool inside = r >= sup.inner && r < sup.outer;
  switch (d.kind) {
    case ModelKind::UniformDisk: return inside ? 1.0 / (kPi * d.scale * d.scale) : 0.0;
    case ModelKind::Ellipse: {
      const double a = std::sqrt(d.N) * (1 + d.tau), b = std::sqrt(d.N) * (1 - d.tau);
      const double q = std::pow(z.real() / a, 2) + std::pow(z.imag() / b, 2);
      return q < 1.0 ? 1.0 / (kPi * (1 - d.tau * d.tau)) : 0.0;
    }
    case ModelKind::Annulus: return inside ? 1.0 / kPi : 0.0;
    case ModelKind::SphereProjected: return inside ? d.n / (kPi * std::pow(1 + s, 2)) : 0.0;
    case ModelKind::Pseudosphere: {
      const double pref = d.M > 0 ? d.M - d.n : d.n;
      return inside ? pref / (kPi * std::pow(1 - s, 2)) : 0.0;
    }
    case ModelKind::ProductGinibre: {
      if (!inside) return 0.0;
      const double R = sup.outer, w = r / R;
      return d.N * std::pow(w, 2.0 / d.m - 2.0) / (d.m * kPi * R * R);
    }
    case ModelKind::ProductSpherical: {
      const double u = std::pow(r, 2.0 / d.m);
      return d.N * std::pow(r, 2.0 / d.m - 2.0) / (kPi * d.m * std::pow(1 + u, 2));
    }
    case ModelKind::ProductTruncated: {
      if (!inside) return 0.0;
      const double u = std::pow(r, 2.0 / d.m);
      return d.n * std::pow(r, 2.0 / d.m - 2.0) / (kPi * d.m * std::pow(1 - u, 2));
    }
    case ModelKind::RqGinibreProfile: return rq_rho1(z.real(), std::abs(z.imag()));
    case ModelKind::CseTruncExact: return inside ? cse_trunc_rho1(z, int(d.N)) : 0.0;
    case ModelKind::CseTruncLimit: return inside ? 1.0 / (kPi * std::pow(1 - s, 2)) : 0.0;
    case ModelKind::EdgeProfile: return edge_profile_H(z.imag()).real();
  }
  return 0.0;
}

// Closed-form number of eigenvalues with r_lo <= |z| < r_hi for radial models.
inline double radial_mass(const DensityModel& d, double r_lo, double r_hi) {
  d.validate();
  if (!is_radial(d)) throw ParameterError(std::string(model_name(d.kind)) + " is not radial");
  const Support sup = support_radii(d);
  // Cumulative mass inside radius r.
  auto cum = [&](double r) -> double {
    r = std::clamp(r, sup.inner, sup.outer);
    const double s = r * r;
    switch (d.kind) {
      case ModelKind::UniformDisk: return s / (d.scale * d.scale);
      case ModelKind::Annulus: return s - (d.n - d.N);
      case ModelKind::SphereProjected: {
        const double s0 = sup.inner * sup.inner;
        if (std::isinf(s)) return d.n / (1 + s0);
        return d.n * (1.0 / (1 + s0) - 1.0 / (1 + s));
      }
      case ModelKind::Pseudosphere: {
        const double pref = d.M > 0 ? d.M - d.n : d.n;
        const double s0 = sup.inner * sup.inner;
        return pref * (s / (1 - s) - s0 / (1 - s0));
      }
      case ModelKind::ProductGinibre: return d.N * std::pow(r / sup.outer, 2.0 / d.m);
      case ModelKind::ProductSpherical: {
        if (std::isinf(r)) return d.N;
        const double u = std::pow(r, 2.0 / d.m);
        return d.N * u / (1 + u);
      }
      case ModelKind::ProductTruncated: {
        const double u = std::pow(r, 2.0 / d.m);
        return d.n * u / (1 - u);
      }
      case ModelKind::CseTruncExact: return cse_trunc_mass(s, int(d.N));
      case ModelKind::CseTruncLimit:
        if (s >= 1.0) return INFINITY;
        return s / (1 - s);
      default: break;
    }
    throw ParameterError("radial mass unavailable");
  };
  if (r_hi <= r_lo) return 0.0;
  return cum(r_hi) - cum(r_lo);
}

// Model matching the leading-order density of a spec's full spectrum, when one
// is known in closed form.
inline std::optional<DensityModel> density_model_for(const EnsembleSpec& s) {
  const double b = blowup(s.field);
  const double N = s.N * b, n = s.n * b, M = s.M * b;
  switch (s.family) {
    case Family::Ginibre: return DensityModel::uniform_disk(N);
    case Family::Elliptic: return DensityModel::ellipse(N, s.tau);
    case Family::Spherical: return DensityModel::sphere_projected(N, N);
    case Family::TruncatedUnitary: return DensityModel::pseudosphere(n, N);
    case Family::Induced:
      switch (s.base) {
        case Family::Ginibre: return DensityModel::annulus(n, N);
        case Family::Spherical: return DensityModel::sphere_projected(n, N);
        case Family::TruncatedUnitary: return DensityModel::pseudosphere(n, N, M);
        default: return std::nullopt;
      }
    case Family::Product:
      switch (s.base) {
        case Family::Ginibre: return DensityModel::product_ginibre(s.m, N);
        case Family::Spherical: return DensityModel::product_spherical(s.m, N);
        case Family::TruncatedUnitary: return DensityModel::product_truncated(s.m, n, N);
        default: return std::nullopt;
      }
    case Family::SelfDual: return DensityModel::uniform_disk(s.N, 2.0 * s.sigma);
    case Family::CseTruncation: return DensityModel{ModelKind::CseTruncExact, double(s.N)};
  }
  return std::nullopt;
}

}  // namespace rmtlab
