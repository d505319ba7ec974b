#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "errors.hpp"
#include "rng.hpp"

namespace rmtlab {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Field : int { Real = 1, Complex = 2, Quaternion = 4 };

constexpr int beta(Field f) { return static_cast<int>(f); }
// Rows of complex storage per row of the field: quaternions are 2x2 blocks.
constexpr int blowup(Field f) { return f == Field::Quaternion ? 2 : 1; }

inline Field field_from_beta(int b) {
  switch (b) {
    case 1: return Field::Real;
    case 2: return Field::Complex;
    case 4: return Field::Quaternion;
  }
  throw ParameterError("beta must be 1, 2 or 4, got " + std::to_string(b));
}

enum class Family {
  Ginibre,
  Elliptic,
  Spherical,
  TruncatedUnitary,
  Induced,
  Product,
  SelfDual,
  CseTruncation,
};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::Ginibre: return "ginibre";
    case Family::Elliptic: return "elliptic";
    case Family::Spherical: return "spherical";
    case Family::TruncatedUnitary: return "truncated_unitary";
    case Family::Induced: return "induced";
    case Family::Product: return "product";
    case Family::SelfDual: return "selfdual";
    case Family::CseTruncation: return "cse_truncation";
  }
  return "?";
}

inline Family family_from_name(std::string_view s) {
  for (Family f : {Family::Ginibre, Family::Elliptic, Family::Spherical, Family::TruncatedUnitary,
                   Family::Induced, Family::Product, Family::SelfDual, Family::CseTruncation})
    if (family_name(f) == s) return f;
  throw ParameterError("unknown ensemble family '" + std::string(s) + "'");
}

// Declarative description of one ensemble. `base` names the rectangular draw
// of an Induced ensemble or the factor family of a Product.
struct EnsembleSpec {
  Family family = Family::Ginibre;
  Field field = Field::Complex;
  int N = 1;
  int n = 0;
  int M = 0;
  int m = 1;
  double tau = 0.0;
  double sigma = 0.7071067811865476;
  Family base = Family::Ginibre;

  bool operator==(const EnsembleSpec&) const = default;

  void validate() const {
    if (N < 1) throw ParameterError("N must be positive");
    if (n < 0 || M < 0) throw ParameterError("n and M must be nonnegative");
    if (m < 1) throw ParameterError("m must be at least 1");
    auto base_ok = [&] {
      return base == Family::Ginibre || base == Family::Spherical ||
             base == Family::TruncatedUnitary;
    };
    switch (family) {
      case Family::Elliptic:
        if (!(tau >= 0.0 && tau < 1.0)) throw ParameterError("elliptic tau must lie in [0,1)");
        break;
      case Family::Spherical:
        if (n != 0 && n != N) throw ParameterError("spherical eigenproblem needs n = N (square)");
        break;
      case Family::TruncatedUnitary:
        if (M != 0) throw ParameterError("rectangular truncation is only available as an induced base");
        break;
      case Family::Induced:
        if (!base_ok()) throw ParameterError("induced base must be ginibre, spherical or truncated_unitary");
        if (n < N) throw ParameterError("induced ensemble needs n >= N");
        if (base == Family::TruncatedUnitary && M < n + N)
          throw ParameterError("rectangular truncation needs M >= n + N");
        break;
      case Family::Product:
        if (!base_ok()) throw ParameterError("product factor must be ginibre, spherical or truncated_unitary");
        break;
      case Family::SelfDual:
        if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
        [[fallthrough]];
      case Family::CseTruncation:
        if (field != Field::Quaternion) throw ParameterError("self-dual families are beta = 4");
        break;
      case Family::Ginibre:
        break;
    }
  }
};

// Families whose beta = 4 samples are real-quaternion matrices in 2x2 block form.
inline bool quaternion_real_family(Family f) {
  return f != Family::SelfDual && f != Family::CseTruncation;
}

// Natural length scale of the spectrum in the sampling frame (outer support radius
// where one exists). Spherical families have unbounded support and return 1.
inline double spectral_radius(const EnsembleSpec& s) {
  const double b = blowup(s.field);
  const double N = s.N * b, n = s.n * b, M = s.M * b;
  switch (s.family) {
    case Family::Ginibre: return std::sqrt(N);
    case Family::Elliptic: return std::sqrt(N) * (1.0 + s.tau);
    case Family::Spherical: return 1.0;
    case Family::TruncatedUnitary: return std::sqrt(N / (N + n));
    case Family::Induced:
      switch (s.base) {
        case Family::Ginibre: return std::sqrt(n);
        case Family::TruncatedUnitary: return std::sqrt(n / M);
        default: return 1.0;
      }
    case Family::Product:
      switch (s.base) {
        case Family::Ginibre: return std::pow(N, 0.5 * s.m);
        case Family::TruncatedUnitary: return std::pow(N / (N + n), 0.5 * s.m);
        default: return 1.0;
      }
    case Family::SelfDual: return 2.0 * s.sigma * std::sqrt(double(s.N));
    case Family::CseTruncation: return 1.0;
  }
  return 1.0;
}

// ---------------------------------------------------------------------------
// Structure helpers

// Largest violation of the [[a, b], [-conj(b), conj(a)]] block form, relative to
// max(1, max |entry|).
inline double quaternion_structure_defect(const ComplexMatrix& A) {
  if (A.rows() % 2 || A.cols() % 2) return INFINITY;
  double defect = 0.0, scale = 1.0;
  for (Eigen::Index i = 0; i < A.rows(); i += 2)
    for (Eigen::Index j = 0; j < A.cols(); j += 2) {
      defect = std::max(defect, std::abs(A(i + 1, j + 1) - std::conj(A(i, j))));
      defect = std::max(defect, std::abs(A(i + 1, j) + std::conj(A(i, j + 1))));
      scale = std::max({scale, std::abs(A(i, j)), std::abs(A(i, j + 1))});
    }
  return defect / scale;
}

// Nearest matrix in block form; removes roundoff picked up by dense arithmetic.
inline void enforce_quaternion_structure(ComplexMatrix& A) {
  for (Eigen::Index i = 0; i < A.rows(); i += 2)
    for (Eigen::Index j = 0; j < A.cols(); j += 2) {
      cplx a = 0.5 * (A(i, j) + std::conj(A(i + 1, j + 1)));
      cplx b = 0.5 * (A(i, j + 1) - std::conj(A(i + 1, j)));
      A(i, j) = a;
      A(i + 1, j + 1) = std::conj(a);
      A(i, j + 1) = b;
      A(i + 1, j) = -std::conj(b);
    }
}

// Z = I_N (x) [[0, -1], [1, 0]] applied from the left.
inline ComplexMatrix apply_Z(const ComplexMatrix& A) {
  ComplexMatrix out(A.rows(), A.cols());
  for (Eigen::Index p = 0; p + 1 < A.rows(); p += 2) {
    out.row(p) = -A.row(p + 1);
    out.row(p + 1) = A.row(p);
  }
  return out;
}

inline ComplexMatrix Z_matrix(int N) {
  ComplexMatrix Z = ComplexMatrix::Zero(2 * N, 2 * N);
  for (int p = 0; p < N; ++p) {
    Z(2 * p, 2 * p + 1) = -1.0;
    Z(2 * p + 1, 2 * p) = 1.0;
  }
  return Z;
}

// ---------------------------------------------------------------------------
// Samplers. Dimensions count rows of the field; beta = 4 results are stored
// with twice as many complex rows and columns.

inline ComplexMatrix sample_gaussian_matrix(Field field, int rows, int cols, RngStream& rng) {
  if (rows < 1 || cols < 1)
    throw DimensionError("gaussian matrix needs positive dimensions, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  const double h = std::sqrt(0.5);
  if (field == Field::Quaternion) {
    ComplexMatrix G(2 * rows, 2 * cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        double ar = rng.normal(), ai = rng.normal(), br = rng.normal(), bi = rng.normal();
        cplx a(h * ar, h * ai), b(h * br, h * bi);
        G(2 * i, 2 * j) = a;
        G(2 * i, 2 * j + 1) = b;
        G(2 * i + 1, 2 * j) = -std::conj(b);
        G(2 * i + 1, 2 * j + 1) = std::conj(a);
      }
    return G;
  }
  ComplexMatrix G(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (field == Field::Real) {
        G(i, j) = rng.normal();
      } else {
        double re = rng.normal(), im = rng.normal();
        G(i, j) = cplx(h * re, h * im);
      }
    }
  return G;
}

inline ComplexMatrix sample_elliptic(Field field, int N, double tau, RngStream& rng) {
  if (!(tau >= 0.0 && tau < 1.0)) throw ParameterError("elliptic tau must lie in [0,1)");
  ComplexMatrix G = sample_gaussian_matrix(field, N, N, rng);
  const double sc = std::sqrt((1.0 - tau) / (1.0 + tau));
  // The sqrt(1 + tau) factor restores unit entry variance.
  const double s = std::sqrt(1.0 + tau);
  ComplexMatrix Y = s * (0.5 * (1.0 + sc)) * G + s * (0.5 * (1.0 - sc)) * G.adjoint();
  return Y;
}

inline ComplexMatrix sample_spherical(Field field, int n, int N, RngStream& rng) {
  if (N < 1 || n < N) throw ParameterError("spherical draw needs n >= N >= 1");
  constexpr int kMaxRedraws = 8;
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    ComplexMatrix G1 = sample_gaussian_matrix(field, n, n, rng);
    ComplexMatrix G2 = sample_gaussian_matrix(field, n, N, rng);
    Eigen::PartialPivLU<ComplexMatrix> lu(G1);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) continue;
    ComplexMatrix A = lu.solve(G2);
    if (field == Field::Quaternion) enforce_quaternion_structure(A);
    if (field == Field::Real) A = A.real().cast<cplx>();
    return A;
  }
  throw SamplingError("spherical draw: G1 numerically singular after 8 redraws", rng.master_seed(),
                      rng.index());
}

inline ComplexMatrix sample_haar_unitary(Field field, int size, RngStream& rng) {
  if (size < 1) throw DimensionError("Haar unitary needs positive size");
  if (field == Field::Real) {
    ComplexMatrix G = sample_gaussian_matrix(field, size, size, rng);
    Eigen::MatrixXd Gr = G.real();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Gr);
    Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd& R = qr.matrixQR();
    for (int j = 0; j < size; ++j)
      if (R(j, j) < 0) Q.col(j) *= -1.0;
    return Q.cast<cplx>();
  }
  if (field == Field::Complex) {
    ComplexMatrix G = sample_gaussian_matrix(field, size, size, rng);
    Eigen::MatrixXcd Gc = G;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Gc);
    Eigen::MatrixXcd Q = qr.householderQ();
    const Eigen::MatrixXcd& R = qr.matrixQR();
    for (int j = 0; j < size; ++j) {
      const double r = std::abs(R(j, j));
      if (r > 0) Q.col(j) *= R(j, j) / r;
    }
    return Q;
  }
  // Unitary symplectic: Gram-Schmidt over the quaternions. Each quaternion column
  // is a complex column v and its partner Z conj(v).
  ComplexMatrix G = sample_gaussian_matrix(field, size, size, rng);
  const Eigen::Index n2 = 2 * size;
  Eigen::MatrixXcd Q(n2, n2);
  for (int j = 0; j < size; ++j) {
    Eigen::VectorXcd v = G.col(2 * j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < 2 * j; ++k) v -= Q.col(k) * Q.col(k).dot(v);
    v /= v.norm();
    Q.col(2 * j) = v;
    for (Eigen::Index p = 0; p < n2; p += 2) {
      Q(p, 2 * j + 1) = -std::conj(v(p + 1));
      Q(p + 1, 2 * j + 1) = std::conj(v(p));
    }
  }
  return Q;
}

// Square truncation when M == 0 (parent N + n, returns N x N); otherwise the
// n x N corner of an M x M parent.
inline ComplexMatrix sample_truncated_unitary(Field field, int N, int n, int M, RngStream& rng) {
  if (N < 1 || n < 0) throw ParameterError("truncation needs N >= 1, n >= 0");
  const int b = blowup(field);
  if (M == 0) {
    ComplexMatrix U = sample_haar_unitary(field, N + n, rng);
    return U.topLeftCorner(b * N, b * N);
  }
  if (M < n + N)
    throw ParameterError("rectangular truncation needs M >= n + N (M=" + std::to_string(M) +
                         ", n=" + std::to_string(n) + ", N=" + std::to_string(N) + ")");
  ComplexMatrix U = sample_haar_unitary(field, M, rng);
  return U.topLeftCorner(b * n, b * N);
}

// (C)^{1/2} for Hermitian positive semidefinite C, via its eigendecomposition.
inline ComplexMatrix hermitian_sqrt(const ComplexMatrix& C, Field field) {
  if (field == Field::Real) {
    Eigen::MatrixXd Cr = C.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Cr);
    Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd R = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
    return R.cast<cplx>();
  }
  Eigen::MatrixXcd Cc = C;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Cc);
  Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXcd R = es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  return R;
}

inline ComplexMatrix sample_rectangular(const EnsembleSpec& s, int n, int N, RngStream& rng) {
  switch (s.base) {
    case Family::Ginibre: return sample_gaussian_matrix(s.field, n, N, rng);
    case Family::Spherical: return sample_spherical(s.field, n, N, rng);
    case Family::TruncatedUnitary: return sample_truncated_unitary(s.field, N, n, s.M, rng);
    default: break;
  }
  throw ParameterError("unsupported induced base '" + std::string(family_name(s.base)) + "'");
}

// A = (G^dagger G)^{1/2} U, with G the rectangular base draw. Uses s.base and s.M.
inline ComplexMatrix sample_induced(const EnsembleSpec& s, int n, int N, RngStream& rng) {
  if (n < N) throw ParameterError("induced ensemble needs n >= N");
  ComplexMatrix G = sample_rectangular(s, n, N, rng);
  ComplexMatrix C = G.adjoint() * G;
  ComplexMatrix A = hermitian_sqrt(C, s.field) * sample_haar_unitary(s.field, N, rng);
  if (s.field == Field::Quaternion) enforce_quaternion_structure(A);
  return A;
}

struct ScaledMatrix {
  ComplexMatrix matrix;
  // Eigenvalues of the full sample are exp(log_scale) times those of `matrix`.
  double log_scale = 0.0;
};

inline ComplexMatrix sample_square_factor(const EnsembleSpec& s, RngStream& rng) {
  switch (s.base) {
    case Family::Ginibre: return sample_gaussian_matrix(s.field, s.N, s.N, rng);
    case Family::Spherical: return sample_spherical(s.field, s.N, s.N, rng);
    case Family::TruncatedUnitary: return sample_truncated_unitary(s.field, s.N, s.n, 0, rng);
    default: break;
  }
  throw ParameterError("unsupported product factor '" + std::string(family_name(s.base)) + "'");
}

// Ordered product F_1 F_2 ... F_m. Ginibre factors are divided by sqrt(N) and the
// scale is carried in log form.
inline ScaledMatrix sample_product(const EnsembleSpec& s, int m, RngStream& rng) {
  if (m < 1) throw ParameterError("product needs m >= 1");
  const double inv = s.base == Family::Ginibre ? 1.0 / std::sqrt(double(s.N)) : 1.0;
  ScaledMatrix out;
  for (int k = 0; k < m; ++k) {
    ComplexMatrix F = sample_square_factor(s, rng);
    if (inv != 1.0) F *= inv;
    out.matrix = k == 0 ? F : ComplexMatrix(out.matrix * F);
  }
  if (inv != 1.0) out.log_scale = -m * std::log(inv);
  if (!out.matrix.allFinite())
    throw SamplingError("product overflow at m=" + std::to_string(m) +
                            "; reduce m or rescale the factors",
                        rng.master_seed(), rng.index());
  if (s.field == Field::Quaternion) enforce_quaternion_structure(out.matrix);
  if (s.field == Field::Real) out.matrix = out.matrix.real().cast<cplx>();
  return out;
}

// Z_{2N} A_{2N} with A complex antisymmetric, independent upper-triangle entries
// whose real and imaginary parts are N(0, sigma^2).
inline ComplexMatrix sample_selfdual(int N, double sigma, RngStream& rng) {
  if (N < 1) throw DimensionError("self-dual matrix needs N >= 1");
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  const int n2 = 2 * N;
  ComplexMatrix A = ComplexMatrix::Zero(n2, n2);
  for (int i = 0; i < n2; ++i)
    for (int j = i + 1; j < n2; ++j) {
      double re = rng.normal(), im = rng.normal();
      A(i, j) = cplx(sigma * re, sigma * im);
      A(j, i) = -A(i, j);
    }
  return apply_Z(A);
}

// CSE element S = Z^{-1} U^T Z U of size 2(N+1) with the last quaternion row and
// column removed.
inline ComplexMatrix sample_cse_truncation(int N, RngStream& rng) {
  if (N < 1) throw DimensionError("CSE truncation needs N >= 1");
  ComplexMatrix U = sample_haar_unitary(Field::Complex, 2 * (N + 1), rng);
  ComplexMatrix ZU = apply_Z(U);
  ComplexMatrix S = -apply_Z(ComplexMatrix(U.transpose() * ZU));
  return S.topLeftCorner(2 * N, 2 * N);
}

inline ScaledMatrix sample_matrix(const EnsembleSpec& s, RngStream& rng) {
  s.validate();
  switch (s.family) {
    case Family::Ginibre: return {sample_gaussian_matrix(s.field, s.N, s.N, rng), 0.0};
    case Family::Elliptic: return {sample_elliptic(s.field, s.N, s.tau, rng), 0.0};
    case Family::Spherical: return {sample_spherical(s.field, s.N, s.N, rng), 0.0};
    case Family::TruncatedUnitary: return {sample_truncated_unitary(s.field, s.N, s.n, 0, rng), 0.0};
    case Family::Induced: return {sample_induced(s, s.n, s.N, rng), 0.0};
    case Family::Product: return sample_product(s, s.m, rng);
    case Family::SelfDual: return {sample_selfdual(s.N, s.sigma, rng), 0.0};
    case Family::CseTruncation: return {sample_cse_truncation(s.N, rng), 0.0};
  }
  throw ParameterError("unknown family");
}

}  // namespace rmtlab
