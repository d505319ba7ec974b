#pragma once

#include <complex>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <lapacke.h>

#include "ensembles.hpp"

extern "C" void openblas_set_num_threads(int num_threads);

namespace rmtlab {

namespace detail {
// Parallelism lives in the sample runner; BLAS threads would only oversubscribe.
inline void single_threaded_blas() {
  static std::once_flag once;
  std::call_once(once, [] { openblas_set_num_threads(1); });
}
}  // namespace detail

// All eigenvalues of a square matrix (LAPACK geev, no eigenvectors). Matrices with
// identically zero imaginary part go through the real solver, so conjugate pairs
// come back exactly conjugate.
inline std::vector<cplx> eigenvalues(const ComplexMatrix& A, std::optional<std::uint64_t> seed = {},
                                     std::optional<std::uint64_t> index = {}) {
  if (A.rows() != A.cols()) throw DimensionError("eigenvalues of a non-square matrix");
  detail::single_threaded_blas();
  const lapack_int n = static_cast<lapack_int>(A.rows());
  std::vector<cplx> out(n);
  if (n == 0) return out;
  // Row-major storage read as column-major is the transpose: same spectrum.
  lapack_int info = 0;
  if ((A.imag().array() == 0.0).all()) {
    std::vector<double> a(A.size()), wr(n), wi(n);
    for (Eigen::Index k = 0; k < A.size(); ++k) a[k] = A.data()[k].real();
    info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(), wi.data(), nullptr,
                         1, nullptr, 1);
    for (lapack_int k = 0; k < n; ++k) out[k] = cplx(wr[k], wi[k]);
  } else {
    std::vector<cplx> a(A.data(), A.data() + A.size());
    info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(a.data()),
                         n, reinterpret_cast<lapack_complex_double*>(out.data()), nullptr, 1, nullptr, 1);
  }
  if (info != 0)
    throw SolverError("geev failed with info=" + std::to_string(info) + " at n=" + std::to_string(n),
                      seed, index);
  return out;
}

}  // namespace rmtlab
