#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "eigen.hpp"
#include "ensembles.hpp"

namespace rmtlab {

enum class Pairing {
  None,        // beta = 2: every eigenvalue kept
  Conjugate,   // z kept for the pair (z, conj z)
  Degenerate,  // one copy kept for the pair (z, z)
};

inline Pairing pairing_for(const EnsembleSpec& s) {
  if (s.family == Family::SelfDual || s.family == Family::CseTruncation) return Pairing::Degenerate;
  if (s.field == Field::Complex) return Pairing::None;
  return Pairing::Conjugate;
}

struct EigenvalueCloud {
  std::vector<cplx> points;
  Field field = Field::Complex;
  int n_real = 0;
  EnsembleSpec spec;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  // Largest distance between the two members of a matched pair.
  double max_pair_gap = 0.0;

  Pairing pairing() const { return pairing_for(spec); }

  // Eigenvalues of the full spectrum a stored point stands for: a conjugate
  // representative off the axis counts for z and conj z.
  int multiplicity(std::size_t i) const {
    if (pairing() != Pairing::Conjugate) return 1;
    if (field == Field::Real && points[i].imag() == 0.0) return 1;
    return 2;
  }
};

struct CloudOptions {
  // Frobenius norm of the source matrix; sets the real-axis tolerance for beta = 1.
  double matrix_norm = 0.0;
  // Pair gap threshold is this factor times sqrt(N).
  double pair_gap_factor = 1e-6;
};

namespace detail {

// Greedy matching of each point with its nearest unmatched partner target(z).
// Returns the index of the partner for every point.
template <class Target>
std::vector<std::ptrdiff_t> greedy_pairs(const std::vector<cplx>& z, double threshold, Target target,
                                         double& max_gap, bool& ok) {
  const std::size_t n = z.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return z[a].real() < z[b].real() || (z[a].real() == z[b].real() && z[a].imag() < z[b].imag());
  });
  std::vector<std::ptrdiff_t> partner(n, -1);
  ok = true;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    if (partner[i] >= 0) continue;
    const cplx t = target(z[i]);
    std::ptrdiff_t best = -1;
    double best_d = threshold;
    // Scan outwards in sorted real part until the real gap exceeds the threshold.
    for (std::size_t q = k + 1; q < n && z[order[q]].real() - t.real() <= best_d; ++q) {
      const std::size_t j = order[q];
      if (partner[j] >= 0) continue;
      const double d = std::abs(z[j] - t);
      if (d <= best_d) { best_d = d; best = std::ptrdiff_t(j); }
    }
    for (std::size_t q = k; q-- > 0 && t.real() - z[order[q]].real() <= best_d;) {
      const std::size_t j = order[q];
      if (partner[j] >= 0) continue;
      const double d = std::abs(z[j] - t);
      if (d <= best_d) { best_d = d; best = std::ptrdiff_t(j); }
    }
    if (best < 0) { ok = false; return partner; }
    partner[i] = best;
    partner[std::size_t(best)] = std::ptrdiff_t(i);
    max_gap = std::max(max_gap, best_d);
  }
  return partner;
}

}  // namespace detail

// Applies the representative convention of the ensemble's field and family.
inline EigenvalueCloud to_cloud(const std::vector<cplx>& eigs, const EnsembleSpec& spec,
                                std::uint64_t seed = 0, std::uint64_t index = 0,
                                const CloudOptions& opt = {}) {
  EigenvalueCloud c;
  c.field = spec.field;
  c.spec = spec;
  c.seed = seed;
  c.index = index;
  const Pairing mode = pairing_for(spec);
  if (mode == Pairing::None) {
    c.points = eigs;
    return c;
  }
  const double threshold = opt.pair_gap_factor * std::sqrt(double(spec.N));

  if (spec.field == Field::Real) {
    const double scale = std::max(1.0, opt.matrix_norm / std::sqrt(double(spec.N)));
    const double eps_real = 1e-8 * scale;
    std::vector<cplx> complex_part;
    for (const cplx& z : eigs) {
      if (std::abs(z.imag()) <= eps_real) {
        c.points.emplace_back(z.real(), 0.0);
        ++c.n_real;
      } else {
        complex_part.push_back(z);
      }
    }
    if (complex_part.size() % 2)
      throw StructuralError("odd number of non-real eigenvalues in a real spectrum", seed, index);
    bool ok = false;
    const double thr = std::max(threshold, 1e-10 * std::max(1.0, opt.matrix_norm));
    auto partner = detail::greedy_pairs(complex_part, thr, [](cplx z) { return std::conj(z); },
                                        c.max_pair_gap, ok);
    if (!ok) throw StructuralError("conjugate pairing failed for a real spectrum", seed, index);
    for (std::size_t i = 0; i < complex_part.size(); ++i) {
      const cplx z = complex_part[i];
      const cplx w = complex_part[std::size_t(partner[i])];
      if (z.imag() > 0) c.points.emplace_back(0.5 * (z.real() + w.real()), 0.5 * (z.imag() - w.imag()));
    }
    if ((c.n_real - spec.N) % 2)
      throw StructuralError("real eigenvalue count has the wrong parity", seed, index);
    return c;
  }

  if (eigs.size() % 2)
    throw StructuralError("odd spectrum size for a paired beta = 4 sample", seed, index);
  bool ok = false;
  std::vector<std::ptrdiff_t> partner;
  if (mode == Pairing::Conjugate)
    partner = detail::greedy_pairs(eigs, threshold, [](cplx z) { return std::conj(z); },
                                   c.max_pair_gap, ok);
  else
    partner = detail::greedy_pairs(eigs, threshold, [](cplx z) { return z; }, c.max_pair_gap, ok);
  if (!ok)
    throw StructuralError("pairing failed: no partner within " + std::to_string(threshold), seed, index);
  c.points.reserve(eigs.size() / 2);
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    const std::size_t j = std::size_t(partner[i]);
    if (j < i) continue;
    if (mode == Pairing::Degenerate) {
      c.points.push_back(0.5 * (eigs[i] + eigs[j]));
    } else {
      const cplx mean = 0.5 * (eigs[i] + std::conj(eigs[j]));
      c.points.emplace_back(mean.real(), std::abs(mean.imag()));
    }
  }
  return c;
}

// Draw `index` of `spec` under `seed`, eigensolved and converted to a cloud.
inline EigenvalueCloud sample_cloud(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t index) {
  RngStream rng(seed, index);
  ScaledMatrix S = sample_matrix(spec, rng);
  if (spec.field == Field::Quaternion && quaternion_real_family(spec.family) &&
      quaternion_structure_defect(S.matrix) > 1e-12)
    throw StructuralError("quaternion block structure violated before eigensolve", seed, index);
  std::vector<cplx> eigs = eigenvalues(S.matrix, seed, index);
  CloudOptions opt;
  opt.matrix_norm = S.matrix.norm();
  EigenvalueCloud c = to_cloud(eigs, spec, seed, index, opt);
  if (S.log_scale != 0.0) {
    const double f = std::exp(S.log_scale);
    for (cplx& z : c.points) z *= f;
    c.max_pair_gap *= f;
  }
  return c;
}

}  // namespace rmtlab
