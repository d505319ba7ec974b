#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "analytic.hpp"
#include "cloud.hpp"
#include "errors.hpp"
#include "special.hpp"

namespace rmtlab {

enum class Frame { Raw, Unit, EdgeShifted };

inline std::string_view frame_name(Frame f) {
  switch (f) {
    case Frame::Raw: return "raw";
    case Frame::Unit: return "unit";
    case Frame::EdgeShifted: return "edge_shifted";
  }
  return "?";
}

inline Frame frame_from_name(std::string_view s) {
  for (Frame f : {Frame::Raw, Frame::Unit, Frame::EdgeShifted})
    if (frame_name(f) == s) return f;
  throw ParameterError("unknown frame '" + std::string(s) + "'");
}

inline std::vector<double> linspace_edges(double lo, double hi, int bins) {
  if (bins < 1 || !(hi > lo)) throw ParameterError("bin edges need bins >= 1 and hi > lo");
  std::vector<double> e(bins + 1);
  for (int k = 0; k <= bins; ++k) e[k] = lo + (hi - lo) * k / bins;
  e[bins] = hi;
  return e;
}

namespace detail {

inline void check_edges(const std::vector<double>& e) {
  if (e.size() < 2) throw ParameterError("need at least two bin edges");
  for (std::size_t k = 1; k < e.size(); ++k)
    if (!(e[k] > e[k - 1])) throw ParameterError("bin edges must increase");
}

// Bin index of x in [e.front(), e.back()), or -1.
inline std::ptrdiff_t find_bin(const std::vector<double>& e, double x) {
  if (!(x >= e.front() && x < e.back())) return -1;
  auto it = std::upper_bound(e.begin(), e.end(), x);
  return std::ptrdiff_t(it - e.begin()) - 1;
}

class SpecGuard {
 public:
  void check(const EnsembleSpec& s) {
    if (!spec_) spec_ = s;
    else if (!(*spec_ == s)) throw InputError("clouds from different ensemble specs in one estimate");
  }
  void merge(const SpecGuard& o) {
    if (o.spec_) check(*o.spec_);
  }
  const std::optional<EnsembleSpec>& spec() const { return spec_; }

 private:
  std::optional<EnsembleSpec> spec_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Radial one-point density

struct RadialDensityEstimate {
  std::vector<double> bin_edges;
  std::vector<double> density;
  std::vector<double> stderr_;
  std::uint64_t n_samples = 0;
  std::uint64_t n_points = 0;
  Frame frame = Frame::Raw;
  double length = 1.0;  // unit frame divides coordinates by this
  double shift = 0.0;   // edge_shifted frame subtracts this from |z|

  // Plane area of bin k in the frame's own coordinates.
  double area(std::size_t k) const {
    double a = bin_edges[k], b = bin_edges[k + 1];
    if (frame == Frame::EdgeShifted) { a += shift; b += shift; }
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
    return kPi * (b * b - a * a);
  }
  double center(std::size_t k) const { return 0.5 * (bin_edges[k] + bin_edges[k + 1]); }
  std::size_t bins() const { return density.size(); }
};

// Counts are integers (weighted by representative multiplicity), so any merge
// order reproduces the same estimate bit for bit.
class RadialDensityAccumulator {
 public:
  RadialDensityAccumulator(std::vector<double> edges, Frame frame = Frame::Raw, double length = 1.0,
                           double shift = 0.0)
      : edges_(std::move(edges)), frame_(frame), length_(length), shift_(shift) {
    detail::check_edges(edges_);
    if (!(length_ > 0)) throw ParameterError("frame length must be positive");
    counts_.assign(edges_.size() - 1, 0);
    sumsq_.assign(edges_.size() - 1, 0);
  }

  double coordinate(cplx z) const {
    const double r = std::abs(z);
    switch (frame_) {
      case Frame::Raw: return r;
      case Frame::Unit: return r / length_;
      case Frame::EdgeShifted: return r - shift_;
    }
    return r;
  }

  void add(const EigenvalueCloud& c) {
    guard_.check(c.spec);
    scratch_.assign(counts_.size(), 0);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const auto k = detail::find_bin(edges_, coordinate(c.points[i]));
      if (k < 0) continue;
      scratch_[std::size_t(k)] += std::uint64_t(c.multiplicity(i));
    }
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      counts_[k] += scratch_[k];
      sumsq_[k] += scratch_[k] * scratch_[k];
      n_points_ += scratch_[k];
    }
    ++n_samples_;
  }

  void merge(const RadialDensityAccumulator& o) {
    if (o.edges_ != edges_ || o.frame_ != frame_ || o.length_ != length_ || o.shift_ != shift_)
      throw InputError("merging radial accumulators with different binning");
    guard_.merge(o.guard_);
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      counts_[k] += o.counts_[k];
      sumsq_[k] += o.sumsq_[k];
    }
    n_samples_ += o.n_samples_;
    n_points_ += o.n_points_;
  }

  RadialDensityEstimate result() const {
    RadialDensityEstimate e;
    e.bin_edges = edges_;
    e.frame = frame_;
    e.length = length_;
    e.shift = shift_;
    e.n_samples = n_samples_;
    e.n_points = n_points_;
    const std::size_t nb = counts_.size();
    e.density.assign(nb, 0.0);
    e.stderr_.assign(nb, 0.0);
    if (n_samples_ == 0) return e;
    const double S = double(n_samples_);
    for (std::size_t k = 0; k < nb; ++k) {
      const double A = e.area(k);
      if (A <= 0) continue;
      const double mean = double(counts_[k]) / S;
      const double var = std::max(0.0, double(sumsq_[k]) / S - mean * mean);
      e.density[k] = mean / A;
      e.stderr_[k] = S > 1 ? std::sqrt(var * S / (S - 1) / S) / A : 0.0;
    }
    return e;
  }

  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t n_samples() const { return n_samples_; }

 private:
  std::vector<double> edges_;
  Frame frame_;
  double length_, shift_;
  std::vector<std::uint64_t> counts_, sumsq_, scratch_;
  std::uint64_t n_samples_ = 0, n_points_ = 0;
  detail::SpecGuard guard_;
};

template <class Clouds>
RadialDensityEstimate radial_density(const Clouds& clouds, std::vector<double> edges, Frame frame = Frame::Raw,
                                     double length = 1.0, double shift = 0.0) {
  RadialDensityAccumulator acc(std::move(edges), frame, length, shift);
  for (const auto& c : clouds) acc.add(c);
  return acc.result();
}

// Mean density over bins [k0, k1), weighting by area.
inline double pooled_density(const RadialDensityEstimate& e, std::size_t k0, std::size_t k1) {
  double mass = 0.0, area = 0.0;
  for (std::size_t k = k0; k < k1; ++k) {
    mass += e.density[k] * e.area(k);
    area += e.area(k);
  }
  return area > 0 ? mass / area : 0.0;
}

// ---------------------------------------------------------------------------
// Density along a strip |Re z| < half_width of representatives, binned in Im z.

struct StripProfileEstimate {
  std::vector<double> bin_edges;
  std::vector<double> density;
  std::vector<double> stderr_;
  std::uint64_t n_samples = 0;
  double half_width = 0.0;
};

class StripProfileAccumulator {
 public:
  StripProfileAccumulator(std::vector<double> y_edges, double half_width)
      : edges_(std::move(y_edges)), half_width_(half_width) {
    detail::check_edges(edges_);
    if (!(half_width_ > 0)) throw ParameterError("strip half width must be positive");
    counts_.assign(edges_.size() - 1, 0);
    sumsq_.assign(edges_.size() - 1, 0);
  }

  void add(const EigenvalueCloud& c) {
    guard_.check(c.spec);
    std::vector<std::uint64_t> local(counts_.size(), 0);
    for (const cplx& z : c.points) {
      if (!(std::abs(z.real()) < half_width_)) continue;
      const auto k = detail::find_bin(edges_, z.imag());
      if (k >= 0) ++local[std::size_t(k)];
    }
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      counts_[k] += local[k];
      sumsq_[k] += local[k] * local[k];
    }
    ++n_samples_;
  }

  void merge(const StripProfileAccumulator& o) {
    if (o.edges_ != edges_ || o.half_width_ != half_width_)
      throw InputError("merging strip accumulators with different binning");
    guard_.merge(o.guard_);
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      counts_[k] += o.counts_[k];
      sumsq_[k] += o.sumsq_[k];
    }
    n_samples_ += o.n_samples_;
  }

  StripProfileEstimate result() const {
    StripProfileEstimate e;
    e.bin_edges = edges_;
    e.half_width = half_width_;
    e.n_samples = n_samples_;
    e.density.assign(counts_.size(), 0.0);
    e.stderr_.assign(counts_.size(), 0.0);
    if (n_samples_ == 0) return e;
    const double S = double(n_samples_);
    for (std::size_t k = 0; k < counts_.size(); ++k) {
      const double A = 2.0 * half_width_ * (edges_[k + 1] - edges_[k]);
      const double mean = double(counts_[k]) / S;
      const double var = std::max(0.0, double(sumsq_[k]) / S - mean * mean);
      e.density[k] = mean / A;
      e.stderr_[k] = S > 1 ? std::sqrt(var / (S - 1)) / A : 0.0;
    }
    return e;
  }

 private:
  std::vector<double> edges_;
  double half_width_;
  std::vector<std::uint64_t> counts_, sumsq_;
  std::uint64_t n_samples_ = 0;
  detail::SpecGuard guard_;
};

// ---------------------------------------------------------------------------
// Isotropic truncated pair correlation about a central window

namespace detail {

// Area of disk(0, a) intersected with disk(d, b).
inline double lens_area(double a, double b, double d) {
  if (a <= 0 || b <= 0) return 0.0;
  if (d >= a + b) return 0.0;
  const double small = std::min(a, b);
  if (d <= std::abs(a - b)) return kPi * small * small;
  const double ca = std::clamp((d * d + a * a - b * b) / (2 * d * a), -1.0, 1.0);
  const double cb = std::clamp((d * d + b * b - a * a) / (2 * d * b), -1.0, 1.0);
  const double k = std::max(0.0, (-d + a + b) * (d + a - b) * (d - a + b) * (d + a + b));
  return a * a * std::acos(ca) + b * b * std::acos(cb) - 0.5 * std::sqrt(k);
}

}  // namespace detail

struct PairCorrelationEstimate {
  std::vector<double> r_edges;
  std::vector<double> rho2T;
  std::vector<double> stderr_;
  double rho_b = 0.0;           // reference density used for rho2T / rho_b^2
  double rho_window = 0.0;      // density measured inside the window
  bool rho_b_fixed = false;
  double window_radius = 0.0;
  std::string window;
  std::uint64_t n_samples = 0;
  std::uint64_t total_pairs = 0;
  bool low_power = false;
  // Leave-one-group-out replicates of rho2T (rows) with their rho_b.
  std::vector<std::vector<double>> replicates;
  std::vector<double> replicate_rho_b;

  double center(std::size_t k) const { return 0.5 * (r_edges[k] + r_edges[k + 1]); }
  std::size_t bins() const { return rho2T.size(); }
  double ratio(std::size_t k) const { return rho2T[k] / (rho_b * rho_b); }
};

// rho2T(r) = rho2(r) - rho1 (x) rho1 for references inside |z| < window_radius.
// The uncorrelated baseline is built from the accumulated radial one-point
// histogram, so a finite-N density profile does not leak into rho2T; it assumes
// the one-point density is rotation invariant.
class PairCorrelationAccumulator {
 public:
  static constexpr int kGroups = 32;
  static constexpr int kRefBins = 64;
  static constexpr int kDensityBins = 320;

  PairCorrelationAccumulator(std::vector<double> r_edges, double window_radius,
                             std::optional<double> fixed_rho_b = std::nullopt)
      : edges_(std::move(r_edges)), window_(window_radius), fixed_rho_b_(fixed_rho_b) {
    detail::check_edges(edges_);
    if (edges_.front() < 0) throw ParameterError("pair distances start at 0 or above");
    if (!(window_ > 0)) throw ParameterError("window radius must be positive");
    extent_ = window_ + edges_.back();
    groups_.resize(kGroups);
    for (auto& g : groups_) g.resize(edges_.size() - 1);
  }

  void add(const EigenvalueCloud& c) {
    guard_.check(c.spec);
    Group& g = groups_[c.index % kGroups];
    ++g.n_samples;
    const double rmax = edges_.back(), rmin = edges_.front();
    for (const cplx& z : c.points) {
      const double r = std::abs(z);
      if (r < extent_) ++g.point_hist[std::size_t(std::min(kDensityBins - 1.0, r / extent_ * kDensityBins))];
    }
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const cplx zi = c.points[i];
      const double ri = std::abs(zi);
      if (!(ri < window_)) continue;
      ++g.n_ref;
      ++g.ref_hist[std::size_t(std::min(kRefBins - 1.0, ri / window_ * kRefBins))];
      for (std::size_t j = 0; j < c.points.size(); ++j) {
        if (j == i) continue;
        const double d = std::abs(c.points[j] - zi);
        if (d < rmin || d >= rmax) continue;
        const auto k = detail::find_bin(edges_, d);
        if (k >= 0) ++g.pairs[std::size_t(k)];
      }
    }
  }

  void merge(const PairCorrelationAccumulator& o) {
    if (o.edges_ != edges_ || o.window_ != window_ || o.fixed_rho_b_ != fixed_rho_b_)
      throw InputError("merging pair accumulators with different settings");
    guard_.merge(o.guard_);
    for (int g = 0; g < kGroups; ++g) groups_[g] += o.groups_[g];
  }

  PairCorrelationEstimate result() const {
    PairCorrelationEstimate e;
    e.r_edges = edges_;
    e.window_radius = window_;
    e.window = "references with |z| < " + std::to_string(window_);
    e.rho_b_fixed = fixed_rho_b_.has_value();
    Group total(edges_.size() - 1);
    for (const auto& g : groups_) total += g;
    e.n_samples = total.n_samples;
    for (auto p : total.pairs) e.total_pairs += p;
    e.low_power = e.total_pairs < 10000;
    const std::size_t nb = edges_.size() - 1;
    e.rho2T.assign(nb, 0.0);
    e.stderr_.assign(nb, 0.0);
    if (total.n_samples == 0 || total.n_ref == 0) return e;

    const auto geometry = baseline_geometry();
    double rho_w = 0.0;
    e.rho2T = estimate(total, geometry, rho_w);
    e.rho_window = rho_w;
    e.rho_b = fixed_rho_b_ ? *fixed_rho_b_ : rho_w;

    // Jackknife over the fixed sample-index groups.
    int used = 0;
    for (int g = 0; g < kGroups; ++g) {
      if (groups_[g].n_samples == 0) continue;
      Group rest = total;
      rest -= groups_[g];
      if (rest.n_samples == 0 || rest.n_ref == 0) continue;
      double rw = 0.0;
      e.replicates.push_back(estimate(rest, geometry, rw));
      e.replicate_rho_b.push_back(fixed_rho_b_ ? *fixed_rho_b_ : rw);
      ++used;
    }
    if (used > 1) {
      for (std::size_t k = 0; k < nb; ++k) {
        double mean = 0.0;
        for (const auto& rep : e.replicates) mean += rep[k];
        mean /= used;
        double ss = 0.0;
        for (const auto& rep : e.replicates) ss += (rep[k] - mean) * (rep[k] - mean);
        e.stderr_[k] = std::sqrt(ss * (used - 1) / used);
      }
    }
    return e;
  }

 private:
  struct Group {
    std::uint64_t n_samples = 0, n_ref = 0;
    std::vector<std::uint64_t> pairs, ref_hist, point_hist;
    Group() = default;
    explicit Group(std::size_t nb) { resize(nb); }
    void resize(std::size_t nb) {
      pairs.assign(nb, 0);
      ref_hist.assign(kRefBins, 0);
      point_hist.assign(kDensityBins, 0);
    }
    Group& operator+=(const Group& o) {
      n_samples += o.n_samples;
      n_ref += o.n_ref;
      for (std::size_t k = 0; k < pairs.size(); ++k) pairs[k] += o.pairs[k];
      for (std::size_t k = 0; k < ref_hist.size(); ++k) ref_hist[k] += o.ref_hist[k];
      for (std::size_t k = 0; k < point_hist.size(); ++k) point_hist[k] += o.point_hist[k];
      return *this;
    }
    Group& operator-=(const Group& o) {
      n_samples -= o.n_samples;
      n_ref -= o.n_ref;
      for (std::size_t k = 0; k < pairs.size(); ++k) pairs[k] -= o.pairs[k];
      for (std::size_t k = 0; k < ref_hist.size(); ++k) ref_hist[k] -= o.ref_hist[k];
      for (std::size_t k = 0; k < point_hist.size(); ++k) point_hist[k] -= o.point_hist[k];
      return *this;
    }
  };

  // T[s][j][k]: area of (density ring j) intersected with (distance ring k around a
  // point at the center radius of reference ring s).
  std::vector<double> baseline_geometry() const {
    const std::size_t nb = edges_.size() - 1;
    std::vector<double> T(std::size_t(kRefBins) * kDensityBins * nb, 0.0);
    std::vector<double> L((kDensityBins + 1) * (nb + 1));
    for (int s = 0; s < kRefBins; ++s) {
      const double rs = window_ * (s + 0.5) / kRefBins;
      for (int j = 0; j <= kDensityBins; ++j) {
        const double a = extent_ * j / kDensityBins;
        for (std::size_t k = 0; k <= nb; ++k) L[j * (nb + 1) + k] = detail::lens_area(a, edges_[k], rs);
      }
      for (int j = 0; j < kDensityBins; ++j)
        for (std::size_t k = 0; k < nb; ++k) {
          const double v = L[(j + 1) * (nb + 1) + k + 1] - L[j * (nb + 1) + k + 1] -
                           L[(j + 1) * (nb + 1) + k] + L[j * (nb + 1) + k];
          T[(std::size_t(s) * kDensityBins + j) * nb + k] = v;
        }
    }
    return T;
  }

  std::vector<double> estimate(const Group& g, const std::vector<double>& T, double& rho_w) const {
    const std::size_t nb = edges_.size() - 1;
    const double S = double(g.n_samples);
    std::vector<double> rho1(kDensityBins);
    for (int j = 0; j < kDensityBins; ++j) {
      const double a = extent_ * j / kDensityBins, b = extent_ * (j + 1) / kDensityBins;
      rho1[j] = double(g.point_hist[j]) / (S * kPi * (b * b - a * a));
    }
    std::vector<double> base(nb, 0.0);
    for (int s = 0; s < kRefBins; ++s) {
      if (g.ref_hist[s] == 0) continue;
      const double w = double(g.ref_hist[s]) / S;
      for (int j = 0; j < kDensityBins; ++j) {
        if (rho1[j] == 0) continue;
        const double* row = &T[(std::size_t(s) * kDensityBins + j) * nb];
        const double f = w * rho1[j];
        for (std::size_t k = 0; k < nb; ++k) base[k] += f * row[k];
      }
    }
    const double window_area = kPi * window_ * window_;
    rho_w = double(g.n_ref) / (S * window_area);
    std::vector<double> out(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      const double ring = kPi * (edges_[k + 1] * edges_[k + 1] - edges_[k] * edges_[k]);
      out[k] = (double(g.pairs[k]) / S - base[k]) / (window_area * ring);
    }
    return out;
  }

  std::vector<double> edges_;
  double window_;
  double extent_;
  std::optional<double> fixed_rho_b_;
  std::vector<Group> groups_;
  detail::SpecGuard guard_;
};

template <class Clouds>
PairCorrelationEstimate pair_correlation_isotropic(const Clouds& clouds, std::vector<double> edges,
                                                   double window_radius_fraction,
                                                   std::optional<double> fixed_rho_b = std::nullopt) {
  if (!(window_radius_fraction > 0 && window_radius_fraction <= 0.8))
    throw ParameterError("window radius fraction must lie in (0, 0.8]");
  if (clouds.empty()) throw InputError("no clouds");
  const double R = spectral_radius(clouds.front().spec);
  PairCorrelationAccumulator acc(std::move(edges), window_radius_fraction * R, fixed_rho_b);
  for (const auto& c : clouds) acc.add(c);
  return acc.result();
}

// Tabulates a radial kernel at bin centers, for checks of the moment quadrature.
inline PairCorrelationEstimate tabulate_rho2T(const std::function<double(double)>& kernel,
                                              std::vector<double> edges, double rho) {
  detail::check_edges(edges);
  PairCorrelationEstimate e;
  e.r_edges = std::move(edges);
  e.rho_b = rho;
  e.rho_b_fixed = true;
  for (std::size_t k = 0; k + 1 < e.r_edges.size(); ++k) e.rho2T.push_back(kernel(e.center(k)));
  e.stderr_.assign(e.rho2T.size(), 0.0);
  return e;
}

// ---------------------------------------------------------------------------
// Moments

struct MomentEstimate {
  int p = 0;
  double value = 0.0;
  double stderr_ = 0.0;
  bool bias_warning = false;
};

namespace detail {
inline double moment_from_bins(const std::vector<double>& edges, const std::vector<double>& y, int p, double rho) {
  double acc = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double a = edges[k], b = edges[k + 1];
    acc += y[k] * 2.0 * kPi / (p + 2) * (std::pow(b, p + 2) - std::pow(a, p + 2));
  }
  return std::pow(rho, p / 2 - 1) * acc;
}
}  // namespace detail

// Bin quadrature of r^p rho2T(r) 2 pi r dr with the density prefactor of each rule.
inline std::vector<MomentEstimate> moments_of_rho2T(const PairCorrelationEstimate& e,
                                                    const std::vector<int>& powers = {0, 2, 4, 6}) {
  if (e.rho2T.empty()) throw InputError("empty pair-correlation estimate");
  const bool truncated = std::abs(e.rho2T.back()) >= 1e-3 * e.rho_b * e.rho_b;
  std::vector<MomentEstimate> out;
  for (int p : powers) {
    if (p < 0 || p % 2) throw ParameterError("moment powers must be even and nonnegative");
    MomentEstimate m;
    m.p = p;
    m.value = detail::moment_from_bins(e.r_edges, e.rho2T, p, e.rho_b);
    m.bias_warning = truncated;
    const std::size_t G = e.replicates.size();
    if (G > 1) {
      std::vector<double> v(G);
      double mean = 0.0;
      for (std::size_t g = 0; g < G; ++g) {
        v[g] = detail::moment_from_bins(e.r_edges, e.replicates[g], p, e.replicate_rho_b[g]);
        mean += v[g];
      }
      mean /= G;
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      m.stderr_ = std::sqrt(ss * (G - 1) / G);
    }
    out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Smoothing and shape comparison

struct SmoothedCurve {
  std::vector<double> x;
  std::vector<double> y;
  double bandwidth = 0.0;
};

inline double default_bandwidth(double rho_b) { return 0.15 / std::sqrt(kPi * rho_b); }

// Gaussian kernel smoothing of a histogram evaluated at its bin centers.
inline SmoothedCurve smooth(const std::vector<double>& edges, const std::vector<double>& values, double bandwidth) {
  if (!(bandwidth > 0)) throw ParameterError("bandwidth must be positive");
  detail::check_edges(edges);
  if (values.size() + 1 != edges.size()) throw InputError("histogram values do not match its edges");
  const std::size_t n = values.size();
  SmoothedCurve c;
  c.bandwidth = bandwidth;
  c.x.resize(n);
  c.y.assign(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) c.x[k] = 0.5 * (edges[k] + edges[k + 1]);
  for (std::size_t i = 0; i < n; ++i) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double u = (c.x[i] - c.x[j]) / bandwidth;
      if (std::abs(u) > 8.0) continue;
      const double w = std::exp(-0.5 * u * u) * (edges[j + 1] - edges[j]);
      num += w * values[j];
      den += w;
    }
    c.y[i] = num / den;
  }
  return c;
}

inline SmoothedCurve smooth(const RadialDensityEstimate& e, double bandwidth) {
  return smooth(e.bin_edges, e.density, bandwidth);
}

// Smooths rho2T / rho_b^2.
inline SmoothedCurve smooth(const PairCorrelationEstimate& e, double bandwidth) {
  std::vector<double> v(e.bins());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = e.ratio(k);
  return smooth(e.r_edges, v, bandwidth);
}

struct ShapeMatch {
  double scale = 0.0;
  double max_rel_dev = 0.0;
};

// Least-squares scale s for y ~ s model(x), and the largest |y - s m| / |s m| after the fit.
inline ShapeMatch shape_match(const SmoothedCurve& mc, const std::function<double(double)>& model) {
  if (mc.x.empty()) throw FitError("no points to match");
  std::vector<double> m(mc.x.size());
  double sy = 0.0, mm = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = model(mc.x[i]);
    sy += mc.y[i] * m[i];
    mm += m[i] * m[i];
  }
  if (!(mm > 0)) throw FitError("model vanishes on the curve's support");
  ShapeMatch out;
  out.scale = sy / mm;
  if (!(out.scale > 0)) throw FitError("no positive scale fits the curve");
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double fit = out.scale * m[i];
    if (fit == 0.0) {
      if (mc.y[i] != 0.0) out.max_rel_dev = INFINITY;
      continue;
    }
    out.max_rel_dev = std::max(out.max_rel_dev, std::abs(mc.y[i] - fit) / std::abs(fit));
  }
  return out;
}

}  // namespace rmtlab
