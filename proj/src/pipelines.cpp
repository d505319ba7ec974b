#include "rmtlab/runner/pipelines.hpp"

#include <cmath>

#include "rmtlab/analytic.hpp"
#include "rmtlab/cloud.hpp"
#include "rmtlab/parallel.hpp"
#include "rmtlab/rng.hpp"

namespace rmtlab::runner {

EigenvalueCloud draw_cloud(const ExperimentConfig& cfg, std::uint64_t index) {
  if (!cfg.poisson_control) return sample_cloud(cfg.spec, cfg.seed, index);
  EigenvalueCloud c;
  c.spec = cfg.spec;
  c.field = cfg.spec.field;
  c.seed = cfg.seed;
  c.index = index;
  RngStream rng(cfg.seed, index);
  const double R = spectral_radius(cfg.spec);
  // A Poisson number of points: a fixed count would add the -rho^2/N correlation of a binomial process.
  const int n = rng.poisson(blowup(cfg.spec.field) * cfg.spec.N);
  c.points.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double r = R * std::sqrt(rng.uniform());
    c.points.push_back(std::polar(r, 2.0 * kPi * rng.uniform()));
  }
  return c;
}

CloudStats::CloudStats(const ExperimentConfig& cfg, CloudStatsOptions opt) : keep_(opt.keep_clouds) {
  if (opt.radial)
    radial.emplace(cfg.density_edges(), cfg.frame, cfg.frame_length(), cfg.resolved_edge_shift());
  if (opt.pair) pair.emplace(cfg.pair_edges(), cfg.window * spectral_radius(cfg.spec), cfg.fixed_rho_b());
}

void CloudStats::add(EigenvalueCloud c) {
  if (radial) radial->add(c);
  if (pair) pair->add(c);
  max_pair_gap = std::max(max_pair_gap, c.max_pair_gap);
  ++n_samples;
  if (keep_) clouds.push_back(std::move(c));
}

void CloudStats::merge(const CloudStats& o) {
  if (radial && o.radial) radial->merge(*o.radial);
  if (pair && o.pair) pair->merge(*o.pair);
  max_pair_gap = std::max(max_pair_gap, o.max_pair_gap);
  n_samples += o.n_samples;
  clouds.insert(clouds.end(), o.clouds.begin(), o.clouds.end());
}

CloudStats accumulate(const ExperimentConfig& cfg, CloudStatsOptions opt, int workers,
                      const std::atomic<bool>* stop) {
  return parallel_accumulate(
      cfg.n_samples, workers, [&] { return CloudStats(cfg, opt); },
      [&](CloudStats& s, std::uint64_t i) { s.add(draw_cloud(cfg, i)); }, stop);
}

SmoothedPeak smoothed_peak(const SmoothedCurve& c) {
  SmoothedPeak p;
  if (c.y.empty()) return p;
  for (std::size_t i = 1; i < c.y.size(); ++i)
    if (c.y[i] > c.y[p.index]) p.index = i;
  p.r = c.x[p.index];
  p.value = c.y[p.index];
  return p;
}

std::size_t raw_argmax(const PairCorrelationEstimate& e) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < e.bins(); ++i)
    if (e.rho2T[i] > e.rho2T[k]) k = i;
  return k;
}

std::optional<ModelColumn> model_column(const ExperimentConfig& cfg, const RadialDensityEstimate& e) {
  auto model = density_model_for(cfg.spec);
  if (!model) return std::nullopt;
  // Plane radius and density factor for a frame coordinate.
  const double L = e.frame == Frame::Unit ? e.length : 1.0;
  const double shift = e.frame == Frame::EdgeShifted ? e.shift : 0.0;
  auto plane_r = [&](double x) { return std::max(0.0, L * (x + shift)); };
  ModelColumn col;
  for (std::size_t k = 0; k < e.bins(); ++k) {
    const double lo = e.bin_edges[k], hi = e.bin_edges[k + 1], mid = 0.5 * (lo + hi);
    col.r.push_back(mid);
    col.pointwise.push_back(L * L * predicted_density(*model, cplx(plane_r(mid), 0.0)));
    double mean = 0.0;
    const double area = e.area(k);
    if (area <= 0) {
    } else if (is_radial(*model)) {
      mean = radial_mass(*model, plane_r(lo), plane_r(hi)) / area;
    } else {
      constexpr int kAngles = 256;
      for (int j = 0; j < kAngles; ++j)
        mean += predicted_density(*model, std::polar(plane_r(mid), 2.0 * kPi * (j + 0.5) / kAngles));
      mean *= L * L / kAngles;
    }
    col.bin_mean.push_back(mean);
  }
  return col;
}

ExperimentConfig figure_config(const std::string& scale, std::uint64_t seed) {
  ExperimentConfig c;
  c.spec.family = Family::SelfDual;
  c.spec.field = Field::Quaternion;
  c.spec.N = 70;
  c.spec.sigma = 1.0 / std::sqrt(2.0);
  c.n_samples = scale == "full" ? 1'000'000 : 2000;
  c.seed = seed;
  c.frame = Frame::EdgeShifted;
  c.scale = scale;
  return c;
}

}  // namespace rmtlab::runner
