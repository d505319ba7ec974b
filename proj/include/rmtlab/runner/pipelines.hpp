#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "../estimators.hpp"
#include "config.hpp"

namespace rmtlab::runner {

// Cloud for draw `index`: the ensemble sample, or for the Poisson control the same
// number of iid uniform points in the disk of the spectral radius.
EigenvalueCloud draw_cloud(const ExperimentConfig& cfg, std::uint64_t index);

struct CloudStatsOptions {
  bool radial = false;
  bool pair = false;
  bool keep_clouds = false;
};

// Mergeable bundle of the estimators a command needs.
class CloudStats {
 public:
  CloudStats(const ExperimentConfig& cfg, CloudStatsOptions opt);
  void add(EigenvalueCloud c);
  void merge(const CloudStats& o);

  std::optional<RadialDensityAccumulator> radial;
  std::optional<PairCorrelationAccumulator> pair;
  std::vector<EigenvalueCloud> clouds;
  std::uint64_t n_samples = 0;
  double max_pair_gap = 0.0;

 private:
  bool keep_;
};

CloudStats accumulate(const ExperimentConfig& cfg, CloudStatsOptions opt, int workers,
                      const std::atomic<bool>* stop = nullptr);

struct SmoothedPeak {
  double r = 0.0;
  double value = 0.0;
  std::size_t index = 0;
};

SmoothedPeak smoothed_peak(const SmoothedCurve& c);
std::size_t raw_argmax(const PairCorrelationEstimate& e);

// Density model columns aligned with the bins of a radial estimate.
struct ModelColumn {
  std::vector<double> r;
  std::vector<double> pointwise;
  std::vector<double> bin_mean;
};
std::optional<ModelColumn> model_column(const ExperimentConfig& cfg, const RadialDensityEstimate& e);

// Settings of the self-dual figure runs.
ExperimentConfig figure_config(const std::string& scale, std::uint64_t seed);

}  // namespace rmtlab::runner
