#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "../ensembles.hpp"
#include "../estimators.hpp"

namespace rmtlab::runner {

// Flat `key = value` text, one pair per line, `#` comments; values are bare
// numbers or words, or double-quoted strings. A TOML subset.
std::map<std::string, std::string> parse_key_values(const std::string& text);

struct ExperimentConfig {
  EnsembleSpec spec;
  std::uint64_t n_samples = 100;
  std::uint64_t seed = 1;
  int workers = 1;

  // Radial density.
  Frame frame = Frame::Raw;
  int bins = 60;
  std::optional<double> r_min, r_max;
  std::optional<double> edge_shift;

  // Pair correlation.
  int pair_bins = 60;
  std::optional<double> pair_r_max;
  double window = 0.5;
  std::optional<double> rho_b;
  std::optional<double> bandwidth;
  bool poisson_control = false;

  // Verification and reproduction.
  std::string suite = "all";
  std::string figure = "fig1";
  std::string scale = "desk";

  std::string out = ".";

  static ExperimentConfig from_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);

  // Every setting with its resolved value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
  std::string to_text() const;

  // Resolved estimator settings.
  double resolved_edge_shift() const;
  std::vector<double> density_edges() const;
  double frame_length() const;
  // Reference density for rho2T / rho_b^2, when known without estimation.
  std::optional<double> fixed_rho_b() const;
  // Expected bulk density used to size the pair range and bandwidth.
  double nominal_rho_b() const;
  std::vector<double> pair_edges() const;
  double resolved_bandwidth() const;
};

std::string format_double(double x);

}  // namespace rmtlab::runner
