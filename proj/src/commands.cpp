#include "rmtlab/runner/commands.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include "rmtlab/parallel.hpp"
#include "rmtlab/runner/output.hpp"
#include "rmtlab/runner/pipelines.hpp"
#include "rmtlab/sumrules.hpp"

namespace rmtlab::runner {

namespace {

using nlohmann::json;

// Runs body with a recorder, mapping failures to exit codes and always leaving a manifest.
int guarded(const std::string& command, const ExperimentConfig& cfg,
            const std::function<int(RunRecorder&)>& body) {
  std::optional<RunRecorder> rec;
  try {
    rec.emplace(command, cfg, cfg.out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "rmtlab: %s\n", e.what());
    return kRuntimeError;
  }
  int code = kRuntimeError;
  bool complete = false;
  try {
    code = body(*rec);
    complete = true;
  } catch (const Cancelled& e) {
    rec->warn("cancelled after " + std::to_string(e.completed) + " samples");
    std::fprintf(stderr, "rmtlab: cancelled\n");
    code = kRuntimeError;
  } catch (const ParameterError& e) {
    rec->warn(e.what());
    std::fprintf(stderr, "rmtlab: %s\n", e.what());
    code = kUsageError;
  } catch (const std::exception& e) {
    rec->warn(e.what());
    std::fprintf(stderr, "rmtlab: %s\n", e.what());
    code = kRuntimeError;
  }
  rec->finish(complete, code);
  return code;
}

void record_pair_summary(RunRecorder& rec, const PairCorrelationEstimate& e, const SmoothedCurve& sm) {
  auto& s = rec.summary();
  const SmoothedPeak p = smoothed_peak(sm);
  const std::size_t raw = raw_argmax(e);
  s["rho_b"] = e.rho_b;
  s["rho_b_fixed"] = e.rho_b_fixed;
  s["rho_window"] = e.rho_window;
  s["window"] = e.window;
  s["total_pairs"] = e.total_pairs;
  s["bandwidth"] = sm.bandwidth;
  s["smoothed_peak_r"] = p.r;
  s["smoothed_peak_value"] = p.value;
  s["raw_argmax_r"] = e.center(raw);
  s["peak_shift_bins"] = double(p.index) - double(raw);
  json mom = json::array();
  bool biased = false;
  for (const auto& m : moments_of_rho2T(e)) {
    mom.push_back({{"p", m.p}, {"value", m.value}, {"stderr", m.stderr_}, {"bias_warning", m.bias_warning}});
    biased = biased || m.bias_warning;
  }
  s["moments"] = mom;
  if (biased) rec.warn("pair range ends before |rho2T| < 1e-3 rho_b^2; moments may be biased");
  if (e.low_power)
    rec.warn("statistical power: only " + std::to_string(e.total_pairs) + " pairs (< 10000)");
}

void record_density(RunRecorder& rec, const ExperimentConfig& cfg, const RadialDensityEstimate& e) {
  rec.write_file("density.csv", density_csv(e));
  if (auto m = model_column(cfg, e)) rec.write_file("density_model.csv", density_model_csv(*m));
  auto& s = rec.summary();
  s["frame"] = std::string(frame_name(e.frame));
  if (e.frame == Frame::EdgeShifted) s["edge_shift"] = e.shift;
  if (e.frame == Frame::Unit) s["frame_length"] = e.length;
  s["n_points"] = e.n_points;
  s["n_samples"] = e.n_samples;
}

}  // namespace

int cmd_sample(const ExperimentConfig& cfg, const std::atomic<bool>* stop) {
  return guarded("sample", cfg, [&](RunRecorder& rec) {
    rec.begin_phase("sample");
    CloudStats st = accumulate(cfg, {.keep_clouds = true}, cfg.workers, stop);
    rec.begin_phase("write");
    std::string csv = eigs_csv_header();
    std::uint64_t n_real = 0, rows = 0;
    for (const auto& c : st.clouds) {
      append_eigs_rows(csv, c);
      n_real += c.n_real;
      rows += c.points.size();
    }
    rec.write_file("eigs.csv", csv);
    rec.summary()["rows"] = rows;
    rec.summary()["n_real_total"] = n_real;
    return int(kSuccess);
  });
}

int cmd_density(const ExperimentConfig& cfg, const std::atomic<bool>* stop) {
  return guarded("density", cfg, [&](RunRecorder& rec) {
    rec.begin_phase("sample+estimate");
    CloudStats st = accumulate(cfg, {.radial = true}, cfg.workers, stop);
    rec.begin_phase("write");
    record_density(rec, cfg, st.radial->result());
    return int(kSuccess);
  });
}

int cmd_paircorr(const ExperimentConfig& cfg, const std::atomic<bool>* stop) {
  return guarded("paircorr", cfg, [&](RunRecorder& rec) {
    rec.begin_phase("sample+estimate");
    CloudStats st = accumulate(cfg, {.pair = true}, cfg.workers, stop);
    rec.begin_phase("finalize");
    const PairCorrelationEstimate e = st.pair->result();
    const SmoothedCurve sm = smooth(e, cfg.resolved_bandwidth());
    rec.begin_phase("write");
    rec.write_file("paircorr.csv", paircorr_csv(e));
    rec.write_file("paircorr_smooth.csv", smooth_csv(sm));
    record_pair_summary(rec, e, sm);
    return int(kSuccess);
  });
}

int cmd_verify(const ExperimentConfig& cfg, const std::atomic<bool>*) {
  return guarded("verify", cfg, [&](RunRecorder& rec) {
    const Suite suite = suite_from_name(cfg.suite);
    rec.begin_phase("quadrature");
    const SuiteResult res = run_suite(suite);
    rec.begin_phase("write");
    rec.write_file("verify.json", verify_json(res).dump(2) + "\n");
    auto& s = rec.summary();
    s["suite"] = cfg.suite;
    s["reports"] = res.reports.size();
    s["skipped"] = res.skipped;
    std::size_t failed = 0;
    for (const auto& r : res.reports) failed += !r.pass;
    s["failed"] = failed;
    return res.all_pass() ? int(kSuccess) : int(kVerificationFailed);
  });
}

int cmd_reproduce(const ExperimentConfig& cfg, const std::atomic<bool>* stop) {
  ExperimentConfig fc = figure_config(cfg.scale, cfg.seed);
  fc.workers = cfg.workers;
  fc.out = cfg.out;
  fc.figure = cfg.figure;
  return guarded("reproduce", fc, [&](RunRecorder& rec) {
    if (fc.scale == "full")
      rec.warn("full scale: 1000000 samples of size 140; expect a very long run");
    const bool fig1 = fc.figure == "fig1";
    rec.begin_phase("sample+estimate");
    CloudStats st = accumulate(fc, {.radial = !fig1, .pair = fig1}, fc.workers, stop);
    rec.begin_phase("write");
    auto& s = rec.summary();
    s["figure"] = fc.figure;
    s["max_pair_gap"] = st.max_pair_gap;
    s["pair_gap_bound"] = 1e-8 * std::sqrt(double(fc.spec.N));
    if (fig1) {
      const PairCorrelationEstimate e = st.pair->result();
      const SmoothedCurve sm = smooth(e, fc.resolved_bandwidth());
      rec.write_file("paircorr.csv", paircorr_csv(e));
      rec.write_file("paircorr_smooth.csv", smooth_csv(sm));
      record_pair_summary(rec, e, sm);
    } else {
      const RadialDensityEstimate e = st.radial->result();
      record_density(rec, fc, e);
      const double rho_b = *fc.fixed_rho_b();
      double peak = 0.0;
      for (double d : e.density) peak = std::max(peak, d);
      s["rho_b"] = rho_b;
      s["overshoot_ratio"] = peak / rho_b;
    }
    return int(kSuccess);
  });
}

}  // namespace rmtlab::runner
