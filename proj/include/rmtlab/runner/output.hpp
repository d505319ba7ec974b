#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "../estimators.hpp"
#include "../sumrules.hpp"
#include "config.hpp"
#include "pipelines.hpp"

namespace rmtlab::runner {

std::string sha256_hex(const std::string& bytes);

std::string eigs_csv_header();
void append_eigs_rows(std::string& out, const EigenvalueCloud& c);
std::string density_csv(const RadialDensityEstimate& e);
std::string density_model_csv(const ModelColumn& m);
std::string paircorr_csv(const PairCorrelationEstimate& e);
std::string smooth_csv(const SmoothedCurve& c);

nlohmann::json report_json(const SumRuleReport& r);
nlohmann::json verify_json(const SuiteResult& s);

// Collects outputs, timings and notes of one command, and writes manifest.json.
class RunRecorder {
 public:
  RunRecorder(std::string command, const ExperimentConfig& cfg, std::filesystem::path dir);

  void write_file(const std::string& name, const std::string& bytes);
  void begin_phase(const std::string& name);
  void end_phase();
  void warn(const std::string& text);
  nlohmann::json& summary() { return summary_; }
  void finish(bool complete, int exit_code);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  using clock = std::chrono::steady_clock;
  std::string command_;
  ExperimentConfig cfg_;
  std::filesystem::path dir_;
  clock::time_point start_, phase_start_;
  std::string phase_;
  nlohmann::json phases_ = nlohmann::json::array();
  nlohmann::json outputs_ = nlohmann::json::array();
  nlohmann::json warnings_ = nlohmann::json::array();
  nlohmann::json summary_ = nlohmann::json::object();
};

}  // namespace rmtlab::runner
