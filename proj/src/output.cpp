#include "rmtlab/runner/output.hpp"

#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "rmtlab/errors.hpp"
#include "rmtlab/rmtlab.hpp"

namespace rmtlab::runner {

using nlohmann::json;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

namespace {

void row(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out.push_back(',');
    out += format_double(v);
    first = false;
  }
  out.push_back('\n');
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

std::string eigs_csv_header() { return "sample_id,re,im,is_real\n"; }

void append_eigs_rows(std::string& out, const EigenvalueCloud& c) {
  const std::string id = std::to_string(c.index);
  for (const cplx& z : c.points) {
    const bool real = c.field == Field::Real && z.imag() == 0.0;
    out += id + ',' + format_double(z.real()) + ',' + format_double(z.imag()) + (real ? ",1\n" : ",0\n");
  }
}

std::string density_csv(const RadialDensityEstimate& e) {
  std::string s = "r_lo,r_hi,density,stderr\n";
  for (std::size_t k = 0; k < e.bins(); ++k) row(s, {e.bin_edges[k], e.bin_edges[k + 1], e.density[k], e.stderr_[k]});
  return s;
}

std::string density_model_csv(const ModelColumn& m) {
  std::string s = "r,model,model_bin_mean\n";
  for (std::size_t k = 0; k < m.r.size(); ++k) row(s, {m.r[k], m.pointwise[k], m.bin_mean[k]});
  return s;
}

std::string paircorr_csv(const PairCorrelationEstimate& e) {
  std::string s = "r_lo,r_hi,rho2T,rho2T_over_rhob2,stderr\n";
  for (std::size_t k = 0; k < e.bins(); ++k)
    row(s, {e.r_edges[k], e.r_edges[k + 1], e.rho2T[k], e.ratio(k), e.stderr_[k]});
  return s;
}

std::string smooth_csv(const SmoothedCurve& c) {
  std::string s = "r,value\n";
  for (std::size_t k = 0; k < c.x.size(); ++k) row(s, {c.x[k], c.y[k]});
  return s;
}

json report_json(const SumRuleReport& r) {
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  return json{{"rule_id", std::string(rule_name(r.rule_id))},
              {"expected", complex_json(r.expected)},
              {"computed", complex_json(r.computed)},
              {"tolerance", r.tolerance},
              {"tolerance_kind", r.tolerance_kind == ToleranceKind::Absolute ? "absolute" : "relative"},
              {"deviation", r.deviation()},
              {"pass", r.pass},
              {"params", params},
              {"error_estimate", r.error_estimate},
              {"n_evaluations", r.n_evaluations},
              {"note", r.note}};
}

json verify_json(const SuiteResult& s) {
  json a = json::array();
  for (const auto& r : s.reports) a.push_back(report_json(r));
  return a;
}

RunRecorder::RunRecorder(std::string command, const ExperimentConfig& cfg, std::filesystem::path dir)
    : command_(std::move(command)), cfg_(cfg), dir_(std::move(dir)), start_(clock::now()) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw InputError("cannot create output directory '" + dir_.string() + "': " + ec.message());
}

void RunRecorder::write_file(const std::string& name, const std::string& bytes) {
  const auto path = dir_ / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f.write(bytes.data(), std::streamsize(bytes.size()));
  f.close();
  if (!f) throw InputError("cannot write '" + path.string() + "'");
  outputs_.push_back({{"file", name}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
}

void RunRecorder::begin_phase(const std::string& name) {
  end_phase();
  phase_ = name;
  phase_start_ = clock::now();
}

void RunRecorder::end_phase() {
  if (phase_.empty()) return;
  const double dt = std::chrono::duration<double>(clock::now() - phase_start_).count();
  phases_.push_back({{"phase", phase_}, {"seconds", dt}});
  phase_.clear();
}

void RunRecorder::warn(const std::string& text) { warnings_.push_back(text); }

void RunRecorder::finish(bool complete, int exit_code) {
  end_phase();
  json config = json::object();
  for (const auto& [k, v] : cfg_.echo()) config[k] = v;
  json m{{"command", command_},
         {"complete", complete},
         {"exit_code", exit_code},
         {"library_version", kVersion},
         {"rng_algorithm", std::string(kRngAlgorithm)},
         {"config", config},
         {"config_text", cfg_.to_text()},
         {"wall_time_seconds", std::chrono::duration<double>(clock::now() - start_).count()},
         {"phases", phases_},
         {"outputs", outputs_},
         {"warnings", warnings_},
         {"summary", summary_}};
  const std::string text = m.dump(2) + "\n";
  std::ofstream f(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  f.write(text.data(), std::streamsize(text.size()));
}

}  // namespace rmtlab::runner
