#include "rmtlab/runner/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "rmtlab/analytic.hpp"
#include "rmtlab/errors.hpp"
#include "rmtlab/sumrules.hpp"

namespace rmtlab::runner {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    throw ParameterError("config key '" + key + "' needs a number, got '" + v + "'");
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  int base = 10;
  if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
    b += 2;
    base = 16;
  }
  // TOML allows 1_000_000.
  std::string digits;
  for (const char* c = b; c != e; ++c)
    if (*c != '_') digits.push_back(*c);
  const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), x, base);
  if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size())
    throw ParameterError("config key '" + key + "' needs a nonnegative integer, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const std::uint64_t x = to_u64(key, v);
  if (x > 1u << 30) throw ParameterError("config key '" + key + "' is out of range");
  return int(x);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (!val.empty() && val[0] == '"') {
      const auto close = val.find('"', 1);
      if (close == std::string::npos)
        throw ParameterError("config line " + std::to_string(lineno) + ": unterminated string");
      const std::string rest = trim(val.substr(close + 1));
      if (!rest.empty() && rest[0] != '#')
        throw ParameterError("config line " + std::to_string(lineno) + ": trailing text after string");
      val = val.substr(1, close - 1);
    } else {
      const auto hash = val.find('#');
      if (hash != std::string::npos) val = trim(val.substr(0, hash));
    }
    if (key.empty() || val.empty())
      throw ParameterError("config line " + std::to_string(lineno) + ": empty key or value");
    if (kv.count(key)) throw ParameterError("config key '" + key + "' given twice");
    kv[key] = val;
  }
  return kv;
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig c;
  for (const auto& [k, v] : parse_key_values(text)) {
    if (k == "family") c.spec.family = family_from_name(v);
    else if (k == "beta") c.spec.field = field_from_beta(to_int(k, v));
    else if (k == "N") c.spec.N = to_int(k, v);
    else if (k == "n") c.spec.n = to_int(k, v);
    else if (k == "M") c.spec.M = to_int(k, v);
    else if (k == "m") c.spec.m = to_int(k, v);
    else if (k == "tau") c.spec.tau = to_double(k, v);
    else if (k == "sigma") c.spec.sigma = to_double(k, v);
    else if (k == "base") c.spec.base = family_from_name(v);
    else if (k == "n_samples") c.n_samples = to_u64(k, v);
    else if (k == "seed") c.seed = to_u64(k, v);
    else if (k == "workers") c.workers = to_int(k, v);
    else if (k == "frame") c.frame = frame_from_name(v);
    else if (k == "bins") c.bins = to_int(k, v);
    else if (k == "r_min") c.r_min = to_double(k, v);
    else if (k == "r_max") c.r_max = to_double(k, v);
    else if (k == "edge_shift") c.edge_shift = to_double(k, v);
    else if (k == "pair_bins") c.pair_bins = to_int(k, v);
    else if (k == "pair_r_max") c.pair_r_max = to_double(k, v);
    else if (k == "window") c.window = to_double(k, v);
    else if (k == "rho_b") c.rho_b = to_double(k, v);
    else if (k == "bandwidth") c.bandwidth = to_double(k, v);
    else if (k == "control") {
      if (v != "none" && v != "poisson") throw ParameterError("control must be none or poisson");
      c.poisson_control = v == "poisson";
    } else if (k == "suite") c.suite = v;
    else if (k == "figure") c.figure = v;
    else if (k == "scale") c.scale = v;
    else if (k == "out") c.out = v;
    else throw ParameterError("unknown config key '" + k + "'");
  }
  c.spec.validate();
  if (c.n_samples < 1) throw ParameterError("n_samples must be positive");
  if (c.workers < 1) throw ParameterError("workers must be positive");
  if (c.bins < 1 || c.pair_bins < 1) throw ParameterError("bin counts must be positive");
  if (!(c.window > 0 && c.window <= 0.8)) throw ParameterError("window must lie in (0, 0.8]");
  if (c.rho_b && !(*c.rho_b > 0)) throw ParameterError("rho_b must be positive");
  if (c.bandwidth && !(*c.bandwidth > 0)) throw ParameterError("bandwidth must be positive");
  if (c.poisson_control && c.spec.field != Field::Complex)
    throw ParameterError("the Poisson control uses beta = 2 specs");
  if (c.figure != "fig1" && c.figure != "fig2") throw ParameterError("figure must be fig1 or fig2");
  if (c.scale != "desk" && c.scale != "full") throw ParameterError("scale must be desk or full");
  suite_from_name(c.suite);
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e;
  auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string("auto"); };
  e.emplace_back("family", std::string(family_name(spec.family)));
  e.emplace_back("beta", std::to_string(beta(spec.field)));
  e.emplace_back("N", std::to_string(spec.N));
  e.emplace_back("n", std::to_string(spec.n));
  e.emplace_back("M", std::to_string(spec.M));
  e.emplace_back("m", std::to_string(spec.m));
  e.emplace_back("tau", format_double(spec.tau));
  e.emplace_back("sigma", format_double(spec.sigma));
  e.emplace_back("base", std::string(family_name(spec.base)));
  e.emplace_back("n_samples", std::to_string(n_samples));
  e.emplace_back("seed", std::to_string(seed));
  e.emplace_back("workers", std::to_string(workers));
  e.emplace_back("frame", std::string(frame_name(frame)));
  e.emplace_back("bins", std::to_string(bins));
  e.emplace_back("r_min", opt(r_min));
  e.emplace_back("r_max", opt(r_max));
  e.emplace_back("edge_shift", opt(edge_shift));
  e.emplace_back("pair_bins", std::to_string(pair_bins));
  e.emplace_back("pair_r_max", opt(pair_r_max));
  e.emplace_back("window", format_double(window));
  e.emplace_back("rho_b", opt(rho_b));
  e.emplace_back("bandwidth", opt(bandwidth));
  e.emplace_back("control", poisson_control ? "poisson" : "none");
  e.emplace_back("suite", suite);
  e.emplace_back("figure", figure);
  e.emplace_back("scale", scale);
  e.emplace_back("out", out);
  return e;
}

// Re-parsable TOML form; "auto" entries are left out.
std::string ExperimentConfig::to_text() const {
  static const std::set<std::string> words = {"family", "base", "frame", "control", "suite", "figure", "scale", "out"};
  std::string s;
  for (const auto& [k, v] : echo()) {
    if (v == "auto") continue;
    s += k + " = " + (words.count(k) ? "\"" + v + "\"" : v) + "\n";
  }
  return s;
}

double ExperimentConfig::resolved_edge_shift() const {
  return edge_shift ? *edge_shift : spectral_radius(spec);
}

double ExperimentConfig::frame_length() const { return spectral_radius(spec); }

std::vector<double> ExperimentConfig::density_edges() const {
  const double R = spectral_radius(spec);
  const bool unbounded = spec.family == Family::Spherical ||
                         ((spec.family == Family::Induced || spec.family == Family::Product) &&
                          spec.base == Family::Spherical);
  double lo = 0.0, hi = 0.0;
  switch (frame) {
    case Frame::Raw: hi = unbounded ? 4.0 : 1.25 * R; break;
    case Frame::Unit: hi = unbounded ? 4.0 : 1.25; break;
    case Frame::EdgeShifted:
      lo = -resolved_edge_shift();
      hi = 0.3 * resolved_edge_shift();
      break;
  }
  return linspace_edges(r_min.value_or(lo), r_max.value_or(hi), bins);
}

std::optional<double> ExperimentConfig::fixed_rho_b() const {
  if (rho_b) return rho_b;
  if (spec.family == Family::SelfDual && !poisson_control) return 1.0 / (4.0 * kPi * spec.sigma * spec.sigma);
  return std::nullopt;
}

double ExperimentConfig::nominal_rho_b() const {
  if (auto r = fixed_rho_b()) return *r;
  const double R = spectral_radius(spec);
  if (auto m = density_model_for(spec)) {
    const double v = predicted_density(*m, cplx(0.5 * R, 0.0));
    if (std::isfinite(v) && v > 0) return v;
  }
  return blowup(spec.field) * spec.N / (kPi * R * R);
}

std::vector<double> ExperimentConfig::pair_edges() const {
  const double hi = pair_r_max.value_or(6.0 / std::sqrt(kPi * nominal_rho_b()));
  return linspace_edges(0.0, hi, pair_bins);
}

double ExperimentConfig::resolved_bandwidth() const {
  return bandwidth.value_or(default_bandwidth(nominal_rho_b()));
}

}  // namespace rmtlab::runner
