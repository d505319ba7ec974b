#include <atomic>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "rmtlab/errors.hpp"
#include "rmtlab/rmtlab.hpp"
#include "rmtlab/runner/commands.hpp"
#include "rmtlab/runner/config.hpp"

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_sigint(int) { g_stop = true; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rmtlab::InputError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rmtlab::runner;
  CLI::App app{"Sampling, estimation and verification for non-Hermitian random matrix ensembles"};
  app.set_version_flag("--version", rmtlab::kVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string command;

  const char* names[] = {"sample", "density", "paircorr", "verify", "reproduce"};
  const char* help[] = {"write eigenvalue clouds to eigs.csv", "estimate the radial density (density.csv)",
                        "estimate the truncated pair correlation (paircorr.csv)",
                        "run the analytic identity checks (verify.json)",
                        "regenerate the self-dual figure data"};
  for (int k = 0; k < 5; ++k) {
    CLI::App* sub = app.add_subcommand(names[k], help[k]);
    auto* opt = sub->add_option("--config", config_path, "flat key = value config file");
    if (k < 3) opt->required();
    else opt->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--workers", workers, "worker threads (default: config, then RMTLAB_WORKERS, then 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->callback([&command, k, &names] { command = names[k]; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  ExperimentConfig cfg;
  bool config_sets_workers = false;
  try {
    if (!config_path.empty()) {
      const std::string text = read_file(config_path);
      config_sets_workers = parse_key_values(text).count("workers") > 0;
      cfg = ExperimentConfig::from_text(text);
    }
  } catch (const rmtlab::InputError& e) {
    std::fprintf(stderr, "rmtlab: %s\n", e.what());
    return kUsageError;
  } catch (const rmtlab::Error& e) {
    std::fprintf(stderr, "rmtlab: config: %s\n", e.what());
    return kUsageError;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--out")) cfg.out = out_dir;
    if (sub->count("--workers")) {
      cfg.workers = workers;
    } else if (!config_sets_workers) {
      if (const char* env = std::getenv("RMTLAB_WORKERS")) {
        const int w = std::atoi(env);
        if (w < 1) {
          std::fprintf(stderr, "rmtlab: RMTLAB_WORKERS must be a positive integer\n");
          return kUsageError;
        }
        cfg.workers = w;
      }
    }
  }

  std::signal(SIGINT, on_sigint);
  if (command == "sample") return cmd_sample(cfg, &g_stop);
  if (command == "density") return cmd_density(cfg, &g_stop);
  if (command == "paircorr") return cmd_paircorr(cfg, &g_stop);
  if (command == "verify") return cmd_verify(cfg, &g_stop);
  return cmd_reproduce(cfg, &g_stop);
}
