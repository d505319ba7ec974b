#pragma once

#include <atomic>

#include "config.hpp"

namespace rmtlab::runner {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsageError = 2, kRuntimeError = 3 };

// Each command writes its files and manifest.json under cfg.out and returns the
// process exit code. Cancellation through *stop leaves a manifest marked incomplete.
int cmd_sample(const ExperimentConfig& cfg, const std::atomic<bool>* stop = nullptr);
int cmd_density(const ExperimentConfig& cfg, const std::atomic<bool>* stop = nullptr);
int cmd_paircorr(const ExperimentConfig& cfg, const std::atomic<bool>* stop = nullptr);
int cmd_verify(const ExperimentConfig& cfg, const std::atomic<bool>* stop = nullptr);
int cmd_reproduce(const ExperimentConfig& cfg, const std::atomic<bool>* stop = nullptr);

}  // namespace rmtlab::runner
