#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rmtlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };
struct FitError : Error { using Error::Error; };

// Errors that can be traced back to one random draw carry its seed and index.
struct SeededError : Error {
  SeededError(const std::string& what, std::optional<std::uint64_t> seed = {},
              std::optional<std::uint64_t> index = {})
      : Error(decorate(what, seed, index)), seed(seed), index(index) {}

  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> index;

 private:
  static std::string decorate(const std::string& what, std::optional<std::uint64_t> seed,
                              std::optional<std::uint64_t> index) {
    std::string s = what;
    if (seed) s += " [seed=" + std::to_string(*seed);
    if (seed && index) s += " draw=" + std::to_string(*index);
    if (seed) s += "]";
    return s;
  }
};

struct SamplingError : SeededError { using SeededError::SeededError; };
struct SolverError : SeededError { using SeededError::SeededError; };
struct StructuralError : SeededError { using SeededError::SeededError; };

struct BudgetError : Error {
  BudgetError(const std::string& what, long evaluations)
      : Error(what + " (evaluations=" + std::to_string(evaluations) + ")"),
        evaluations(evaluations) {}
  long evaluations;
};

}  // namespace rmtlab
