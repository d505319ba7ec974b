#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string_view>

namespace rmtlab {

// Recorded in every run manifest. Bump the suffix if stream derivation changes.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64+splitmix64-streams/v1";

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// One independent stream per (master seed, draw index). Draw i sees the same
// numbers no matter which worker runs it.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : master_(master_seed), index_(stream_index) {
    std::uint64_t s = master_seed ^ (0xd1b54a32d192ed03ULL * (stream_index + 1));
    std::array<std::uint32_t, 8> words{};
    for (std::size_t k = 0; k < words.size(); k += 2) {
      std::uint64_t w = splitmix64(s);
      words[k] = static_cast<std::uint32_t>(w);
      words[k + 1] = static_cast<std::uint32_t>(w >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  double normal() { return normal_(engine_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  std::uint64_t bits() { return engine_(); }
  int poisson(double mean) { return std::poisson_distribution<int>(mean)(engine_); }

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t master_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rmtlab
