#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "errors.hpp"

namespace rmtlab {

struct Cancelled : Error {
  explicit Cancelled(std::uint64_t done) : Error("run cancelled"), completed(done) {}
  std::uint64_t completed;
};

inline constexpr std::uint64_t kBlockSize = 16;

// Runs body(acc, i) for i in [0, n) on `workers` threads. Items are grouped into
// fixed blocks, each filling its own accumulator from make(); block results are
// merged in block order, so the outcome does not depend on scheduling. The
// exception of the lowest failing block is rethrown. Setting *stop ends the run
// with Cancelled once the blocks in flight finish.
template <class Make, class Body>
auto parallel_accumulate(std::uint64_t n, int workers, Make make, Body body,
                         const std::atomic<bool>* stop = nullptr) -> decltype(make()) {
  using Acc = decltype(make());
  const std::uint64_t blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<std::optional<Acc>> parts(blocks);
  std::vector<std::exception_ptr> errors(blocks);
  std::atomic<std::uint64_t> next{0};
  std::atomic<bool> failed{false};

  auto worker = [&] {
    for (;;) {
      if (stop && stop->load()) return;
      const std::uint64_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        Acc acc = make();
        const std::uint64_t hi = std::min(n, (b + 1) * kBlockSize);
        for (std::uint64_t i = b * kBlockSize; i < hi; ++i) body(acc, i);
        parts[b].emplace(std::move(acc));
      } catch (...) {
        errors[b] = std::current_exception();
        failed = true;
        return;
      }
    }
  };

  const int k = std::max(1, std::min<int>(workers, int(std::max<std::uint64_t>(blocks, 1))));
  if (k == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  if (failed)
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  Acc total = make();
  std::uint64_t done = 0;
  for (auto& p : parts) {
    if (!p) throw Cancelled(done * kBlockSize);
    total.merge(*p);
    ++done;
  }
  return total;
}

}  // namespace rmtlab
