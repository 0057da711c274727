#pragma once

// Per-anchor parallel driver. Each worker claims anchors from a shared
// counter, buffers that anchor's records locally, then flushes them through
// the sink under a mutex — sink calls are serialized and each anchor's block
// is contiguous, but block order across anchors is unspecified.

#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace durable {

template <typename Record, typename PerAnchor>
void forEachAnchorParallel(int32_t n, int threads,
                           const std::function<void(const Record&)>& sink,
                           const PerAnchor& perAnchor) {
  if (threads <= 1 || n <= 1) {
    for (int32_t p = 0; p < n; ++p) {
      perAnchor(p, sink);
    }
    return;
  }
  std::atomic<int32_t> next{0};
  std::mutex flushMu;
  std::vector<std::thread> pool;
  std::exception_ptr firstError;
  std::mutex errorMu;
  int workers = std::min<int>(threads, n);
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      std::vector<Record> local;
      std::function<void(const Record&)> collect = [&local](const Record& r) {
        local.push_back(r);
      };
      for (;;) {
        int32_t p = next.fetch_add(1, std::memory_order_relaxed);
        if (p >= n) break;
        local.clear();
        try {
          perAnchor(p, collect);
        } catch (...) {
          std::lock_guard<std::mutex> lk(errorMu);
          if (!firstError) firstError = std::current_exception();
          break;
        }
        if (!local.empty()) {
          std::lock_guard<std::mutex> lk(flushMu);
          for (const Record& r : local) sink(r);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (firstError) std::rethrow_exception(firstError);
}

}  // namespace durable
