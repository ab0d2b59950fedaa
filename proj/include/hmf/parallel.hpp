#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace hmf {

/// Particles per work chunk. Reductions combine per-chunk partial sums in
/// ascending chunk order, so results depend on this value but never on the
/// number of worker threads.
inline constexpr std::size_t kChunkSize = std::size_t{1} << 14;

inline std::size_t chunk_count(std::size_t n) { return (n + kChunkSize - 1) / kChunkSize; }

/// Fixed pool of workers executing blocking parallel-for loops over chunk
/// indices. One loop at a time; callers must not share a pool across threads.
class ThreadPool {
 public:
  explicit ThreadPool(std::size_t threads);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  std::size_t size() const noexcept { return workers_.size() + 1; }

  /// Calls fn(i) for every i in [0, n) and returns when all calls finished.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

 private:
  void worker_loop();
  void drain();

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t task_size_ = 0;
  std::size_t next_ = 0;
  std::size_t active_ = 0;
  std::size_t generation_ = 0;
  bool stop_ = false;
};

/// Worker count from HMF_THREADS, falling back to the hardware concurrency.
std::size_t default_thread_count();

/// Process-wide pool sized by default_thread_count().
ThreadPool& default_pool();

}  // namespace hmf
