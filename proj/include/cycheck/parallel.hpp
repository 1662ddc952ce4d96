#pragma once

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace cycheck {

/// Fixed-width fork-join pool. run(fn) invokes fn(w) once for every worker
/// index w in [0, workers); index 0 runs on the calling thread. A pool of
/// width 1 never spawns threads. Exceptions thrown by workers are rethrown
/// on the calling thread in worker-index order, so error reporting does not
/// depend on scheduling.
class WorkerPool {
 public:
  explicit WorkerPool(int workers);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  int workers() const { return workers_; }

  void run(const std::function<void(int)>& fn);

 private:
  void worker_loop(int index);

  int workers_ = 1;
  std::vector<std::thread> threads_;

  std::mutex mu_;
  std::condition_variable cv_start_;
  std::condition_variable cv_done_;
  const std::function<void(int)>* job_ = nullptr;
  std::uint64_t generation_ = 0;
  int pending_ = 0;
  bool stopping_ = false;
  std::vector<std::exception_ptr> errors_;
};

}  // namespace cycheck
