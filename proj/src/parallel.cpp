#include "cycheck/parallel.hpp"

#include <stdexcept>

namespace cycheck {

WorkerPool::WorkerPool(int workers) : workers_(workers) {
  if (workers < 1) throw std::invalid_argument("WorkerPool: workers must be >= 1");
  errors_.resize(static_cast<std::size_t>(workers_));
  threads_.reserve(static_cast<std::size_t>(workers_ - 1));
  for (int i = 1; i < workers_; ++i) threads_.emplace_back([this, i] { worker_loop(i); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard lock(mu_);
    stopping_ = true;
  }
  cv_start_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::worker_loop(int index) {
  std::uint64_t seen = 0;
  for (;;) {
    const std::function<void(int)>* job = nullptr;
    {
      std::unique_lock lock(mu_);
      cv_start_.wait(lock, [&] { return stopping_ || generation_ != seen; });
      if (stopping_) return;
      seen = generation_;
      job = job_;
    }
    try {
      (*job)(index);
    } catch (...) {
      std::lock_guard lock(mu_);
      errors_[static_cast<std::size_t>(index)] = std::current_exception();
    }
    bool last = false;
    {
      std::lock_guard lock(mu_);
      last = --pending_ == 0;
    }
    if (last) cv_done_.notify_all();
  }
}

void WorkerPool::run(const std::function<void(int)>& fn) {
  if (workers_ == 1) {
    fn(0);
    return;
  }
  {
    std::lock_guard lock(mu_);
    job_ = &fn;
    pending_ = workers_ - 1;
    ++generation_;
    for (auto& e : errors_) e = nullptr;
  }
  cv_start_.notify_all();
  try {
    fn(0);
  } catch (...) {
    std::lock_guard lock(mu_);
    errors_[0] = std::current_exception();
  }
  {
    std::unique_lock lock(mu_);
    cv_done_.wait(lock, [&] { return pending_ == 0; });
  }
  for (auto& e : errors_)
    if (e) std::rethrow_exception(e);
}

}  // namespace cycheck
