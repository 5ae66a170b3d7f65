#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace vnav {

/// Fixed-size pool that runs index-parallel loops.
///
/// Index i is always executed by worker (i % size()), and callers combine
/// per-index results in index order, so a kernel's output depends only on how
/// the caller chunks its input and never on scheduling.
class WorkerPool {
 public:
  /// threads == 0 selects std::thread::hardware_concurrency().
  explicit WorkerPool(std::size_t threads = 0);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const { return workers_.size() + 1; }

  /// Runs task(i) for every i in [0, n) and blocks until all calls return.
  /// The first exception thrown by a task is rethrown here.
  void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

 private:
  void worker_loop(std::size_t slot);
  void run_slot(std::size_t slot);

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t n_ = 0;
  std::size_t generation_ = 0;
  std::size_t pending_ = 0;
  bool stopping_ = false;
  std::exception_ptr error_;
};

/// Runs task over [0, n) on pool when given, else inline.
void for_each_index(WorkerPool* pool, std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace vnav
