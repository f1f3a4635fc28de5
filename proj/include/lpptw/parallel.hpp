#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "lpptw/errors.hpp"

namespace lpptw {

// Raised by parallel_map when a job throws; names the lowest failing index.
// The original exception is kept so callers can map it to an exit code.
class JobFailure : public Error {
 public:
  JobFailure(std::size_t index, const std::string& what,
             std::exception_ptr cause)
      : Error("sample " + std::to_string(index) + " failed: " + what),
        index_(index),
        cause_(std::move(cause)) {}

  std::size_t index() const { return index_; }
  const std::exception_ptr& cause() const { return cause_; }

 private:
  std::size_t index_;
  std::exception_ptr cause_;
};

/// results[i] = job(i) for i in [0, count).
///
/// Jobs are handed out round-robin over `workers` threads. Output content and
/// order never depend on the worker count: every job derives its randomness
/// from its own index. On failure the remaining jobs are abandoned and the
/// lowest failing index among those that ran is reported.
template <class T, class Job>
std::vector<T> parallel_map(std::size_t count, std::size_t workers, Job&& job) {
  if (workers == 0) throw PreconditionError("parallel_map requires workers >= 1");
  std::vector<T> results(count);
  if (count == 0) return results;
  workers = std::min(workers, count);

  std::atomic<bool> abort{false};
  std::mutex failure_mutex;
  std::size_t failed_index = std::numeric_limits<std::size_t>::max();
  std::string failed_what;
  std::exception_ptr failed_cause;

  auto run = [&](std::size_t worker) {
    for (std::size_t i = worker; i < count; i += workers) {
      if (abort.load(std::memory_order_relaxed)) return;
      try {
        results[i] = job(i);
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (i < failed_index) {
          failed_index = i;
          failed_what = e.what();
          failed_cause = std::current_exception();
        }
        abort = true;
        return;
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
  }
  if (failed_cause) throw JobFailure(failed_index, failed_what, failed_cause);
  return results;
}

}  // namespace lpptw
