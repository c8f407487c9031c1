#pragma once

#include <chrono>
#include <optional>

#include "cgbg/errors.hpp"

namespace cgbg {

// Wall-clock budget polled by solvers at their natural checkpoints.
// A default-constructed deadline never expires.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;

  static Deadline at(Clock::time_point end) {
    Deadline d;
    d.end_ = end;
    return d;
  }

  // Non-positive budgets mean no limit.
  static Deadline after_seconds(double seconds) {
    Deadline d;
    if (seconds > 0) {
      d.end_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(seconds));
    }
    return d;
  }

  bool expired() const { return end_ && Clock::now() >= *end_; }

  void check(const char* where) const {
    if (expired()) throw TimeoutError(std::string("time limit exceeded in ") + where);
  }

 private:
  std::optional<Clock::time_point> end_;
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace cgbg
