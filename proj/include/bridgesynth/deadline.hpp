#pragma once

#include <chrono>
#include <limits>

namespace bridgesynth {

/// Absolute wall-clock budget shared by nested solver calls.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  static Deadline never() { return Deadline(Clock::time_point::max()); }
  static Deadline in_seconds(double seconds) {
    if (!(seconds < 1e9)) return never();
    return Deadline(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                       std::chrono::duration<double>(seconds)));
  }

  bool expired() const { return at_ != Clock::time_point::max() && Clock::now() >= at_; }
  double remaining_seconds() const {
    if (at_ == Clock::time_point::max()) return std::numeric_limits<double>::infinity();
    return std::chrono::duration<double>(at_ - Clock::now()).count();
  }
  /// The earlier of this deadline and `seconds` from now.
  Deadline capped(double seconds) const {
    Deadline other = in_seconds(seconds);
    return other.at_ < at_ ? other : *this;
  }

 private:
  explicit Deadline(Clock::time_point at) : at_(at) {}
  Clock::time_point at_;
};

}  // namespace bridgesynth
