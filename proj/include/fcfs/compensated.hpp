#pragma once

#include <cmath>

namespace fcfs {

/// Running sum with Kahan-Babuska (Neumaier) compensation.
///
/// The enumeration passes add up to ~10^9 terms whose magnitudes span many
/// orders near the stability boundary; the compensation term carries the
/// low-order bits lost by each addition. Merging two sums keeps both
/// compensation terms, so partial sums from independent workers combine
/// without losing what each one recovered.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double initial) : sum_(initial) {}

  CompensatedSum& operator+=(double value) noexcept {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  CompensatedSum& operator+=(const CompensatedSum& other) noexcept {
    *this += other.sum_;
    compensation_ += other.compensation_;
    return *this;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace fcfs
