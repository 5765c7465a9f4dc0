#pragma once

#include <cmath>

namespace hdeuler {

/// Neumaier's variant of Kahan compensated summation. The result depends
/// only on the order of `add` calls, which keeps reductions reproducible.
class NeumaierSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace hdeuler
