#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>

namespace svlab {

// Neumaier-compensated accumulator; order-sensitive but deterministic.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_total(std::span<const double> values) noexcept;

struct MeanAndError {
  double mean = 0.0;
  double std_err = 0.0;
};

// Sample mean with standard error of the mean (zero for a single sample).
MeanAndError mean_and_error(std::span<const double> samples);

// Adaptive Gauss-Kronrod integral of f over [a, b]. Throws NumericalAbort if the
// error estimate stays above the tolerance.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12);

}  // namespace svlab
