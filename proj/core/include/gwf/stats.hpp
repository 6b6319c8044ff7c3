#pragma once

#include <cstddef>
#include <span>

namespace gwf {

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t count = 0;
};

// Welford accumulator.
class RunningMean {
 public:
  void add(double x) noexcept;
  void merge(const RunningMean& other) noexcept;
  std::size_t count() const noexcept { return count_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;  // unbiased sample variance
  MeanEstimate estimate() const noexcept;

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

MeanEstimate mean_and_stderr(std::span<const double> samples) noexcept;

// Pearson statistic sum (o - e)^2 / e over cells with e > 0.
double chi_square_statistic(std::span<const double> observed,
                            std::span<const double> expected);

// Upper critical value: P(chi2_dof > value) = alpha.
double chi_square_critical(int dof, double alpha);

// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace gwf
