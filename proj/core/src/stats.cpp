#include "gwf/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "gwf/errors.hpp"

namespace gwf {

void RunningMean::add(double x) noexcept {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void RunningMean::merge(const RunningMean& other) noexcept {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double n_a = static_cast<double>(count_);
  const double n_b = static_cast<double>(other.count_);
  const double delta = other.mean_ - mean_;
  const double total = n_a + n_b;
  mean_ += delta * n_b / total;
  m2_ += other.m2_ + delta * delta * n_a * n_b / total;
  count_ += other.count_;
}

double RunningMean::variance() const noexcept {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

MeanEstimate RunningMean::estimate() const noexcept {
  MeanEstimate e;
  e.count = count_;
  e.mean = mean_;
  e.std_error = count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  return e;
}

MeanEstimate mean_and_stderr(std::span<const double> samples) noexcept {
  RunningMean acc;
  for (double x : samples) acc.add(x);
  return acc.estimate();
}

double chi_square_statistic(std::span<const double> observed,
                            std::span<const double> expected) {
  if (observed.size() != expected.size()) {
    throw PreconditionError("chi_square_statistic: size mismatch");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) continue;
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

double chi_square_critical(int dof, double alpha) {
  if (dof < 1 || !(alpha > 0.0 && alpha < 1.0)) {
    throw PreconditionError("chi_square_critical: need dof >= 1 and alpha in (0,1)");
  }
  const boost::math::chi_squared dist(dof);
  return boost::math::quantile(boost::math::complement(dist, alpha));
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw PreconditionError("log_log_slope: need at least two aligned points");
  }
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gwf
