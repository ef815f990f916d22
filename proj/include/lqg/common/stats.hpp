#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lqg::stats {

/// Running mean and variance (Welford).
class MeanAccumulator {
public:
  void add(double x);
  void merge(const MeanAccumulator& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;  // unbiased
  double stderr_of_mean() const;

private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
  std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two
/// distinct x values.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Weighted least squares with weights w (typically 1 / var).
LinearFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> w);

/// Fit log y against log x over strictly positive pairs.
LinearFit loglog_fit(std::span<const double> x, std::span<const double> y);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Empirical survival P[X >= x] for each threshold, from a sample.
std::vector<double> survival(std::span<const double> sample, std::span<const double> thresholds);

/// `count` points geometrically spaced from lo to hi inclusive.
std::vector<double> geomspace(double lo, double hi, std::size_t count);

/// `count` points evenly spaced from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t count);

double mean(std::span<const double> x);
double sample_skewness(std::span<const double> x);

/// Binomial standard error sqrt(p(1-p)/n).
double binomial_stderr(double p, std::size_t n);

}  // namespace lqg::stats
