#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace extremesim {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Two-sample comparison of `a` against the reference `b`. Gaps are relative
/// to the reference: (mean_a - mean_b) / mean_b, likewise for variances.
struct ComparisonReport {
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  double ks = 0.0;
  double ks_pvalue = 1.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  double mean_gap = 0.0;
  double var_gap = 0.0;
  Interval mean_gap_ci;  // 95% percentile bootstrap
  Interval var_gap_ci;
};

struct BootstrapOptions {
  std::size_t resamples = 200;
  std::uint64_t seed = 0x5eed;
};

/// Throws std::invalid_argument when either sample is empty.
ComparisonReport compare_distributions(std::span<const double> a, std::span<const double> b,
                                       const BootstrapOptions& options = {});

double mean(std::span<const double> x);
/// Unbiased sample variance; 0 for fewer than two values.
double variance(std::span<const double> x);

/// sup |F_a - F_b| over the pooled sample.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// sup |F_n - cdf| for a fully specified reference CDF.
double ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov tail Q(sqrt(m) d) with the Stephens small-sample
/// adjustment; m is the effective size (n for one sample, nm/(n+m) for two).
double kolmogorov_pvalue(double d, double m);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double pvalue = 1.0;
};

/// Pearson chi-square of observed counts against expected counts with
/// dof = bins - 1 - fitted_parameters.
ChiSquareResult chi_square(std::span<const double> observed, std::span<const double> expected,
                           std::size_t fitted_parameters = 0);

}  // namespace extremesim
