#include "extremesim/oracle/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "extremesim/sampler/rng.hpp"

namespace extremesim {
namespace {

Interval percentile_interval(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  auto at = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= values.size()) return values.back();
    return values[i] + frac * (values[i + 1] - values[i]);
  };
  return {at(0.025), at(0.975)};
}

}  // namespace

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_one_sample(std::span<const double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double kolmogorov_pvalue(double d, double m) {
  if (!(d > 0.0)) return 1.0;
  const double sq = std::sqrt(m);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

ComparisonReport compare_distributions(std::span<const double> a, std::span<const double> b,
                                       const BootstrapOptions& options) {
  if (a.empty() || b.empty()) throw std::invalid_argument("compare_distributions: empty sample");
  ComparisonReport r;
  r.size_a = a.size();
  r.size_b = b.size();
  r.ks = ks_two_sample(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  r.ks_pvalue = kolmogorov_pvalue(r.ks, na * nb / (na + nb));
  r.mean_a = mean(a);
  r.mean_b = mean(b);
  r.var_a = variance(a);
  r.var_b = variance(b);
  r.mean_gap = (r.mean_a - r.mean_b) / r.mean_b;
  r.var_gap = r.var_b > 0.0 ? (r.var_a - r.var_b) / r.var_b : 0.0;

  if (options.resamples == 0) {
    r.mean_gap_ci = {r.mean_gap, r.mean_gap};
    r.var_gap_ci = {r.var_gap, r.var_gap};
    return r;
  }
  RngStream rng(options.seed);
  std::vector<double> mean_gaps;
  std::vector<double> var_gaps;
  std::vector<double> ra(a.size());
  std::vector<double> rb(b.size());
  for (std::size_t rep = 0; rep < options.resamples; ++rep) {
    for (double& v : ra) v = a[rng() % a.size()];
    for (double& v : rb) v = b[rng() % b.size()];
    const double mb = mean(rb);
    const double vb = variance(rb);
    mean_gaps.push_back((mean(ra) - mb) / mb);
    var_gaps.push_back(vb > 0.0 ? (variance(ra) - vb) / vb : 0.0);
  }
  r.mean_gap_ci = percentile_interval(std::move(mean_gaps));
  r.var_gap_ci = percentile_interval(std::move(var_gaps));
  return r;
}

ChiSquareResult chi_square(std::span<const double> observed, std::span<const double> expected,
                           std::size_t fitted_parameters) {
  if (observed.size() != expected.size() || observed.empty()) {
    throw std::invalid_argument("chi_square: observed and expected must be equally sized and non-empty");
  }
  if (observed.size() <= 1 + fitted_parameters) {
    throw std::invalid_argument("chi_square: not enough bins for the requested degrees of freedom");
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw std::invalid_argument("chi_square: expected counts must be positive");
    const double diff = observed[i] - expected[i];
    r.statistic += diff * diff / expected[i];
  }
  r.dof = observed.size() - 1 - fitted_parameters;
  r.pvalue = boost::math::gamma_q(0.5 * static_cast<double>(r.dof), 0.5 * r.statistic);
  return r;
}

}  // namespace extremesim
