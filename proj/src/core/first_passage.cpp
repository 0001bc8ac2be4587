#include "extremesim/core/first_passage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "extremesim/core/lambert_w.hpp"
#include "extremesim/core/numerics.hpp"

namespace extremesim {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Exponent of t in the prefactor: F_i ~ t^p e^{-delta^2/4Dt}.
double prefactor_power(int dim) {
  switch (dim) {
    case 1: return 0.5;
    case 2: return 1.0;
    default: return -0.5;
  }
}

double peak_time(const Geometry& g, const Target& target) {
  return target.delta * target.delta / (2.0 * g.diffusion());
}

}  // namespace

double exit_term(const Geometry& g, std::size_t i, double t) {
  if (!(t > 0.0)) return 0.0;
  const Target& target = g.target(i);
  const double d = g.diffusion();
  const double delta = target.delta;
  const double gaussian = std::exp(-delta * delta / (4.0 * d * t));
  if (gaussian == 0.0) return 0.0;
  switch (g.dim()) {
    case 1:
      return std::sqrt(4.0 * d * t) / (delta * kSqrtPi) * gaussian;
    case 2:
      return kSqrt2 * kPi * d * t / (2.0 * std::log(1.0 / target.size) * delta * delta) * gaussian;
    default:
      return target.size * target.size / (delta * std::sqrt(kPi * d * t)) * gaussian;
  }
}

double exit_term_density(const Geometry& g, std::size_t i, double t) {
  if (!(t > 0.0)) return 0.0;
  const double delta = g.target(i).delta;
  const double rate = prefactor_power(g.dim()) / t + delta * delta / (4.0 * g.diffusion() * t * t);
  return exit_term(g, i, t) * rate;
}

double exit_cdf_raw(const Geometry& g, double t) {
  double sum = 0.0;
  for (std::size_t i = 0; i < g.target_count(); ++i) sum += exit_term(g, i, t);
  return sum;
}

double exit_cdf_monotone(const Geometry& g, double t) {
  if (g.dim() != 3) return exit_cdf_raw(g, t);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.target_count(); ++i) {
    sum += exit_term(g, i, std::min(t, peak_time(g, g.target(i))));
  }
  return sum;
}

Evaluation survival_single(const Geometry& g, double t) {
  const double f = exit_cdf_raw(g, t);
  if (f > 1.0) return {0.0, true};
  return {1.0 - f, false};
}

Evaluation exit_cdf(const Geometry& g, double t, const ValidityWindow& window) {
  if (!(t > 0.0)) throw std::invalid_argument("exit_cdf: t must be positive");
  const double f = exit_cdf_raw(g, t);
  return {std::clamp(f, 0.0, 1.0), f > 1.0 || t > window.t_max};
}

Evaluation exit_cdf(const Geometry& g, double t) {
  return exit_cdf(g, t, validity_window(g));
}

double exit_density(const Geometry& g, double t) {
  double sum = 0.0;
  for (std::size_t i = 0; i < g.target_count(); ++i) sum += exit_term_density(g, i, t);
  return sum;
}

double fastest_survival(const Geometry& g, double n, double t) {
  if (!(n >= 1.0)) throw std::invalid_argument("fastest_survival: n must be >= 1");
  const double f = std::clamp(exit_cdf_raw(g, t), 0.0, 1.0);
  return std::exp(-n * f);
}

double invert_exit_cdf(const Geometry& g, double target_f, const ValidityWindow& window) {
  if (!(target_f >= 0.0)) throw std::invalid_argument("invert_exit_cdf: negative probability");
  if (target_f == 0.0) return 0.0;
  if (target_f > window.f_max) {
    throw ValidityError("invert_exit_cdf: F = " + std::to_string(target_f) +
                        " exceeds f_max = " + std::to_string(window.f_max));
  }
  const double d = g.diffusion();

  if (g.target_count() == 1) {
    const Target& target = g.target(0);
    const double delta2 = target.delta * target.delta;
    switch (g.dim()) {
      case 1:
        return delta2 / (2.0 * d * lambert_w0(2.0 / (kPi * target_f * target_f)));
      case 2: {
        const double arg = kSqrt2 * kPi / (8.0 * std::log(1.0 / target.size) * target_f);
        return delta2 / (4.0 * d * lambert_w0(arg));
      }
      default: {
        const double a2 = target.size * target.size;
        const double arg = -kPi * delta2 * delta2 * target_f * target_f / (2.0 * a2 * a2);
        if (arg < -1.0 / std::numbers::e * (1.0 + 1e-15)) {
          throw ValidityError("invert_exit_cdf: F = " + std::to_string(target_f) +
                              " exceeds the 3D peak of the exit probability");
        }
        return -delta2 / (2.0 * d * lambert_wm1(std::max(arg, -1.0 / std::numbers::e)));
      }
    }
  }

  if (target_f > window.f_limit) {
    throw ValidityError("invert_exit_cdf: F = " + std::to_string(target_f) +
                        " exceeds the largest value reached in the window");
  }
  const double log_target = std::log(target_f);
  auto residual = [&](double log_t) { return std::log(exit_cdf_raw(g, std::exp(log_t))) - log_target; };
  const double hi = std::log(window.t_max);
  double lo = hi - std::log(2.0);
  while (exit_cdf_raw(g, std::exp(lo)) >= target_f) lo -= std::log(2.0);
  if (residual(hi) <= 0.0) return window.t_max;
  return std::exp(find_root(residual, lo, hi, 1e-15, 0.0));
}

double invert_exit_cdf(const Geometry& g, double target_f) {
  return invert_exit_cdf(g, target_f, validity_window(g));
}

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) throw std::invalid_argument("log_binomial: k > n");
  const std::uint64_t m = std::min(k, n - k);
  if (m <= 4096) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < m; ++i) sum += std::log(static_cast<double>(n - i));
    return sum - std::lgamma(static_cast<double>(m) + 1.0);
  }
  const auto dn = static_cast<double>(n);
  const auto dk = static_cast<double>(m);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

double order_statistic_density(const Geometry& g, std::uint64_t n, std::uint64_t k, double t) {
  if (k < 1 || k > n) throw std::invalid_argument("order_statistic_density: need 1 <= k <= n");
  if (!(t > 0.0)) return 0.0;
  const double f = exit_density(g, t);
  const double big_f = std::clamp(exit_cdf_raw(g, t), 0.0, 1.0);
  if (f <= 0.0 || (k > 1 && big_f == 0.0) || (n > k && big_f == 1.0)) return 0.0;
  double log_density = std::log(static_cast<double>(k)) + log_binomial(n, k) + std::log(f);
  if (k > 1) log_density += static_cast<double>(k - 1) * std::log(big_f);
  if (n > k) log_density += static_cast<double>(n - k) * std::log1p(-big_f);
  return std::exp(log_density);
}

double joint_density_consecutive(const Geometry& g, std::uint64_t n, std::uint64_t k, double s,
                                 double t) {
  if (k < 1 || k > n) throw std::invalid_argument("joint_density_consecutive: need 1 <= k <= n");
  if (s > t || !(s > 0.0) || k == n) return 0.0;
  const double fs = exit_density(g, s);
  const double ft = exit_density(g, t);
  const double cdf_s = std::clamp(exit_cdf_raw(g, s), 0.0, 1.0);
  const double cdf_t = std::clamp(exit_cdf_raw(g, t), 0.0, 1.0);
  if (fs <= 0.0 || ft <= 0.0 || (k > 1 && cdf_s == 0.0)) return 0.0;
  if (n - k - 1 > 0 && cdf_t == 1.0) return 0.0;
  double log_density = std::log(static_cast<double>(k)) +
                       std::log(static_cast<double>(n - k)) + log_binomial(n, k) +
                       std::log(fs) + std::log(ft);
  if (k > 1) log_density += static_cast<double>(k - 1) * std::log(cdf_s);
  if (n - k - 1 > 0) log_density += static_cast<double>(n - k - 1) * std::log1p(-cdf_t);
  return std::exp(log_density);
}

}  // namespace extremesim
