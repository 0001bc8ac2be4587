#include "extremesim/core/splitting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "extremesim/core/numerics.hpp"

namespace extremesim {
namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
// exp(-w/sqrt(pi)) < 1e-300 beyond this point.
constexpr double kUpperCutoff = 691.0 * kSqrtPi;

void check_arguments(double lambda, double n) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("splitting: lambda must be positive");
  }
  if (!(n >= 1.0) || !std::isfinite(n)) throw std::invalid_argument("splitting: n must be >= 1");
}

}  // namespace

double splitting_integral(double lambda, double n) {
  check_arguments(lambda, n);
  const double power = 1.0 / (lambda * lambda);
  const double log_coeff = std::log(lambda) + (1.0 - power) * std::log(n);
  auto integrand = [=](double w) {
    if (w <= 0.0) return 1.0 / kSqrtPi;
    const double log_competing = log_coeff + power * std::log(w);
    if (log_competing > 700.0) return 0.0;
    return std::exp(-(w + std::exp(log_competing)) / kSqrtPi) / kSqrtPi;
  };
  // The competing term concentrates mass near w ~ coeff^{-1/power}; seed the
  // refinement on a logarithmic ladder that covers that scale.
  static constexpr std::array<double, 16> ladder{1e-14, 1e-12, 1e-10, 1e-8, 1e-6, 1e-5, 1e-4,
                                                 1e-3,  1e-2,  0.1,   0.5,  1.0,  3.0,  10.0,
                                                 50.0,  200.0};
  std::vector<double> breakpoints(ladder.begin(), ladder.end());
  const double scale = std::exp(-log_coeff / power);
  for (double factor : {0.1, 1.0, 10.0}) {
    if (factor * scale > 0.0 && factor * scale < kUpperCutoff) breakpoints.push_back(factor * scale);
  }
  QuadratureOptions options;
  options.abs_tol = 1e-12;
  return std::clamp(integrate(integrand, 0.0, kUpperCutoff, breakpoints, options).value, 0.0, 1.0);
}

double splitting_boundary_layer(double lambda, double n) {
  check_arguments(lambda, n);
  return 1.0 / (1.0 + std::exp(2.0 * (lambda - 1.0) * std::log(n)));
}

SplittingRegime splitting_regime(double lambda, double n) {
  check_arguments(lambda, n);
  if (std::abs(lambda - 1.0) * std::log(n) <= 1.0) return SplittingRegime::near;
  return lambda < 1.0 ? SplittingRegime::below : SplittingRegime::above;
}

double splitting_asymptotic(double lambda, double n) {
  switch (splitting_regime(lambda, n)) {
    case SplittingRegime::near:
      return splitting_boundary_layer(lambda, n);
    case SplittingRegime::below: {
      const double p = 1.0 / (lambda * lambda);
      const double correction =
          lambda * std::tgamma(1.0 + p) * std::exp((p - 1.0) * std::log(kSqrtPi / n));
      return std::clamp(1.0 - correction, 0.0, 1.0);
    }
    case SplittingRegime::above: {
      const double l2 = lambda * lambda;
      const double value =
          lambda * std::tgamma(l2) * std::exp((l2 - 1.0) * std::log(kSqrtPi / (n * lambda)));
      return std::clamp(value, 0.0, 1.0);
    }
  }
  return 0.5;
}

}  // namespace extremesim
