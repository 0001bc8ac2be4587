#include "extremesim/core/lambert_w.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace extremesim {
namespace {

constexpr double kInvE = 1.0 / std::numbers::e;
// Inputs this close below -1/e are rounding noise from callers building -1/e.
constexpr double kBranchSlack = 8.0 * std::numeric_limits<double>::epsilon() * kInvE;
constexpr int kMaxIterations = 64;

// Series in p = sqrt(2 (e x + 1)) around the branch point; sign selects W0 (+1)
// or W-1 (-1).
double branch_point_series(double x, double sign) {
  const double p = sign * std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
}

double halley(double x, double w) {
  for (int i = 0; i < kMaxIterations; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (f == 0.0) break;
    const double w1 = w + 1.0;
    if (w1 == 0.0) break;  // exactly at the branch point
    const double step = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1));
    const double next = w - step;
    if (!std::isfinite(next)) break;
    if (std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(next)) {
      w = next;
      break;
    }
    w = next;
  }
  return w;
}

// Newton on w + log|w| = log|x|, used where w e^w itself would over- or
// underflow. The residual loses about one ulp of w to cancellation, so the
// last step is taken in extended precision.
double log_newton(double x, double w) {
  const double log_abs_x = std::log(std::abs(x));
  for (int i = 0; i < kMaxIterations; ++i) {
    const double f = w + std::log(std::abs(w)) - log_abs_x;
    const double next = w - f / (1.0 + 1.0 / w);
    const bool done = std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(next);
    w = next;
    if (done) break;
  }
  const long double lw = w;
  const long double f = lw + std::log(std::fabs(lw)) - std::log(std::fabs(static_cast<long double>(x)));
  return static_cast<double>(lw - f / (1.0L + 1.0L / lw));
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
  if (x < -kInvE - kBranchSlack) throw std::domain_error("lambert_w0: argument below -1/e");
  if (x <= -kInvE) return -1.0;
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  if (x > 1e10) {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return log_newton(x, l1 - l2 + l2 / l1);
  }

  double guess;
  if (x < -0.25) {
    guess = branch_point_series(x, 1.0);
  } else if (x < 3.0) {
    const double l = std::log1p(x);
    guess = l * (1.0 - std::log1p(l) / (2.0 + l));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    guess = l1 - l2 + l2 / l1;
  }
  return std::max(halley(x, guess), -1.0);
}

double lambert_wm1(double x) {
  if (std::isnan(x)) throw std::domain_error("lambert_wm1: NaN argument");
  if (x < -kInvE - kBranchSlack || x >= 0.0) {
    throw std::domain_error("lambert_wm1: argument outside [-1/e, 0)");
  }
  if (x <= -kInvE) return -1.0;

  if (x > -1e-10) {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    return log_newton(x, l1 - l2 + l2 / l1);
  }

  double guess;
  if (x < -0.25) {
    guess = branch_point_series(x, -1.0);
  } else {
    const double l1 = std::log(-x);
    const double l2 = std::log(-l1);
    guess = l1 - l2 + l2 / l1;
  }
  const double w = halley(x, guess);
  return std::min(w, -1.0);
}

}  // namespace extremesim
