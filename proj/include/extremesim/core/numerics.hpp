#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace extremesim {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_intervals = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t intervals = 0;
  bool converged = false;
};

/// Globally adaptive 21-point Gauss-Kronrod quadrature on [a, b].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|) or the interval cap
/// is reached.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Same as integrate() but seeds the refinement with the given breakpoints
/// (values outside (a, b) are ignored).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

/// Root of a continuous f on [lo, hi] with f(lo) and f(hi) of opposite sign.
///
/// Terminates when the bracket width is below abs_tol + rel_tol * |x|.
/// Throws std::domain_error when the bracket does not straddle a root.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol = 0.0, double rel_tol = 1e-14);

}  // namespace extremesim
