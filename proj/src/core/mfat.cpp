#include "extremesim/core/mfat.hpp"

#include <cmath>
#include <stdexcept>

#include "extremesim/core/first_passage.hpp"
#include "extremesim/core/numerics.hpp"

namespace extremesim {

namespace {
// exp(-x) < 1e-12 beyond this exponent.
constexpr double kNegligibleExponent = 27.631021115928547;
}  // namespace

MfatEstimate mfat_instantaneous(const Geometry& g, double n, const ValidityWindow& window) {
  if (!(n >= 2.0)) throw std::invalid_argument("mfat_instantaneous: n must be >= 2");
  MfatEstimate out;
  out.leading_order = g.diffusive_time() / std::log(n);

  double end = window.t_max;
  if (kNegligibleExponent / n <= window.f_limit) {
    end = invert_exit_cdf(g, kNegligibleExponent / n, window);
  } else {
    out.warnings.push_back("mfat_instantaneous: integrand has not decayed below 1e-12 by t_max = " +
                           std::to_string(window.t_max));
  }

  std::vector<double> breakpoints;
  for (double level : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 5.0}) {
    if (level / n < window.f_limit) breakpoints.push_back(invert_exit_cdf(g, level / n, window));
  }
  auto integrand = [&](double t) { return fastest_survival(g, n, t); };
  QuadratureOptions options;
  options.abs_tol = 1e-13 * end;
  options.rel_tol = 1e-11;
  const QuadratureResult r = integrate(integrand, 0.0, end, breakpoints, options);
  if (!r.converged) out.warnings.push_back("mfat_instantaneous: quadrature did not converge");
  out.value = r.value;
  return out;
}

MfatEstimate mfat_instantaneous(const Geometry& g, double n) {
  return mfat_instantaneous(g, n, validity_window(g));
}

}  // namespace extremesim
