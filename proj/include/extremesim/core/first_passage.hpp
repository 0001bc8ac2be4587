#pragma once

#include <cstddef>
#include <cstdint>

#include "extremesim/core/geometry.hpp"

namespace extremesim {

/// A probability together with a flag raised when the asymptotic formula is
/// outside its trusted regime (clamped, or evaluated past the window).
struct Evaluation {
  double value = 0.0;
  bool flagged = false;
};

/// Short-time exit probability of a single target, unclamped.
///   1D: sqrt(4Dt)/(delta sqrt(pi)) e^{-delta^2/4Dt}
///   2D: sqrt(2) pi D t/(2 log(1/eps) delta^2) e^{-delta^2/4Dt}
///   3D: a^2/(delta sqrt(pi D t)) e^{-delta^2/4Dt}
double exit_term(const Geometry& g, std::size_t target, double t);

/// d/dt of exit_term.
double exit_term_density(const Geometry& g, std::size_t target, double t);

/// Sum of exit_term over all targets, unclamped.
double exit_cdf_raw(const Geometry& g, double t);

/// Like exit_cdf_raw, but each 3D term is held at its peak past its turning
/// point delta^2/(2D), which makes the result non-decreasing in t.
double exit_cdf_monotone(const Geometry& g, double t);

/// S(t) = 1 - sum_i F_i(t), clamped to [0, 1]; flagged when clamping was needed.
Evaluation survival_single(const Geometry& g, double t);

/// F(t) = 1 - S(t); flagged past window.t_max. Requires t > 0.
Evaluation exit_cdf(const Geometry& g, double t, const ValidityWindow& window);
Evaluation exit_cdf(const Geometry& g, double t);

/// f(t) = dF/dt, the single-particle first-passage density.
double exit_density(const Geometry& g, double t);

/// Pr{fastest of n has not arrived by t} ~ exp(-n F(t)).
double fastest_survival(const Geometry& g, double n, double t);

/// Time t with exit_cdf(g, t) = target_f.
///
/// Single-target geometries use the Lambert W closed forms; several targets
/// fall back to bracketed root finding on log F. Throws ValidityError when
/// target_f exceeds window.f_max or, in 3D, the peak of F.
double invert_exit_cdf(const Geometry& g, double target_f, const ValidityWindow& window);
double invert_exit_cdf(const Geometry& g, double target_f);

/// log of the binomial coefficient C(n, k), accurate for k << n up to n ~ 1e9.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// Density of the k-th order statistic among n i.i.d. arrivals:
/// k C(n,k) F^{k-1} (1-F)^{n-k} f.
double order_statistic_density(const Geometry& g, std::uint64_t n, std::uint64_t k, double t);

/// Joint density of the k-th and (k+1)-th arrivals at (s, t); zero for s > t.
double joint_density_consecutive(const Geometry& g, std::uint64_t n, std::uint64_t k, double s,
                                 double t);

}  // namespace extremesim
