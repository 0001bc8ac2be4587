#pragma once

namespace extremesim {

/// Probability that the fastest of n particles on a line exits through the
/// target at distance ratio lambda = delta_1/delta_2 rather than the other one:
///
///   Sp(lambda, n) = (1/sqrt(pi)) int_0^inf exp(-(w + lambda n^{1-1/lambda^2} w^{1/lambda^2})/sqrt(pi)) dw
///
/// evaluated by adaptive quadrature (absolute tolerance 1e-10). n may be
/// non-integer; Sp(lambda, n) + Sp(1/lambda, lambda n) = 1.
double splitting_integral(double lambda, double n);

/// Boundary-layer profile 1 / (1 + n^{2(lambda-1)}) around lambda = 1.
double splitting_boundary_layer(double lambda, double n);

enum class SplittingRegime { near, below, above };

/// Regime used by splitting_asymptotic: `near` when |lambda - 1| log n <= 1.
SplittingRegime splitting_regime(double lambda, double n);

/// Large-n asymptotics of Sp:
///   lambda < 1: 1 - lambda Gamma(1 + 1/lambda^2) (sqrt(pi)/n)^{1/lambda^2 - 1}
///   lambda > 1: lambda Gamma(lambda^2) (sqrt(pi)/(n lambda))^{lambda^2 - 1}
/// and the boundary layer inside |lambda - 1| log n <= 1. Clamped to [0, 1].
double splitting_asymptotic(double lambda, double n);

}  // namespace extremesim
