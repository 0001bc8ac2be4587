#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "extremesim/core/first_passage.hpp"
#include "extremesim/core/geometry.hpp"
#include "extremesim/core/numerics.hpp"
#include "extremesim/sampler/rng.hpp"
#include "extremesim/sampler/sampler.hpp"

namespace extremesim {

/// Gamma-shaped injection rate phi(t) = alpha^2 t e^{-alpha t}, peaking at
/// t = 1/alpha with unit mass.
class EmissionProfile {
 public:
  explicit EmissionProfile(double alpha);

  double alpha() const noexcept { return alpha_; }
  double density(double t) const;
  double cumulative(double t) const;
  double peak_time() const noexcept { return 1.0 / alpha_; }
  /// Emission time drawn from phi (sum of two Exp(alpha) variates).
  double sample(RngStream& rng) const;

 private:
  double alpha_;
};

/// F_phi(t) = int_0^t F(t - s) phi(s) ds, with F the non-decreasing
/// short-time exit probability (not clamped at f_max; see `flagged`).
/// `flagged` is raised when F is queried past window.t_max.
Evaluation effective_exit_cdf(const Geometry& g, const EmissionProfile& phi, double t,
                              const ValidityWindow& window, const QuadratureOptions& options = {});
Evaluation effective_exit_cdf(const Geometry& g, const EmissionProfile& phi, double t);

/// First k arrivals under emission, solving F_phi(t_{j+1}) = C_{j+1} with
/// C_{j+1} = C_j + log(1/U)/(n - j). Two uniforms per arrival, like
/// sample_first_k.
SampleResult sample_first_k_emission(const Geometry& g, const EmissionProfile& phi,
                                     std::uint64_t n, std::uint64_t k, RngStream& rng,
                                     const SamplerOptions& options = {});
SampleResult sample_first_k_emission(const Geometry& g, const ValidityWindow& window,
                                     const EmissionProfile& phi, std::uint64_t n,
                                     std::uint64_t k, RngStream& rng,
                                     const SamplerOptions& options = {});

struct MfatValue {
  double value = 0.0;
  double alpha_bar = 0.0;  // 4 n alpha^2 tau_d^2 / (15 sqrt(pi)); slow regime only
  std::vector<std::string> warnings;
};

/// int_0^inf exp(-n F_phi(t)) dt, truncated once the integrand is below 1e-12.
MfatValue mfat_emission_numerical(const Geometry& g, const EmissionProfile& phi, double n);

/// (9 pi/250)^{1/5} y^{2/5} / (D^{1/5} alpha^{4/5} n^{2/5}) Gamma(2/5).
/// Half-line geometry only; warns unless alpha tau_d sqrt(n) < 0.1.
MfatValue mfat_slow_asymptotic(const Geometry& g, double alpha, double n);

/// mfat_instantaneous + 2/alpha; warns unless alpha tau_d / log(n)^2 >= 10.
MfatValue mfat_fast_asymptotic(const Geometry& g, double alpha, double n);

/// y^2/(10 D) / W0((2/5) (n alpha^2 y^4 / (60 D^2 sqrt(pi) log 2))^{2/5}).
/// Half-line geometry only.
MfatValue mfat_intermediate_asymptotic(const Geometry& g, double alpha, double n);

enum class EmissionRegime { slow, intermediate, fast };

const char* to_string(EmissionRegime regime);

inline constexpr double kSlowThreshold = 0.1;   // alpha tau_d sqrt(n) below this: slow
inline constexpr double kFastThreshold = 10.0;  // alpha tau_d / log(n)^2 above this: fast

struct RegimeEstimate {
  EmissionRegime regime = EmissionRegime::intermediate;
  double mfat = 0.0;       // estimate from the matching asymptotic formula
  double numerical = 0.0;  // mfat_emission_numerical
  std::string validity;    // the bound that decided the classification
  std::vector<std::string> warnings;
};

/// Regime from the thresholds above, without evaluating any MFAT.
EmissionRegime emission_regime(const Geometry& g, double alpha, double n);

RegimeEstimate classify_regime(const Geometry& g, double alpha, double n);

}  // namespace extremesim
