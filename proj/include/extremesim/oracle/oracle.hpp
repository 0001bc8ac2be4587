#pragma once

#include <cstdint>
#include <optional>

#include "extremesim/sampler/rng.hpp"
#include "extremesim/sampler/sampler.hpp"

namespace extremesim {

/// Brute-force Euler-Maruyama reference in one dimension.
///
/// Particles start at `source` (at time 0, or at a Gamma(2, 1/alpha) emission
/// delay when alpha > 0) between the absorber at `left` and, if present, the
/// one at `right`. Target 0 is `left`, target 1 is `right`.
struct OracleSpec {
  double source = 1.0;
  double left = 0.0;
  std::optional<double> right;
  double diffusion = 1.0;
  double dt = 1e-4;
  std::uint64_t n = 1000;
  std::uint64_t k = 1;
  double gamma = 0.0;
  double alpha = 0.0;
  std::uint64_t max_steps = 1'000'000;  // per particle
  /// Absorb between grid points with the Brownian-bridge crossing
  /// probability exp(-a0 a1 / (D dt)). Off: post-step crossing only.
  bool bridge_correction = true;
};

/// Throws std::invalid_argument on an inconsistent spec.
void validate(const OracleSpec& spec);

/// Largest dt the spec recommends: (min distance)^2 / (100 D).
double recommended_dt(const OracleSpec& spec);

/// First k absorptions in (time, particle id) order.
///
/// Particle i draws from rng.fork(kOracleLaneBase + i): emission delay first,
/// then its lifetime, then one normal per step (plus one uniform per step
/// when the bridge test is live). Results therefore do not depend on how the
/// simulation horizon is extended. Status `exhausted` with the absorptions
/// found so far when fewer than k particles are absorbed before every
/// particle is killed or reaches max_steps.
SampleResult run_oracle(const OracleSpec& spec, const RngStream& rng);

inline constexpr std::uint32_t kOracleLaneBase = 16;

}  // namespace extremesim
