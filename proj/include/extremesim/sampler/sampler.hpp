#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "extremesim/core/geometry.hpp"
#include "extremesim/sampler/rng.hpp"

namespace extremesim {

/// Progress of the recursive first-k sampler.
struct SamplerState {
  std::uint64_t n = 0;       // total particle count
  std::uint64_t k_done = 0;  // arrivals emitted so far
  double f_cum = 0.0;        // F(t_k)
  double t_last = 0.0;       // t_k
};

struct ArrivalRecord {
  std::uint64_t rank = 0;  // accepted rank; candidate rank for killed records
  double time = 0.0;
  std::size_t target = 0;
  bool killed = false;

  friend bool operator==(const ArrivalRecord&, const ArrivalRecord&) = default;
};

enum class RunStatus {
  complete,
  validity_breach,  // the recursion left the short-time window
  exhausted,        // killing: fewer than k candidates survived
  root_failure,     // emission: the nonlinear update could not be bracketed
};

const char* to_string(RunStatus status);

/// Ordered records plus a machine-readable status. On a non-complete status
/// `records` holds the valid prefix and `warning` says why it stopped.
struct SampleResult {
  std::vector<ArrivalRecord> records;
  RunStatus status = RunStatus::complete;
  std::string warning;
};

struct KillingSpec {
  double gamma = 0.0;  // 1/time; zero disables killing
};

struct SamplerOptions {
  double f_max = kDefaultFMax;
  /// Test hook: multiplies every inverted time. Anything but 1 corrupts the
  /// sampler on purpose (negative control for validation).
  double time_distortion = 1.0;
};

/// Lane of the RngStream fork that feeds lifetimes in the killing sampler.
inline constexpr std::uint32_t kLifetimeLane = 1;

/// One step of F(t_{k+1}) = F(t_k) + log(1/u)/(n - k).
///
/// Throws ValidityError when the new cumulative probability leaves the window.
std::pair<double, SamplerState> next_arrival(const SamplerState& state, const Geometry& g,
                                             double u, const ValidityWindow& window);

/// Target index for an arrival at time t, given u in (0, 1].
///
/// One target: 0. Two targets in 1D: the first with probability
/// Sp(delta_0/delta_1, remaining). Otherwise the hazard ratio
/// f_i(t) / sum_j f_j(t).
std::size_t select_target(const Geometry& g, double t, double u, double remaining);

/// Per-target probabilities used by select_target.
std::vector<double> target_probabilities(const Geometry& g, double t, double remaining);

/// First k ordered arrivals among n. Consumes two uniforms per arrival (time,
/// then target) from `rng`.
SampleResult sample_first_k(const Geometry& g, std::uint64_t n, std::uint64_t k, RngStream& rng,
                            const SamplerOptions& options = {});

/// First k arrivals that beat an Exp(gamma) lifetime.
///
/// Candidates follow the plain recursion on `rng` (rejected candidates still
/// use up a particle); lifetimes come from rng.fork(kLifetimeLane), one per
/// candidate. Records come back in time order: accepted arrivals carry ranks
/// 1..k, rejected candidates (killed = true) carry their candidate rank.
SampleResult sample_first_k_with_killing(const Geometry& g, std::uint64_t n, std::uint64_t k,
                                         const KillingSpec& kill, RngStream& rng,
                                         const SamplerOptions& options = {});

/// Overloads reusing a precomputed window (campaigns call these per replica).
SampleResult sample_first_k(const Geometry& g, const ValidityWindow& window, std::uint64_t n,
                            std::uint64_t k, RngStream& rng, const SamplerOptions& options = {});
SampleResult sample_first_k_with_killing(const Geometry& g, const ValidityWindow& window,
                                         std::uint64_t n, std::uint64_t k,
                                         const KillingSpec& kill, RngStream& rng,
                                         const SamplerOptions& options = {});

}  // namespace extremesim
