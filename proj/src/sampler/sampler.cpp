#include "extremesim/sampler/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "extremesim/core/first_passage.hpp"
#include "extremesim/core/splitting.hpp"

namespace extremesim {

const char* to_string(RunStatus status) {
  switch (status) {
    case RunStatus::complete: return "complete";
    case RunStatus::validity_breach: return "validity_breach";
    case RunStatus::exhausted: return "exhausted";
    case RunStatus::root_failure: return "root_failure";
  }
  return "unknown";
}

std::pair<double, SamplerState> next_arrival(const SamplerState& state, const Geometry& g,
                                             double u, const ValidityWindow& window) {
  if (state.k_done >= state.n) throw std::invalid_argument("next_arrival: all particles arrived");
  if (!(u > 0.0 && u <= 1.0)) throw std::invalid_argument("next_arrival: u must lie in (0, 1]");
  SamplerState next = state;
  next.k_done = state.k_done + 1;
  const double increment = -std::log(u) / static_cast<double>(state.n - state.k_done);
  if (increment == 0.0) return {state.t_last, next};

  const double f_new = state.f_cum + increment;
  if (f_new > window.f_max || f_new > window.f_limit) {
    throw ValidityError("next_arrival: cumulative exit probability " + std::to_string(f_new) +
                        " left the validity window (f_max = " + std::to_string(window.f_max) +
                        ") at arrival " + std::to_string(next.k_done));
  }
  next.f_cum = f_new;
  next.t_last = std::max(invert_exit_cdf(g, f_new, window), state.t_last);
  return {next.t_last, next};
}

namespace {

// log f_i(t); -inf where the term does not contribute.
double log_term_density(const Geometry& g, std::size_t i, double t) {
  const Target& target = g.target(i);
  const double d = g.diffusion();
  const double exponent = -target.delta * target.delta / (4.0 * d * t);
  double log_prefactor;
  double power;
  switch (g.dim()) {
    case 1:
      log_prefactor = 0.5 * std::log(4.0 * d * t / std::numbers::pi) - std::log(target.delta);
      power = 0.5;
      break;
    case 2:
      log_prefactor = std::log(std::numbers::sqrt2 * std::numbers::pi * d * t /
                               (2.0 * std::log(1.0 / target.size) * target.delta * target.delta));
      power = 1.0;
      break;
    default:
      log_prefactor = std::log(target.size * target.size / target.delta) - 0.5 * std::log(std::numbers::pi * d * t);
      power = -0.5;
      break;
  }
  const double rate = power / t - exponent / t;
  if (!(rate > 0.0)) return -std::numeric_limits<double>::infinity();
  return log_prefactor + exponent + std::log(rate);
}

}  // namespace

std::vector<double> target_probabilities(const Geometry& g, double t, double remaining) {
  const std::size_t m = g.target_count();
  if (m == 1) return {1.0};
  if (g.dim() == 1 && m == 2) {
    const double p0 =
        splitting_asymptotic(g.target(0).delta / g.target(1).delta, std::max(remaining, 1.0));
    return {p0, 1.0 - p0};
  }
  std::vector<double> logs(m);
  for (std::size_t i = 0; i < m; ++i) logs[i] = log_term_density(g, i, t);
  const double top = *std::max_element(logs.begin(), logs.end());
  std::vector<double> p(m, 0.0);
  if (!std::isfinite(top)) {
    p[g.nearest_target()] = 1.0;
    return p;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) sum += (p[i] = std::exp(logs[i] - top));
  for (double& v : p) v /= sum;
  return p;
}

std::size_t select_target(const Geometry& g, double t, double u, double remaining) {
  if (g.target_count() == 1) return 0;
  const std::vector<double> p = target_probabilities(g, t, remaining);
  double cumulative = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    cumulative += p[i];
    if (u <= cumulative) return i;
  }
  return p.size() - 1;
}

SampleResult sample_first_k(const Geometry& g, const ValidityWindow& window, std::uint64_t n,
                            std::uint64_t k, RngStream& rng, const SamplerOptions& options) {
  if (k < 1 || k > n) throw std::invalid_argument("sample_first_k: need 1 <= k <= n");
  SampleResult out;
  out.records.reserve(k);
  SamplerState state{n, 0, 0.0, 0.0};
  for (std::uint64_t i = 0; i < k; ++i) {
    const double remaining = static_cast<double>(n - state.k_done);
    const double u_time = rng.uniform();
    double t;
    try {
      std::tie(t, state) = next_arrival(state, g, u_time, window);
    } catch (const ValidityError& e) {
      out.status = RunStatus::validity_breach;
      out.warning = e.what();
      return out;
    }
    const double u_target = rng.uniform();
    t *= options.time_distortion;
    out.records.push_back({state.k_done, t, select_target(g, t, u_target, remaining), false});
  }
  return out;
}

SampleResult sample_first_k(const Geometry& g, std::uint64_t n, std::uint64_t k, RngStream& rng,
                            const SamplerOptions& options) {
  return sample_first_k(g, validity_window(g, options.f_max), n, k, rng, options);
}

SampleResult sample_first_k_with_killing(const Geometry& g, const ValidityWindow& window,
                                         std::uint64_t n, std::uint64_t k,
                                         const KillingSpec& kill, RngStream& rng,
                                         const SamplerOptions& options) {
  if (k < 1 || k > n) throw std::invalid_argument("sample_first_k_with_killing: need 1 <= k <= n");
  if (!(kill.gamma >= 0.0)) throw std::invalid_argument("killing rate must be >= 0");
  RngStream lifetimes = rng.fork(kLifetimeLane);
  SampleResult out;
  SamplerState state{n, 0, 0.0, 0.0};
  std::uint64_t accepted = 0;
  while (accepted < k) {
    if (state.k_done == n) {
      out.status = RunStatus::exhausted;
      out.warning = "killing: only " + std::to_string(accepted) + " of " + std::to_string(k) +
                    " arrivals survived among all " + std::to_string(n) + " particles";
      return out;
    }
    const double remaining = static_cast<double>(n - state.k_done);
    double t;
    try {
      std::tie(t, state) = next_arrival(state, g, rng.uniform(), window);
    } catch (const ValidityError& e) {
      out.status = RunStatus::validity_breach;
      out.warning = std::string(e.what()) + "; " + std::to_string(accepted) + " of " +
                    std::to_string(k) + " arrivals accepted";
      return out;
    }
    const double u_target = rng.uniform();
    const double death = lifetimes.exponential(kill.gamma);
    t *= options.time_distortion;
    const std::size_t target = select_target(g, t, u_target, remaining);
    if (t < death) {
      out.records.push_back({++accepted, t, target, false});
    } else {
      out.records.push_back({state.k_done, t, target, true});
    }
  }
  return out;
}

SampleResult sample_first_k_with_killing(const Geometry& g, std::uint64_t n, std::uint64_t k,
                                         const KillingSpec& kill, RngStream& rng,
                                         const SamplerOptions& options) {
  return sample_first_k_with_killing(g, validity_window(g, options.f_max), n, k, kill, rng,
                                     options);
}

}  // namespace extremesim
