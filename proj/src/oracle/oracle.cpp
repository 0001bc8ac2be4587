#include "extremesim/oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace extremesim {
namespace {

// Bridge crossing probability exp(-x) is below 1e-20 past this exponent.
constexpr double kBridgeCutoff = 46.0;

struct Particle {
  RngStream rng;
  double x;
  double t;          // own clock; starts at the emission time
  double death;      // absolute time of death (infinity without killing)
  std::uint64_t steps = 0;
  bool active = true;
};

struct Event {
  double time;
  std::uint64_t id;
  std::size_t target;
};

}  // namespace

void validate(const OracleSpec& spec) {
  if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) throw std::invalid_argument("oracle: dt must be positive");
  if (!(spec.diffusion >= 0.0) || !std::isfinite(spec.diffusion)) {
    throw std::invalid_argument("oracle: diffusion must be >= 0");
  }
  if (!(spec.source > spec.left)) throw std::invalid_argument("oracle: source must lie right of the left absorber");
  if (spec.right && !(spec.source < *spec.right)) {
    throw std::invalid_argument("oracle: source must lie left of the right absorber");
  }
  if (spec.k < 1 || spec.k > spec.n) throw std::invalid_argument("oracle: need 1 <= k <= n");
  if (!(spec.gamma >= 0.0)) throw std::invalid_argument("oracle: gamma must be >= 0");
  if (!(spec.alpha >= 0.0)) throw std::invalid_argument("oracle: alpha must be >= 0");
  if (spec.max_steps < 1) throw std::invalid_argument("oracle: max_steps must be >= 1");
}

double recommended_dt(const OracleSpec& spec) {
  double d = spec.source - spec.left;
  if (spec.right) d = std::min(d, *spec.right - spec.source);
  return d * d / (100.0 * spec.diffusion);
}

SampleResult run_oracle(const OracleSpec& spec, const RngStream& rng) {
  validate(spec);
  SampleResult out;
  if (spec.diffusion == 0.0) {
    out.status = RunStatus::exhausted;
    out.warning = "oracle: D = 0, no particle can move; every particle reaches the time cap";
    return out;
  }

  const double left = spec.left;
  const double right = spec.right.value_or(std::numeric_limits<double>::infinity());
  const double dt = spec.dt;
  const double sigma = std::sqrt(2.0 * spec.diffusion * dt);
  const double inv_ddt = 1.0 / (spec.diffusion * dt);

  std::vector<Particle> particles;
  particles.reserve(spec.n);
  for (std::uint64_t i = 0; i < spec.n; ++i) {
    RngStream stream = rng.fork(kOracleLaneBase + static_cast<std::uint32_t>(i));
    double start = 0.0;
    if (spec.alpha > 0.0) start = stream.exponential(spec.alpha) + stream.exponential(spec.alpha);
    double death = std::numeric_limits<double>::infinity();
    if (spec.gamma > 0.0) death = start + stream.exponential(spec.gamma);
    particles.push_back({stream, spec.source, start, death});
  }

  std::vector<Event> events;
  std::size_t active = spec.n;
  double horizon = 256.0 * dt;
  if (spec.alpha > 0.0) horizon += 1.0 / spec.alpha;

  for (;;) {
    for (std::uint64_t i = 0; i < spec.n; ++i) {
      Particle& p = particles[i];
      if (!p.active) continue;
      while (p.t + dt <= horizon) {
        if (p.steps == spec.max_steps) {
          p.active = false;
          break;
        }
        const double x0 = p.x;
        const double x1 = x0 + sigma * p.rng.normal();
        p.t += dt;
        ++p.steps;
        if (p.t > p.death) {
          p.active = false;
          break;
        }
        std::size_t hit = 2;
        if (x1 <= left) {
          hit = 0;
        } else if (x1 >= right) {
          hit = 1;
        } else if (spec.bridge_correction) {
          const double el = (x0 - left) * (x1 - left) * inv_ddt;
          const double er = (right - x0) * (right - x1) * inv_ddt;
          const double e = std::min(el, er);
          if (e < kBridgeCutoff) {
            // One uniform decides both crossings: [0, p_first) nearer boundary, then the other.
            const bool left_first = el <= er;
            const double u = p.rng.uniform();
            const double p_first = std::exp(-(left_first ? el : er));
            if (u <= p_first) {
              hit = left_first ? 0 : 1;
            } else if (std::isfinite(right)) {
              const double other = left_first ? er : el;
              if (other < kBridgeCutoff && u <= p_first + (1.0 - p_first) * std::exp(-other)) {
                hit = left_first ? 1 : 0;
              }
            }
          }
        }
        p.x = x1;
        if (hit != 2) {
          events.push_back({p.t, i, hit});
          p.active = false;
          break;
        }
      }
      if (!p.active) --active;
    }

    if (events.size() >= spec.k || active == 0) break;
    horizon *= 1.5;
  }

  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.time < b.time || (a.time == b.time && a.id < b.id);
  });
  const std::size_t take = std::min<std::size_t>(events.size(), spec.k);
  out.records.reserve(take);
  for (std::size_t j = 0; j < take; ++j) {
    out.records.push_back({j + 1, events[j].time, events[j].target, false});
  }
  if (take < spec.k) {
    out.status = RunStatus::exhausted;
    out.warning = "oracle: only " + std::to_string(take) + " of " + std::to_string(spec.k) +
                  " absorptions before every particle was killed or hit the step cap";
  }
  return out;
}

}  // namespace extremesim
