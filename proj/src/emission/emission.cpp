#include "extremesim/emission/emission.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "extremesim/core/lambert_w.hpp"
#include "extremesim/core/mfat.hpp"

namespace extremesim {
namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
// exp(-x) < 1e-12 beyond this exponent.
constexpr double kNegligibleExponent = 27.631021115928547;

bool is_half_line(const Geometry& g) { return g.dim() == 1 && g.target_count() == 1; }

void require_half_line(const Geometry& g, const char* who) {
  if (!is_half_line(g)) {
    throw std::invalid_argument(std::string(who) + ": needs a one-dimensional single-target geometry");
  }
}

void require_rates(double alpha, double n, const char* who) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument(std::string(who) + ": alpha must be positive and finite");
  }
  if (!(n >= 2.0)) throw std::invalid_argument(std::string(who) + ": n must be >= 2");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

}  // namespace

EmissionProfile::EmissionProfile(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("EmissionProfile: alpha must be positive and finite");
  }
}

double EmissionProfile::density(double t) const {
  if (!(t > 0.0)) return 0.0;
  return alpha_ * alpha_ * t * std::exp(-alpha_ * t);
}

double EmissionProfile::cumulative(double t) const {
  if (!(t > 0.0)) return 0.0;
  const double x = alpha_ * t;
  // 1 - e^{-x}(1 + x), written to keep precision for small x.
  return -std::expm1(-x) - x * std::exp(-x);
}

double EmissionProfile::sample(RngStream& rng) const {
  return rng.exponential(alpha_) + rng.exponential(alpha_);
}

Evaluation effective_exit_cdf(const Geometry& g, const EmissionProfile& phi, double t,
                              const ValidityWindow& window, const QuadratureOptions& options) {
  if (!(t > 0.0)) return {0.0, false};
  const double tau = g.diffusive_time();
  std::vector<double> breakpoints;
  for (double m : {0.1, 1.0, 3.0, 10.0, 30.0}) breakpoints.push_back(m * phi.peak_time());
  for (double m : {0.01, 0.1, 1.0, 10.0}) breakpoints.push_back(t - m * tau);
  std::sort(breakpoints.begin(), breakpoints.end());
  auto integrand = [&](double s) { return exit_cdf_monotone(g, t - s) * phi.density(s); };
  const QuadratureResult r = integrate(integrand, 0.0, t, breakpoints, options);
  return {r.value, t > window.t_max || !r.converged};
}

Evaluation effective_exit_cdf(const Geometry& g, const EmissionProfile& phi, double t) {
  return effective_exit_cdf(g, phi, t, validity_window(g));
}

SampleResult sample_first_k_emission(const Geometry& g, const ValidityWindow& window,
                                     const EmissionProfile& phi, std::uint64_t n,
                                     std::uint64_t k, RngStream& rng,
                                     const SamplerOptions& options) {
  if (k < 1 || k > n) throw std::invalid_argument("sample_first_k_emission: need 1 <= k <= n");
  SampleResult out;
  out.records.reserve(k);
  const double start = std::min(g.diffusive_time(), phi.peak_time()) / 64.0;
  double c = 0.0;
  double t_last = 0.0;
  for (std::uint64_t i = 0; i < k; ++i) {
    const double remaining = static_cast<double>(n - i);
    const double increment = -std::log(rng.uniform()) / remaining;
    const double u_target = rng.uniform();
    double t = t_last;
    if (increment > 0.0) {
      const double c_next = c + increment;
      if (c_next > window.f_max) {
        out.status = RunStatus::validity_breach;
        out.warning = "emission: cumulative probability " + fmt(c_next) +
                      " left the validity window (f_max = " + fmt(window.f_max) + ") at arrival " +
                      std::to_string(i + 1);
        return out;
      }
      QuadratureOptions q;
      q.abs_tol = 1e-13 * c_next;
      q.rel_tol = 1e-12;
      auto gap = [&](double x) { return effective_exit_cdf(g, phi, x, window, q).value - c_next; };
      double lo = t_last;
      double hi = std::max(t_last, start);
      int doublings = 0;
      while (gap(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 200) {
          out.status = RunStatus::root_failure;
          out.warning = "emission: could not bracket F_phi(t) = " + fmt(c_next) + " at arrival " +
                        std::to_string(i + 1);
          return out;
        }
      }
      try {
        t = std::max(find_root(gap, lo, hi, 0.0, 1e-10), t_last);
      } catch (const std::domain_error& e) {
        out.status = RunStatus::root_failure;
        out.warning = std::string("emission: ") + e.what();
        return out;
      }
      c = c_next;
      t_last = t;
    }
    t *= options.time_distortion;
    out.records.push_back({i + 1, t, select_target(g, t, u_target, remaining), false});
  }
  return out;
}

SampleResult sample_first_k_emission(const Geometry& g, const EmissionProfile& phi,
                                     std::uint64_t n, std::uint64_t k, RngStream& rng,
                                     const SamplerOptions& options) {
  return sample_first_k_emission(g, validity_window(g, options.f_max), phi, n, k, rng, options);
}

MfatValue mfat_emission_numerical(const Geometry& g, const EmissionProfile& phi, double n) {
  require_rates(phi.alpha(), n, "mfat_emission_numerical");
  MfatValue out;
  const ValidityWindow window = validity_window(g);
  QuadratureOptions inner;
  inner.abs_tol = 1e-14 / n;
  inner.rel_tol = 1e-12;
  auto exponent = [&](double t) { return n * effective_exit_cdf(g, phi, t, window, inner).value; };

  const double scale = std::max(g.diffusive_time(), phi.peak_time());
  double end = std::min(g.diffusive_time(), phi.peak_time()) / 64.0;
  while (exponent(end) < kNegligibleExponent) {
    end *= 2.0;
    if (end > 1e8 * scale) {
      out.warnings.push_back("mfat_emission_numerical: integrand has not decayed below 1e-12 by t = " +
                             fmt(end));
      break;
    }
  }
  if (end > window.t_max) {
    out.warnings.push_back("mfat_emission_numerical: F evaluated past t_max = " + fmt(window.t_max));
  }

  std::vector<double> breakpoints;
  for (double b = end / 2.0; b > end * 1e-9; b /= 2.0) breakpoints.push_back(b);
  for (double m : {1.0, 3.0, 10.0}) breakpoints.push_back(m * phi.peak_time());
  std::sort(breakpoints.begin(), breakpoints.end());
  QuadratureOptions outer;
  outer.abs_tol = 1e-13 * end;
  outer.rel_tol = 1e-10;
  const QuadratureResult r =
      integrate([&](double t) { return std::exp(-exponent(t)); }, 0.0, end, breakpoints, outer);
  if (!r.converged) out.warnings.push_back("mfat_emission_numerical: quadrature did not converge");
  out.value = r.value;
  return out;
}

MfatValue mfat_slow_asymptotic(const Geometry& g, double alpha, double n) {
  require_half_line(g, "mfat_slow_asymptotic");
  require_rates(alpha, n, "mfat_slow_asymptotic");
  const double y = g.nearest_delta();
  const double d = g.diffusion();
  const double tau = g.diffusive_time();
  MfatValue out;
  out.value = std::pow(9.0 * std::numbers::pi / 250.0, 0.2) * std::pow(y, 0.4) /
              (std::pow(d, 0.2) * std::pow(alpha, 0.8) * std::pow(n, 0.4)) * std::tgamma(0.4);
  out.alpha_bar = 4.0 * n * alpha * alpha * tau * tau / (15.0 * kSqrtPi);
  const double bound = alpha * tau * std::sqrt(n);
  if (!(bound < kSlowThreshold)) {
    out.warnings.push_back("mfat_slow_asymptotic: alpha tau_d sqrt(n) = " + fmt(bound) +
                           " is not below " + fmt(kSlowThreshold));
  }
  return out;
}

MfatValue mfat_fast_asymptotic(const Geometry& g, double alpha, double n) {
  require_rates(alpha, n, "mfat_fast_asymptotic");
  const MfatEstimate instantaneous = mfat_instantaneous(g, n);
  MfatValue out;
  out.value = instantaneous.value + 2.0 / alpha;
  out.warnings = instantaneous.warnings;
  const double bound = alpha * g.diffusive_time() / std::pow(std::log(n), 2);
  if (!(bound >= kFastThreshold)) {
    out.warnings.push_back("mfat_fast_asymptotic: alpha tau_d / log(n)^2 = " + fmt(bound) +
                           " is below " + fmt(kFastThreshold));
  }
  return out;
}

MfatValue mfat_intermediate_asymptotic(const Geometry& g, double alpha, double n) {
  require_half_line(g, "mfat_intermediate_asymptotic");
  require_rates(alpha, n, "mfat_intermediate_asymptotic");
  const double y = g.nearest_delta();
  const double d = g.diffusion();
  const double inner =
      n * alpha * alpha * std::pow(y, 4) / (60.0 * d * d * kSqrtPi * std::numbers::ln2);
  MfatValue out;
  out.value = y * y / (10.0 * d) / lambert_w0(0.4 * std::pow(inner, 0.4));
  if (emission_regime(g, alpha, n) != EmissionRegime::intermediate) {
    out.warnings.push_back("mfat_intermediate_asymptotic: parameters lie outside the intermediate regime");
  }
  return out;
}

const char* to_string(EmissionRegime regime) {
  switch (regime) {
    case EmissionRegime::slow: return "slow";
    case EmissionRegime::intermediate: return "intermediate";
    case EmissionRegime::fast: return "fast";
  }
  return "unknown";
}

EmissionRegime emission_regime(const Geometry& g, double alpha, double n) {
  require_rates(alpha, n, "emission_regime");
  const double tau = g.diffusive_time();
  if (alpha * tau * std::sqrt(n) < kSlowThreshold) return EmissionRegime::slow;
  if (alpha * tau / std::pow(std::log(n), 2) > kFastThreshold) return EmissionRegime::fast;
  return EmissionRegime::intermediate;
}

RegimeEstimate classify_regime(const Geometry& g, double alpha, double n) {
  RegimeEstimate out;
  out.regime = emission_regime(g, alpha, n);
  const double tau = g.diffusive_time();
  const double slow_bound = alpha * tau * std::sqrt(n);
  const double fast_bound = alpha * tau / std::pow(std::log(n), 2);
  switch (out.regime) {
    case EmissionRegime::slow:
      out.validity = "alpha tau_d sqrt(n) = " + fmt(slow_bound) + " < " + fmt(kSlowThreshold);
      break;
    case EmissionRegime::fast:
      out.validity = "alpha tau_d / log(n)^2 = " + fmt(fast_bound) + " > " + fmt(kFastThreshold);
      break;
    case EmissionRegime::intermediate:
      out.validity = "alpha tau_d sqrt(n) = " + fmt(slow_bound) + " >= " + fmt(kSlowThreshold) +
                     " and alpha tau_d / log(n)^2 = " + fmt(fast_bound) + " <= " +
                     fmt(kFastThreshold);
      break;
  }
  MfatValue numerical = mfat_emission_numerical(g, EmissionProfile(alpha), n);
  out.numerical = numerical.value;
  out.warnings = std::move(numerical.warnings);

  if (out.regime == EmissionRegime::fast) {
    MfatValue fast = mfat_fast_asymptotic(g, alpha, n);
    out.mfat = fast.value;
    out.warnings.insert(out.warnings.end(), fast.warnings.begin(), fast.warnings.end());
  } else if (is_half_line(g)) {
    MfatValue est = out.regime == EmissionRegime::slow ? mfat_slow_asymptotic(g, alpha, n)
                                                       : mfat_intermediate_asymptotic(g, alpha, n);
    out.mfat = est.value;
    out.warnings.insert(out.warnings.end(), est.warnings.begin(), est.warnings.end());
  } else {
    out.mfat = out.numerical;
    out.warnings.push_back("classify_regime: no closed form for this geometry in the " +
                           std::string(to_string(out.regime)) + " regime; reporting the quadrature");
  }
  return out;
}

}  // namespace extremesim
