#include "extremesim/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "extremesim/core/first_passage.hpp"
#include "extremesim/core/numerics.hpp"

namespace extremesim {

Geometry::Geometry(int dim, double diffusion, std::vector<Target> targets)
    : dim_(dim), diffusion_(diffusion), targets_(std::move(targets)) {
  if (dim_ < 1 || dim_ > 3) throw std::invalid_argument("geometry: dim must be 1, 2 or 3");
  if (!(diffusion_ > 0.0) || !std::isfinite(diffusion_)) {
    throw std::invalid_argument("geometry: diffusion must be positive");
  }
  if (targets_.empty()) throw std::invalid_argument("geometry: at least one target required");
  if (dim_ == 1 && targets_.size() > 2) {
    throw std::invalid_argument("geometry: a 1D domain has at most two targets");
  }
  for (const Target& t : targets_) {
    if (!(t.delta > 0.0) || !std::isfinite(t.delta)) {
      throw std::invalid_argument("geometry: target distance must be positive");
    }
    if (dim_ == 2 && !(t.size > 0.0 && t.size < 1.0)) {
      throw std::invalid_argument("geometry: 2D window half-width must lie in (0, 1)");
    }
    if (dim_ == 3 && !(t.size > 0.0 && std::isfinite(t.size))) {
      throw std::invalid_argument("geometry: 3D window radius must be positive");
    }
  }
}

std::size_t Geometry::nearest_target() const noexcept {
  const auto it = std::min_element(targets_.begin(), targets_.end(),
                                   [](const Target& a, const Target& b) { return a.delta < b.delta; });
  return static_cast<std::size_t>(it - targets_.begin());
}

double Geometry::diffusive_time() const noexcept {
  const double d = nearest_delta();
  return d * d / (4.0 * diffusion_);
}

Geometry Geometry::with_diffusion(double diffusion) const {
  return Geometry(dim_, diffusion, targets_);
}

Geometry half_line(double diffusion, double delta) {
  return Geometry(1, diffusion, {Target{delta, 0.0}});
}

namespace {

// Time at which the (possibly multi-target) 3D exit probability peaks.
double peak_time_3d(const Geometry& g) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const Target& t : g.targets()) {
    const double ts = t.delta * t.delta / (2.0 * g.diffusion());
    lo = std::min(lo, ts);
    hi = std::max(hi, ts);
  }
  if (lo == hi) return lo;
  auto slope = [&g](double t) { return exit_density(g, t); };
  return find_root(slope, lo, hi, 0.0, 1e-15);
}

}  // namespace

ValidityWindow validity_window(const Geometry& g, double f_max) {
  if (!(f_max > 0.0 && f_max < 1.0)) {
    throw std::invalid_argument("validity window: f_max must lie in (0, 1)");
  }
  ValidityWindow w;
  w.f_max = f_max;

  double upper;
  if (g.dim() == 3) {
    upper = peak_time_3d(g);
    const double f_peak = exit_cdf_raw(g, upper);
    if (f_peak <= f_max) {
      w.t_max = upper;
      w.f_limit = f_peak;
      return w;
    }
  } else {
    upper = g.diffusive_time();
    while (exit_cdf_raw(g, upper) < f_max) upper *= 2.0;
  }
  double lower = upper;
  while (exit_cdf_raw(g, lower) >= f_max) lower *= 0.5;
  w.t_max = find_root([&](double t) { return exit_cdf_raw(g, t) - f_max; }, lower, upper, 0.0,
                      1e-15);
  w.f_limit = f_max;
  return w;
}

}  // namespace extremesim
