#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace extremesim {

/// Largest cumulative exit probability for which the short-time asymptotics
/// are trusted unless the caller overrides it.
inline constexpr double kDefaultFMax = 0.5;

/// Thrown when a computation would leave the short-time validity window.
class ValidityError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Small absorbing target seen from the source.
///
/// `delta` is the geodesic source-target distance. `size` is the window
/// half-width in 2D, the window radius in 3D and is ignored in 1D.
struct Target {
  double delta = 1.0;
  double size = 0.0;

  friend bool operator==(const Target&, const Target&) = default;
};

/// Source/target configuration for the short-time first-passage asymptotics.
class Geometry {
 public:
  /// Throws std::invalid_argument when the configuration is not admissible.
  Geometry(int dim, double diffusion, std::vector<Target> targets);

  int dim() const noexcept { return dim_; }
  double diffusion() const noexcept { return diffusion_; }
  std::span<const Target> targets() const noexcept { return targets_; }
  std::size_t target_count() const noexcept { return targets_.size(); }
  const Target& target(std::size_t i) const { return targets_.at(i); }

  /// Index of the target with the smallest geodesic distance.
  std::size_t nearest_target() const noexcept;
  double nearest_delta() const noexcept { return targets_[nearest_target()].delta; }

  /// tau_d = delta^2 / (4 D) for the nearest target.
  double diffusive_time() const noexcept;

  /// Copy with a different diffusion coefficient.
  Geometry with_diffusion(double diffusion) const;

  friend bool operator==(const Geometry&, const Geometry&) = default;

 private:
  int dim_;
  double diffusion_;
  std::vector<Target> targets_;
};

/// Half-line (1D) geometry with a single absorbing point at distance `delta`.
Geometry half_line(double diffusion, double delta);

/// Trust region of the asymptotic exit probability.
///
/// `t_max` is the earliest of the time where F reaches `f_max` and, in 3D,
/// the turning point past which the asymptotic F decreases. `f_limit` is
/// F(t_max), which is below `f_max` only when the 3D peak caps the window.
struct ValidityWindow {
  double f_max = kDefaultFMax;
  double t_max = 0.0;
  double f_limit = 0.0;
};

/// Throws std::invalid_argument unless 0 < f_max < 1.
ValidityWindow validity_window(const Geometry& g, double f_max = kDefaultFMax);

}  // namespace extremesim
