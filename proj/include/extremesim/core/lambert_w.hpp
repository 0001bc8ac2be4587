#pragma once

namespace extremesim {

/// Principal branch W0: the y >= -1 solving y e^y = x, for x >= -1/e.
/// Throws std::domain_error below the branch point.
double lambert_w0(double x);

/// Lower branch W-1: the y <= -1 solving y e^y = x, for -1/e <= x < 0.
/// Throws std::domain_error outside that interval.
double lambert_wm1(double x);

}  // namespace extremesim
