#pragma once

#include <string>
#include <vector>

#include "extremesim/core/geometry.hpp"

namespace extremesim {

/// Mean fastest arrival time for instantaneous release of n particles.
struct MfatEstimate {
  double value = 0.0;          // quadrature of int_0^{t_max} exp(-n F(t)) dt
  double leading_order = 0.0;  // tau_d / log(n)
  std::vector<std::string> warnings;
};

MfatEstimate mfat_instantaneous(const Geometry& g, double n, const ValidityWindow& window);
MfatEstimate mfat_instantaneous(const Geometry& g, double n);

}  // namespace extremesim
