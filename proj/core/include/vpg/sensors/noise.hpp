#pragma once

#include <cstdint>

#include "vpg/common/rng.hpp"

namespace vpg::sensors {

/// Per-channel Gaussian noise with a constant bias. `compensate` toggles the
/// bias-subtraction path (the twin's noise compensation API).
struct NoiseModel {
  double std_dev = 0.0;
  double bias = 0.0;
  bool enabled = false;
  bool compensate = false;
  std::uint64_t seed = 0;

  double apply(double value, Rng& rng) const {
    if (!enabled) return value;
    double out = value + bias + std_dev * rng.gaussian();
    if (compensate) out -= bias;
    return out;
  }
};

}  // namespace vpg::sensors
