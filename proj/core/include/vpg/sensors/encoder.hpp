#pragma once

#include <cmath>
#include <cstdint>

#include "vpg/common/errors.hpp"

namespace vpg::sensors {

struct EncoderConfig {
  int pulses_per_rev = 16;
  double cumulative_gear_ratio = 120.0;

  void validate() const {
    if (pulses_per_rev < 1) throw InvalidParameterError("encoder PPR must be >= 1");
    if (cumulative_gear_ratio <= 0.0) throw InvalidParameterError("encoder CGR must be > 0");
  }
};

/// Tick count for a cumulative wheel revolution value: floor(PPR * CGR * N_rev).
inline std::int64_t encoder_read(double wheel_revolutions, const EncoderConfig& cfg) {
  return static_cast<std::int64_t>(
      std::floor(cfg.pulses_per_rev * cfg.cumulative_gear_ratio * wheel_revolutions));
}

}  // namespace vpg::sensors
