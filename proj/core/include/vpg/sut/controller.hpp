#pragma once

#include "vpg/dynamics/state.hpp"

namespace vpg::sut {

struct CruiseControllerConfig {
  double kp = 0.2;  // proportional gain on speed error
};

/// Drive-by-wire layer: emergency braking on trigger, otherwise proportional
/// cruise toward the lane target speed, steering held straight.
dynamics::ControlInput drive_controller(int aeb_trigger, double body_velocity_mps,
                                        double target_speed_mps,
                                        const CruiseControllerConfig& cfg = {});

struct LightingThresholds {
  double high_beam_below = 0.15;
  double low_beam_below = 0.5;
};

/// Secondary policy: fog lights whenever fog/mist is present, otherwise beam
/// choice by ambient light.
dynamics::Lights lighting_policy(double ambient_light, bool fog_present,
                                 const LightingThresholds& thresholds = {});

}  // namespace vpg::sut
