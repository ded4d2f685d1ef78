#pragma once

#include <string>

#include "vpg/dynamics/state.hpp"
#include "vpg/scenario/conditions.hpp"
#include "vpg/sut/stack.hpp"

namespace vpg::io {

/// One-line JSON encodings used on the external-SUT pipe and in trace files.
/// Doubles round-trip exactly.
std::string sensor_frame_line(const sut::SensorFrame& frame,
                              const scenario::Conditions& conditions);

sut::SensorFrame parse_sensor_frame_line(const std::string& line,
                                         scenario::Conditions* conditions_out = nullptr);

std::string control_line(const dynamics::ControlInput& control, int aeb_trigger = 0);

/// Parses a control record. `aeb_out`, when non-null, receives the record's
/// "aeb" flag (defaulting to a full-brake heuristic when absent).
dynamics::ControlInput parse_control_line(const std::string& line, int* aeb_out = nullptr);

}  // namespace vpg::io
