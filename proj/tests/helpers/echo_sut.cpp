// Minimal external SUT for protocol tests: reads one sensor record per tick
// on stdin, answers one control record on stdout. Brakes when the obstacle
// range drops under 60 m, otherwise holds a fixed throttle.

#include <iostream>
#include <string>

#include "vpg/io/records.hpp"

int main() {
  std::string line;
  bool braking = false;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    vpg::scenario::Conditions conditions;
    const auto frame = vpg::io::parse_sensor_frame_line(line, &conditions);

    if (frame.obstacle_range_m > 0.0 && frame.obstacle_range_m < 60.0) braking = true;

    vpg::dynamics::ControlInput control;
    if (braking) {
      control.brake = 1.0;
    } else {
      control.throttle = 0.5;
    }
    control.lights = conditions.fog_present ? vpg::dynamics::Lights::kFog
                                            : vpg::dynamics::Lights::kOff;
    std::cout << vpg::io::control_line(control, braking ? 1 : 0) << "\n" << std::flush;
  }
  return 0;
}
