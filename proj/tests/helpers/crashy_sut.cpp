// External SUT that answers a few ticks and then dies, for crash-isolation
// tests: the worker running it must fail without disturbing sibling cases.

#include <cstdlib>
#include <iostream>
#include <string>

#include "vpg/io/records.hpp"

int main() {
  std::string line;
  int ticks = 0;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    if (++ticks > 5) std::abort();
    (void)vpg::io::parse_sensor_frame_line(line);
    std::cout << vpg::io::control_line(vpg::dynamics::ControlInput{}) << "\n" << std::flush;
  }
  return 0;
}
