#include "vpg/sut/stack.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

#include "vpg/common/errors.hpp"
#include "vpg/io/records.hpp"

namespace vpg::sut {

ReferenceAebStack::ReferenceAebStack(DetectorProfile profile, AebPlannerConfig planner_cfg,
                                     CruiseControllerConfig controller_cfg,
                                     LightingThresholds lighting,
                                     double height_projection_factor, std::uint64_t seed)
    : profile_(std::move(profile)),
      planner_(std::move(planner_cfg)),
      controller_(controller_cfg),
      lighting_(lighting),
      height_projection_factor_(height_projection_factor),
      rng_(seed) {
  profile_.validate();
}

std::vector<Detection> ReferenceAebStack::perceive(const SensorFrame& frame,
                                                   const scenario::Conditions& conditions) {
  auto fresh = synth_detect(frame.obstacle_range_m, frame.obstacle_class,
                            frame.obstacle_height_m, height_projection_factor_, conditions,
                            conditions.ambient_light, current_lights_, profile_, rng_);
  latency_queue_.push_back(std::move(fresh));
  // Pipeline latency: surface the detections computed latency_ticks ago.
  if (static_cast<int>(latency_queue_.size()) <= profile_.latency_ticks) return {};
  auto out = std::move(latency_queue_.front());
  latency_queue_.pop_front();
  return out;
}

dynamics::ControlInput ReferenceAebStack::act(int trigger, const SensorFrame& frame,
                                              const scenario::Conditions& conditions) const {
  auto control =
      drive_controller(trigger, frame.body_velocity_mps, frame.target_speed_mps, controller_);
  control.lights = lighting_policy(conditions.ambient_light, conditions.fog_present, lighting_);
  return control;
}

dynamics::ControlInput ReferenceAebStack::tick(const SensorFrame& frame,
                                               const scenario::Conditions& conditions) {
  // Lights chosen by the secondary policy feed back into perception range.
  current_lights_ = lighting_policy(conditions.ambient_light, conditions.fog_present, lighting_);
  last_detections_ = perceive(frame, conditions);
  last_trigger_ = plan(last_detections_);
  return act(last_trigger_, frame, conditions);
}

ExternalProcessSut::ExternalProcessSut(const std::vector<std::string>& command) {
  if (command.empty()) throw InvalidParameterError("external SUT: empty command");
  int to_pipe[2];
  int from_pipe[2];
  if (pipe(to_pipe) != 0 || pipe(from_pipe) != 0) {
    throw Error("external SUT: pipe() failed");
  }
  const pid_t pid = fork();
  if (pid < 0) throw Error("external SUT: fork() failed");
  if (pid == 0) {
    dup2(to_pipe[0], STDIN_FILENO);
    dup2(from_pipe[1], STDOUT_FILENO);
    close(to_pipe[0]);
    close(to_pipe[1]);
    close(from_pipe[0]);
    close(from_pipe[1]);
    std::vector<char*> argv;
    argv.reserve(command.size() + 1);
    for (const auto& a : command) argv.push_back(const_cast<char*>(a.c_str()));
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    _exit(127);
  }
  child_pid_ = pid;
  to_child_ = to_pipe[1];
  from_child_ = from_pipe[0];
  close(to_pipe[0]);
  close(from_pipe[1]);
}

ExternalProcessSut::~ExternalProcessSut() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (child_pid_ > 0) {
    kill(child_pid_, SIGTERM);
    int status = 0;
    waitpid(child_pid_, &status, 0);
  }
}

dynamics::ControlInput ExternalProcessSut::tick(const SensorFrame& frame,
                                                const scenario::Conditions& conditions) {
  const std::string line = io::sensor_frame_line(frame, conditions) + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = write(to_child_, line.data() + written, line.size() - written);
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      throw Error("external SUT: child closed its stdin");
    }
    written += static_cast<std::size_t>(n);
  }

  for (;;) {
    const auto newline = read_buffer_.find('\n');
    if (newline != std::string::npos) {
      const std::string reply = read_buffer_.substr(0, newline);
      read_buffer_.erase(0, newline + 1);
      return io::parse_control_line(reply, &last_trigger_);
    }
    char chunk[512];
    const ssize_t n = read(from_child_, chunk, sizeof(chunk));
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      throw Error("external SUT: child closed its stdout");
    }
    read_buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

}  // namespace vpg::sut
