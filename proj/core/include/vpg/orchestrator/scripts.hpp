#pragma once

#include <string>

#include "vpg/orchestrator/config.hpp"

namespace vpg::orchestrator {

enum class Scheduler { kPbs, kSlurm };

Scheduler scheduler_from_string(const std::string& name);

/// Job-array submission script for the target scheduler: array size equals
/// the batch count, each task runs one batch of the campaign through this
/// tool. Resource directives come from the config's hpc section.
std::string emit_job_script(const CampaignConfig& cfg, const std::string& config_path,
                            Scheduler scheduler, int batch_count);

}  // namespace vpg::orchestrator
