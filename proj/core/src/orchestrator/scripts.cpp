#include "vpg/orchestrator/scripts.hpp"

#include <sstream>

#include "vpg/common/errors.hpp"

namespace vpg::orchestrator {

Scheduler scheduler_from_string(const std::string& name) {
  if (name == "pbs") return Scheduler::kPbs;
  if (name == "slurm") return Scheduler::kSlurm;
  throw ConfigError("unknown scheduler '" + name + "' (expected pbs or slurm)");
}

std::string emit_job_script(const CampaignConfig& cfg, const std::string& config_path,
                            Scheduler scheduler, int batch_count) {
  if (batch_count < 1) throw InvalidParameterError("emit_job_script: batch_count must be >= 1");
  const auto& hpc = cfg.hpc;
  const int last = batch_count - 1;

  // Shared per-task command; only the array-index variable differs.
  auto task_command = [&](const std::string& index_var) {
    std::ostringstream cmd;
    cmd << "vpg run --config " << config_path << " --mode headless --workers "
        << hpc.cpus_per_task << " --batch " << index_var << " --out out";
    return cmd.str();
  };

  std::ostringstream out;
  out << "#!/bin/bash\n";
  switch (scheduler) {
    case Scheduler::kSlurm:
      out << "#SBATCH --job-name=" << hpc.job_name << "\n";
      out << "#SBATCH --array=0-" << last << "\n";
      out << "#SBATCH --ntasks=1\n";
      out << "#SBATCH --cpus-per-task=" << hpc.cpus_per_task << "\n";
      out << "#SBATCH --mem=" << hpc.mem_gb << "G\n";
      out << "#SBATCH --time=" << hpc.walltime << "\n";
      out << "#SBATCH --partition=" << hpc.queue << "\n";
      out << "#SBATCH --output=logs/%x_%A_%a.out\n";
      out << "\n";
      out << task_command("${SLURM_ARRAY_TASK_ID}") << "\n";
      break;
    case Scheduler::kPbs:
      out << "#PBS -N " << hpc.job_name << "\n";
      out << "#PBS -J 0-" << last << "\n";
      out << "#PBS -l select=1:ncpus=" << hpc.cpus_per_task << ":mem=" << hpc.mem_gb
          << "gb\n";
      out << "#PBS -l walltime=" << hpc.walltime << "\n";
      out << "#PBS -q " << hpc.queue << "\n";
      out << "#PBS -j oe\n";
      out << "\n";
      out << "cd \"$PBS_O_WORKDIR\"\n";
      out << task_command("${PBS_ARRAY_INDEX}") << "\n";
      break;
  }
  return out.str();
}

}  // namespace vpg::orchestrator
