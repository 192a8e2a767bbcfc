#pragma once

#include <vector>

#include "omnivic/controllers.hpp"

namespace omnivic::sim {

struct CollectConfig {
  int quota_per_pair{5};     // stored records per (instruction, phase)
  int episodes_per_task{3};  // jittered attempts per knowledge task
  std::uint64_t seed{0};
  bool jitter{true};
  ControllerSettings settings;
  PhaseThresholds thresholds;
};

struct PairCount {
  std::string instruction;
  Phase phase{Phase::FreeMotion};
  int count{0};
};

struct CollectReport {
  int episodes_run{0};
  int successes{0};
  bool degraded_backend{false};
  // One entry per (instruction, phase) of the task list, zeros included.
  std::vector<PairCount> pair_counts;
};

// Runs the full pipeline over each knowledge task and harvests per-step
// records from successful episodes only, down-sampled evenly per phase until
// the per-pair quota is met. The bank grows while collection runs, so later
// episodes already retrieve what earlier ones stored. Deterministic for a
// fixed seed and heuristic backend.
CollectReport collect_into_bank(Bank& bank, const std::vector<NamedEnv>& tasks,
                                const CollectConfig& config,
                                const EmbeddingProvider& embedder);

}  // namespace omnivic::sim
