#include "omnivic/collect.hpp"

#include <algorithm>
#include <map>

namespace omnivic::sim {

namespace {

// `want` evenly spaced picks from n steps, deterministic.
std::vector<std::size_t> spread_indices(std::size_t n, int want) {
  std::vector<std::size_t> out;
  if (n == 0 || want <= 0) {
    return out;
  }
  const auto w = std::min<std::size_t>(static_cast<std::size_t>(want), n);
  for (std::size_t i = 0; i < w; ++i) {
    // Midpoint of the i-th of w equal slices.
    out.push_back((2 * i + 1) * n / (2 * w));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

constexpr Phase kAllPhases[] = {Phase::FreeMotion, Phase::Approaching,
                                Phase::Contact, Phase::Retreat};

}  // namespace

CollectReport collect_into_bank(Bank& bank, const std::vector<NamedEnv>& tasks,
                                const CollectConfig& config,
                                const EmbeddingProvider& embedder) {
  if (config.quota_per_pair < 1 || config.episodes_per_task < 1) {
    throw std::invalid_argument("CollectConfig: quota and episodes must be >= 1");
  }
  config.settings.validate();

  CollectReport report;
  std::map<std::pair<std::string, Phase>, int> counts;
  for (const auto& task : tasks) {
    for (Phase p : kAllPhases) {
      counts[{task.goal.instruction, p}] = 0;
    }
  }

  for (std::size_t task_idx = 0; task_idx < tasks.size(); ++task_idx) {
    const NamedEnv& task = tasks[task_idx];
    const Eigen::VectorXd embedding = embedder.embed(task.goal.instruction);

    for (int ep = 0; ep < config.episodes_per_task; ++ep) {
      const std::uint64_t ep_seed =
          mix_seed(config.seed, task_idx * 7919ull + static_cast<std::uint64_t>(ep));
      const NamedEnv realized =
          config.jitter ? jitter_env(task, ep_seed) : task;

      OmniVicController controller(&bank, &embedder, config.settings);
      const EpisodeResult result =
          run_episode(realized.env, realized.goal, controller, realized.safety,
                      config.thresholds, 2.0, 0.002, ep_seed);
      report.episodes_run += 1;
      if (result.degraded_backend) {
        report.degraded_backend = true;
      }
      if (result.outcome != OutcomeLabel::Success) {
        continue;
      }
      report.successes += 1;

      for (Phase p : kAllPhases) {
        std::vector<std::size_t> steps;
        for (long i = 0; i < result.steps_used; ++i) {
          if (result.phases[static_cast<std::size_t>(i)] == p) {
            steps.push_back(static_cast<std::size_t>(i));
          }
        }
        int& have = counts[{task.goal.instruction, p}];
        const int need = config.quota_per_pair - have;
        if (need <= 0 || steps.empty()) {
          continue;
        }
        for (std::size_t pick : spread_indices(steps.size(), need)) {
          const std::size_t i = steps[pick];
          RagRecord r;
          r.instruction_text = task.goal.instruction;
          r.instruction_embedding = embedding;
          r.phase = p;
          r.twist = result.twists[i];
          // The wrench the controller saw at step i is the one measured
          // during step i-1; mirror that so stored contexts match queries.
          if (i == 0) {
            r.wrench.frame = Frame::World;
            r.wrench.gravity_compensated = true;
          } else {
            r.wrench = result.wrenches[i - 1];
          }
          r.k_trans = result.k_trace[i];
          r.d_trans = result.d_trace[i];
          bank.insert(r, OutcomeLabel::Success);
          have += 1;
        }
      }
    }
  }

  for (const auto& [key, count] : counts) {
    report.pair_counts.push_back({key.first, key.second, count});
  }
  return report;
}

}  // namespace omnivic::sim
