#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "omnivic/embedding.hpp"
#include "omnivic/paramgen.hpp"
#include "omnivic/sim.hpp"

namespace omnivic::sim {

enum class MethodKind { Baseline, OmniVic, RagOnly };

const char* to_string(MethodKind method);
MethodKind method_from_string(const std::string& text);  // strict, throws

enum class GeneratorBackend { Heuristic, Remote };

const char* to_string(GeneratorBackend backend);
GeneratorBackend backend_from_string(const std::string& text);

// Everything a gain-producing controller needs beyond the bank itself.
struct ControllerSettings {
  ImpedanceRange range;
  RetrievalConfig retrieval;
  HeuristicConfig heuristic;
  GeneratorBackend backend{GeneratorBackend::Heuristic};
  EndpointConfig endpoint;   // used only by the remote backend
  int generator_period{10};  // steps between gain regenerations
  double epsilon{0.1};
  double zeta{0.1};

  void validate() const;
};

// Fixed reference gains every step.
class BaselineController final : public Controller {
 public:
  explicit BaselineController(const ControllerSettings& settings);
  void begin_episode(const TaskGoal& goal, std::uint64_t seed) override;
  ImpedanceParams step(long step_index, Phase phase, const Twist& twist,
                       const Wrench& wrench) override;
  const char* name() const override { return "baseline"; }

 private:
  ImpedanceParams params_;
};

// The full pipeline: retrieve exemplars for the current interaction state,
// generate gains through the configured backend at every generator-period
// boundary, hold them in between. Works with an empty bank (no-exemplar
// prompt). The bank is read-only here and may be shared across controllers.
class OmniVicController final : public Controller {
 public:
  OmniVicController(const Bank* bank, const EmbeddingProvider* embedder,
                    ControllerSettings settings);
  void begin_episode(const TaskGoal& goal, std::uint64_t seed) override;
  ImpedanceParams step(long step_index, Phase phase, const Twist& twist,
                       const Wrench& wrench) override;
  const char* name() const override { return "omnivic"; }
  bool degraded() const override { return degraded_; }

 private:
  const Bank* bank_;
  const EmbeddingProvider* embedder_;
  ControllerSettings settings_;
  std::string instruction_;
  Eigen::VectorXd query_embedding_;
  ImpedanceParams current_;
  bool degraded_{false};
};

// Ablation arm: copies the top retrieved exemplar's gains (clamped) at each
// boundary, no generator involved. With nothing retrieved it holds its
// previous gains; the episode starts at mid-range stiffness.
class RagOnlyController final : public Controller {
 public:
  RagOnlyController(const Bank* bank, const EmbeddingProvider* embedder,
                    ControllerSettings settings);
  void begin_episode(const TaskGoal& goal, std::uint64_t seed) override;
  ImpedanceParams step(long step_index, Phase phase, const Twist& twist,
                       const Wrench& wrench) override;
  const char* name() const override { return "rag-only"; }

 private:
  const Bank* bank_;
  const EmbeddingProvider* embedder_;
  ControllerSettings settings_;
  std::string instruction_;
  Eigen::VectorXd query_embedding_;
  ImpedanceParams current_;
};

std::unique_ptr<Controller> make_controller(MethodKind method, const Bank* bank,
                                            const EmbeddingProvider* embedder,
                                            const ControllerSettings& settings);

struct NamedEnv {
  std::string name;
  EnvSpec env;
  TaskGoal goal;
  SafetyConfig safety;
};

struct SuiteCell {
  std::string env_name;
  std::string method;
  int episodes{0};
  int successes{0};
  int violations{0};
  double success_rate{0.0};
  double violation_rate{0.0};
  double mean_peak_force{0.0};
};

struct SuiteResult {
  std::vector<SuiteCell> cells;
  bool degraded_backend{false};

  // Aggregates over every cell of one method.
  double method_success_rate(const std::string& method) const;
};

// Draws a perturbed copy of the environment for one episode. The same
// (env, episode_seed) pair gives the same realization, so different methods
// face identical conditions episode by episode.
NamedEnv jitter_env(const NamedEnv& nominal, std::uint64_t episode_seed);

// Called once per finished episode, in deterministic order.
using EpisodeSink = std::function<void(
    const std::string& env_name, MethodKind method, int episode_index,
    const EpisodeResult& result)>;

// Runs episodes_per_cell seeded episodes for every (env, method) cell and
// aggregates exact counts. Environment jitter is paired across methods.
SuiteResult evaluate_suite(const std::vector<NamedEnv>& envs,
                           const std::vector<MethodKind>& methods,
                           int episodes_per_cell, std::uint64_t base_seed,
                           const Bank& bank, const EmbeddingProvider& embedder,
                           const ControllerSettings& settings,
                           const PhaseThresholds& thresholds = {},
                           bool jitter = true,
                           const EpisodeSink& on_episode = nullptr);

}  // namespace omnivic::sim
