#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "omnivic/collect.hpp"
#include "omnivic/controllers.hpp"

namespace omnivic::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One structured config file drives every command; flags override a handful
// of fields. The remote credential is never stored in the file: the file
// names an environment variable (api_key_env) and the value is read from
// the process environment at load time.
struct RunConfig {
  BankConfig bank;
  sim::ControllerSettings settings;
  PhaseThresholds thresholds;
  double safety_f_max{30.0};
  int safety_consecutive{3};
  std::optional<long> safety_t_max_override;  // else per-fixture budgets

  std::vector<std::string> eval_envs{"ramp_eval", "drawer_eval"};
  std::vector<std::string> collect_tasks{"calibrated_ramp", "drawer", "push"};
  std::vector<sim::MethodKind> methods{sim::MethodKind::Baseline,
                                       sim::MethodKind::OmniVic,
                                       sim::MethodKind::RagOnly};
  int episodes{50};
  std::uint64_t seed{0};
  bool jitter{true};
  int collect_quota_per_pair{5};
  int collect_episodes_per_task{3};
  std::filesystem::path out_dir{"out"};

  // Fixture lookups resolved with this config's safety thresholds applied.
  std::vector<sim::NamedEnv> resolve_envs(const std::vector<std::string>& names) const;
};

// Parses the JSON config file; missing fields keep their defaults. Throws
// ConfigError on unreadable files, malformed JSON, or invalid values.
RunConfig load_config(const std::filesystem::path& path);

// The built-in defaults (used when no --config is given).
RunConfig default_config();

}  // namespace omnivic::cli
