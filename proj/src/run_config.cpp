#include "omnivic/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "omnivic/fixtures.hpp"

namespace omnivic::cli {

namespace {

using nlohmann::json;

template <typename T>
void maybe(const json& j, const char* key, T* dst) {
  if (j.contains(key)) {
    *dst = j.at(key).get<T>();
  }
}

}  // namespace

std::vector<sim::NamedEnv> RunConfig::resolve_envs(
    const std::vector<std::string>& names) const {
  std::vector<sim::NamedEnv> out;
  for (const auto& name : names) {
    sim::NamedEnv env = sim::fixture_by_name(name);
    env.safety.f_max = safety_f_max;
    env.safety.consecutive = safety_consecutive;
    if (safety_t_max_override) {
      env.safety.t_max = *safety_t_max_override;
    }
    env.safety.validate();
    out.push_back(std::move(env));
  }
  return out;
}

RunConfig default_config() { return RunConfig{}; }

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path.string() + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config: '" + path.string() + "' is not valid JSON: " +
                      e.what());
  }

  RunConfig cfg;
  try {
    if (j.contains("bank")) {
      const auto& b = j.at("bank");
      maybe(b, "capacity", &cfg.bank.capacity_b);
      maybe(b, "embedding_dim", &cfg.bank.embedding_dim);
    }
    if (j.contains("impedance_range")) {
      const auto& r = j.at("impedance_range");
      maybe(r, "k_min", &cfg.settings.range.k_min);
      maybe(r, "k_max", &cfg.settings.range.k_max);
      maybe(r, "d_min", &cfg.settings.range.d_min);
      maybe(r, "d_max", &cfg.settings.range.d_max);
    }
    if (j.contains("retrieval")) {
      const auto& r = j.at("retrieval");
      maybe(r, "m_percent", &cfg.settings.retrieval.m_percent);
      maybe(r, "top_n", &cfg.settings.retrieval.top_n);
    }
    if (j.contains("heuristic")) {
      const auto& h = j.at("heuristic");
      maybe(h, "resistance_threshold_n",
            &cfg.settings.heuristic.resistance_threshold_n);
      maybe(h, "increase", &cfg.settings.heuristic.increase);
      maybe(h, "decrease", &cfg.settings.heuristic.decrease);
      maybe(h, "blend", &cfg.settings.heuristic.blend);
    }
    if (j.contains("generator")) {
      const auto& g = j.at("generator");
      if (g.contains("backend")) {
        cfg.settings.backend =
            sim::backend_from_string(g.at("backend").get<std::string>());
      }
      maybe(g, "period", &cfg.settings.generator_period);
      if (g.contains("endpoint")) {
        const auto& e = g.at("endpoint");
        maybe(e, "url", &cfg.settings.endpoint.url);
        maybe(e, "model", &cfg.settings.endpoint.model);
        maybe(e, "timeout_ms", &cfg.settings.endpoint.timeout_ms);
        maybe(e, "retries", &cfg.settings.endpoint.retries);
        std::string key_env = "OMNIVIC_API_KEY";
        maybe(e, "api_key_env", &key_env);
        if (const char* key = std::getenv(key_env.c_str())) {
          cfg.settings.endpoint.api_key = key;
        }
      }
    }
    maybe(j, "epsilon", &cfg.settings.epsilon);
    maybe(j, "zeta", &cfg.settings.zeta);
    if (j.contains("phase")) {
      const auto& p = j.at("phase");
      maybe(p, "contact_force_n", &cfg.thresholds.contact_force_n);
      maybe(p, "motion_speed", &cfg.thresholds.motion_speed);
      maybe(p, "approach_window", &cfg.thresholds.approach_window);
    }
    if (j.contains("safety")) {
      const auto& s = j.at("safety");
      maybe(s, "f_max", &cfg.safety_f_max);
      maybe(s, "consecutive", &cfg.safety_consecutive);
      if (s.contains("t_max")) {
        cfg.safety_t_max_override = s.at("t_max").get<long>();
      }
    }
    maybe(j, "envs", &cfg.eval_envs);
    maybe(j, "collect_tasks", &cfg.collect_tasks);
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j.at("methods")) {
        cfg.methods.push_back(sim::method_from_string(m.get<std::string>()));
      }
    }
    maybe(j, "episodes", &cfg.episodes);
    maybe(j, "seed", &cfg.seed);
    maybe(j, "jitter", &cfg.jitter);
    if (j.contains("collect")) {
      const auto& c = j.at("collect");
      maybe(c, "quota_per_pair", &cfg.collect_quota_per_pair);
      maybe(c, "episodes_per_task", &cfg.collect_episodes_per_task);
    }
    if (j.contains("out")) {
      cfg.out_dir = j.at("out").get<std::string>();
    }
  } catch (const json::exception& e) {
    throw ConfigError("config: '" + path.string() + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    // Enum-name parsers (method, backend) reject bad values with
    // invalid_argument; from a config file that is a config error.
    throw ConfigError("config: '" + path.string() + "': " + e.what());
  }

  // Validate eagerly so commands can trust the config.
  try {
    cfg.settings.validate();
    cfg.thresholds.validate();
    if (cfg.bank.capacity_b == 0 || cfg.bank.embedding_dim <= 0) {
      throw std::invalid_argument("bank capacity/dimension must be positive");
    }
    if (cfg.episodes < 1) {
      throw std::invalid_argument("episodes must be >= 1");
    }
    if (cfg.collect_quota_per_pair < 1 || cfg.collect_episodes_per_task < 1) {
      throw std::invalid_argument("collect settings must be >= 1");
    }
    if (!(cfg.safety_f_max > 0.0) || cfg.safety_consecutive < 1) {
      throw std::invalid_argument("safety thresholds must be positive");
    }
    // Stable-step condition for the explicit contact integrator.
    const double dt = 0.002;
    if (dt * std::sqrt(cfg.settings.range.k_max / 2.0) >= 0.5) {
      throw std::invalid_argument(
          "impedance k_max too stiff for the fixed 2 ms step");
    }
    for (const auto& name : cfg.eval_envs) {
      sim::fixture_by_name(name);
    }
    for (const auto& name : cfg.collect_tasks) {
      sim::fixture_by_name(name);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("config: '" + path.string() + "': " + e.what());
  }
  return cfg;
}

}  // namespace omnivic::cli
