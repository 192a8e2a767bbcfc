#include "omnivic/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace omnivic::sim {

const char* to_string(MethodKind method) {
  switch (method) {
    case MethodKind::Baseline: return "baseline";
    case MethodKind::OmniVic: return "omnivic";
    case MethodKind::RagOnly: return "rag-only";
  }
  throw std::invalid_argument("to_string: bad MethodKind");
}

MethodKind method_from_string(const std::string& text) {
  if (text == "baseline") return MethodKind::Baseline;
  if (text == "omnivic") return MethodKind::OmniVic;
  if (text == "rag-only") return MethodKind::RagOnly;
  throw std::invalid_argument("unknown method '" + text +
                              "' (want baseline, omnivic, or rag-only)");
}

const char* to_string(GeneratorBackend backend) {
  switch (backend) {
    case GeneratorBackend::Heuristic: return "heuristic";
    case GeneratorBackend::Remote: return "remote";
  }
  throw std::invalid_argument("to_string: bad GeneratorBackend");
}

GeneratorBackend backend_from_string(const std::string& text) {
  if (text == "heuristic") return GeneratorBackend::Heuristic;
  if (text == "remote") return GeneratorBackend::Remote;
  throw std::invalid_argument("unknown backend '" + text +
                              "' (want heuristic or remote)");
}

void ControllerSettings::validate() const {
  range.validate();
  retrieval.validate();
  if (generator_period < 1) {
    throw std::invalid_argument("ControllerSettings: generator_period >= 1");
  }
  if (!(epsilon > 0.0) || !(zeta > 0.0)) {
    throw std::invalid_argument("ControllerSettings: epsilon and zeta > 0");
  }
  if (backend == GeneratorBackend::Remote && endpoint.url.empty()) {
    throw std::invalid_argument(
        "ControllerSettings: remote backend needs an endpoint url");
  }
}

BaselineController::BaselineController(const ControllerSettings& settings) {
  settings.validate();
  params_ = baseline_params();
  params_.epsilon = settings.epsilon;
  params_.zeta = settings.zeta;
}

void BaselineController::begin_episode(const TaskGoal&, std::uint64_t) {}

ImpedanceParams BaselineController::step(long, Phase, const Twist&,
                                         const Wrench&) {
  return params_;
}

namespace {

ImpedanceParams midrange_params(const ControllerSettings& s) {
  ImpedanceParams p;
  const double k = 0.5 * (s.range.k_min + s.range.k_max);
  p.k_trans.setConstant(k);
  p.d_trans.setConstant(
      std::clamp(damping_from_stiffness(k), s.range.d_min, s.range.d_max));
  p.epsilon = s.epsilon;
  p.zeta = s.zeta;
  return p;
}

}  // namespace

OmniVicController::OmniVicController(const Bank* bank,
                                     const EmbeddingProvider* embedder,
                                     ControllerSettings settings)
    : bank_(bank), embedder_(embedder), settings_(std::move(settings)) {
  settings_.validate();
  if (bank_ == nullptr || embedder_ == nullptr) {
    throw std::invalid_argument("OmniVicController: bank and embedder required");
  }
  if (embedder_->dim() != bank_->config().embedding_dim) {
    throw std::invalid_argument(
        "OmniVicController: embedder dimension does not match the bank");
  }
  current_ = midrange_params(settings_);
}

void OmniVicController::begin_episode(const TaskGoal& goal, std::uint64_t) {
  instruction_ = goal.instruction;
  query_embedding_ = embedder_->embed(instruction_);
  current_ = midrange_params(settings_);
  degraded_ = false;
}

ImpedanceParams OmniVicController::step(long step_index, Phase phase,
                                        const Twist& twist,
                                        const Wrench& wrench) {
  if (step_index % settings_.generator_period == 0) {
    QueryContext query;
    query.instruction_text = instruction_;
    query.instruction_embedding = query_embedding_;
    query.phase = phase;
    query.twist = twist;
    query.wrench = wrench;

    const std::vector<Exemplar> exemplars =
        retrieve(*bank_, query, settings_.retrieval);

    GeneratorOutput out;
    if (settings_.backend == GeneratorBackend::Remote) {
      out = remote_generate(query, exemplars, settings_.range,
                            settings_.endpoint);
      if (out.backend_tag == BackendTag::Heuristic) {
        degraded_ = true;
      }
    } else {
      out = heuristic_generate(query, exemplars, settings_.range,
                               settings_.heuristic);
    }

    current_.k_trans = out.k_trans;
    current_.d_trans = out.d_trans;
    current_ = clamp_params(current_, settings_.range);
  }
  return current_;
}

RagOnlyController::RagOnlyController(const Bank* bank,
                                     const EmbeddingProvider* embedder,
                                     ControllerSettings settings)
    : bank_(bank), embedder_(embedder), settings_(std::move(settings)) {
  settings_.validate();
  if (bank_ == nullptr || embedder_ == nullptr) {
    throw std::invalid_argument("RagOnlyController: bank and embedder required");
  }
  if (embedder_->dim() != bank_->config().embedding_dim) {
    throw std::invalid_argument(
        "RagOnlyController: embedder dimension does not match the bank");
  }
  current_ = midrange_params(settings_);
}

void RagOnlyController::begin_episode(const TaskGoal& goal, std::uint64_t) {
  instruction_ = goal.instruction;
  query_embedding_ = embedder_->embed(instruction_);
  current_ = midrange_params(settings_);
}

ImpedanceParams RagOnlyController::step(long step_index, Phase phase,
                                        const Twist& twist,
                                        const Wrench& wrench) {
  if (step_index % settings_.generator_period == 0) {
    QueryContext query;
    query.instruction_text = instruction_;
    query.instruction_embedding = query_embedding_;
    query.phase = phase;
    query.twist = twist;
    query.wrench = wrench;

    const std::vector<Exemplar> exemplars =
        retrieve(*bank_, query, settings_.retrieval);
    if (!exemplars.empty()) {
      current_.k_trans = exemplars.front().record.k_trans;
      current_.d_trans = exemplars.front().record.d_trans;
      current_ = clamp_params(current_, settings_.range);
    }
    // Nothing retrieved: hold the previous gains.
  }
  return current_;
}

std::unique_ptr<Controller> make_controller(MethodKind method, const Bank* bank,
                                            const EmbeddingProvider* embedder,
                                            const ControllerSettings& settings) {
  switch (method) {
    case MethodKind::Baseline:
      return std::make_unique<BaselineController>(settings);
    case MethodKind::OmniVic:
      return std::make_unique<OmniVicController>(bank, embedder, settings);
    case MethodKind::RagOnly:
      return std::make_unique<RagOnlyController>(bank, embedder, settings);
  }
  throw std::invalid_argument("make_controller: bad MethodKind");
}

double SuiteResult::method_success_rate(const std::string& method) const {
  int episodes = 0, successes = 0;
  for (const auto& c : cells) {
    if (c.method == method) {
      episodes += c.episodes;
      successes += c.successes;
    }
  }
  return episodes > 0 ? static_cast<double>(successes) / episodes : 0.0;
}

NamedEnv jitter_env(const NamedEnv& nominal, std::uint64_t episode_seed) {
  std::mt19937_64 rng(episode_seed);
  auto uniform = [&rng](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  NamedEnv out = nominal;
  switch (out.env.kind) {
    case EnvKind::Drawer: {
      auto g = std::get<DrawerGeometry>(out.env.geometry);
      const double friction_scale = uniform(0.8, 1.2);
      g.static_friction_n *= friction_scale;
      g.kinetic_friction_n *= friction_scale;
      g.travel *= uniform(0.95, 1.05);
      out.env.geometry = g;
      break;
    }
    case EnvKind::Ramp: {
      auto g = std::get<RampGeometry>(out.env.geometry);
      const double height_scale = uniform(0.9, 1.1);
      for (auto& bp : g.profile_yz) {
        bp[1] *= height_scale;
      }
      g.friction_mu *= uniform(0.85, 1.15);
      out.env.geometry = g;
      break;
    }
    case EnvKind::Push: {
      auto g = std::get<PushGeometry>(out.env.geometry);
      g.friction_mu *= uniform(0.8, 1.2);
      g.object_mass_kg *= uniform(0.9, 1.1);
      out.env.geometry = g;
      break;
    }
  }
  return out;
}

SuiteResult evaluate_suite(const std::vector<NamedEnv>& envs,
                           const std::vector<MethodKind>& methods,
                           int episodes_per_cell, std::uint64_t base_seed,
                           const Bank& bank, const EmbeddingProvider& embedder,
                           const ControllerSettings& settings,
                           const PhaseThresholds& thresholds, bool jitter,
                           const EpisodeSink& on_episode) {
  if (episodes_per_cell < 1) {
    throw std::invalid_argument("evaluate_suite: episodes_per_cell >= 1");
  }
  settings.validate();

  SuiteResult result;
  for (std::size_t env_idx = 0; env_idx < envs.size(); ++env_idx) {
    const NamedEnv& nominal = envs[env_idx];
    nominal.env.validate();
    nominal.safety.validate();

    std::vector<SuiteCell> cells(methods.size());
    std::vector<std::unique_ptr<Controller>> controllers;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      cells[m].env_name = nominal.name;
      cells[m].method = to_string(methods[m]);
      controllers.push_back(
          make_controller(methods[m], &bank, &embedder, settings));
    }

    std::vector<double> peak_sums(methods.size(), 0.0);
    for (int ep = 0; ep < episodes_per_cell; ++ep) {
      const std::uint64_t ep_seed =
          mix_seed(base_seed, env_idx * 1000003ull + static_cast<std::uint64_t>(ep));
      const NamedEnv realized =
          jitter ? jitter_env(nominal, ep_seed) : nominal;

      for (std::size_t m = 0; m < methods.size(); ++m) {
        const EpisodeResult er =
            run_episode(realized.env, realized.goal, *controllers[m],
                        realized.safety, thresholds, 2.0, 0.002, ep_seed);
        cells[m].episodes += 1;
        if (er.outcome == OutcomeLabel::Success) cells[m].successes += 1;
        if (er.outcome == OutcomeLabel::FailureForce) cells[m].violations += 1;
        peak_sums[m] += er.peak_force;
        if (er.degraded_backend) result.degraded_backend = true;
        if (on_episode) {
          on_episode(nominal.name, methods[m], ep, er);
        }
      }
    }

    for (std::size_t m = 0; m < methods.size(); ++m) {
      cells[m].success_rate =
          static_cast<double>(cells[m].successes) / cells[m].episodes;
      cells[m].violation_rate =
          static_cast<double>(cells[m].violations) / cells[m].episodes;
      cells[m].mean_peak_force = peak_sums[m] / cells[m].episodes;
      result.cells.push_back(cells[m]);
    }
  }
  return result;
}

}  // namespace omnivic::sim
