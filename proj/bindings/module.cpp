// Python bindings for the core operations: geometry, impedance math, the
// experience bank with retrieval, prompt building and parameter generation,
// phase labeling, and the desk-scale episode runner.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>

#include "omnivic/bank.hpp"
#include "omnivic/collect.hpp"
#include "omnivic/commands.hpp"
#include "omnivic/controllers.hpp"
#include "omnivic/embedding.hpp"
#include "omnivic/fixtures.hpp"
#include "omnivic/geometry.hpp"
#include "omnivic/impedance.hpp"
#include "omnivic/paramgen.hpp"
#include "omnivic/phase.hpp"
#include "omnivic/retrieval.hpp"
#include "omnivic/run_config.hpp"
#include "omnivic/sim.hpp"
#include "omnivic/similarity.hpp"

namespace py = pybind11;
using namespace omnivic;

namespace {

// One-call episode helper so Python callers need no controller plumbing.
sim::EpisodeResult run_fixture_episode(const std::string& fixture_name,
                                       sim::MethodKind method, const Bank& bank,
                                       const sim::ControllerSettings& settings,
                                       const PhaseThresholds& thresholds,
                                       std::uint64_t seed, bool jitter) {
  sim::NamedEnv fixture = sim::fixture_by_name(fixture_name);
  if (jitter) {
    fixture = sim::jitter_env(fixture, seed);
  }
  const HashEmbedder embedder(bank.config().embedding_dim);
  const std::unique_ptr<sim::Controller> controller =
      sim::make_controller(method, &bank, &embedder, settings);
  return sim::run_episode(fixture.env, fixture.goal, *controller,
                          fixture.safety, thresholds, 2.0, 0.002, seed);
}

sim::SuiteResult evaluate_fixtures(const std::vector<std::string>& env_names,
                                   const std::vector<sim::MethodKind>& methods,
                                   int episodes, std::uint64_t seed,
                                   const Bank& bank,
                                   const sim::ControllerSettings& settings,
                                   const PhaseThresholds& thresholds,
                                   bool jitter) {
  std::vector<sim::NamedEnv> envs;
  for (const auto& name : env_names) {
    envs.push_back(sim::fixture_by_name(name));
  }
  const HashEmbedder embedder(bank.config().embedding_dim);
  return sim::evaluate_suite(envs, methods, episodes, seed, bank, embedder,
                             settings, thresholds, jitter);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "variable impedance control with retrieval-augmented in-context "
            "parameter generation";

  // -- geometry ----------------------------------------------------------
  py::enum_<Frame>(m, "Frame")
      .value("World", Frame::World)
      .value("Body", Frame::Body);

  py::class_<Pose>(m, "Pose")
      .def(py::init<>())
      .def(py::init([](const Vector3& position, const Eigen::Vector4d& q_wxyz) {
             return Pose(position,
                         Quaternion(q_wxyz[0], q_wxyz[1], q_wxyz[2], q_wxyz[3]));
           }),
           py::arg("position"), py::arg("quaternion_wxyz"))
      .def_property_readonly("position", &Pose::position)
      .def_property_readonly("quaternion_wxyz",
                             [](const Pose& p) {
                               const Quaternion& q = p.orientation();
                               return Eigen::Vector4d(q.w(), q.x(), q.y(), q.z());
                             })
      .def_static("identity", &Pose::identity);

  py::class_<Twist>(m, "Twist")
      .def(py::init<>())
      .def(py::init([](const Vector3& linear, const Vector3& angular, Frame f) {
             return Twist{linear, angular, f};
           }),
           py::arg("linear"), py::arg("angular"),
           py::arg("frame") = Frame::World)
      .def_readwrite("linear", &Twist::linear)
      .def_readwrite("angular", &Twist::angular)
      .def_readwrite("frame", &Twist::frame);

  py::class_<Wrench>(m, "Wrench")
      .def(py::init<>())
      .def(py::init([](const Vector3& force, const Vector3& torque, Frame f,
                       bool compensated) {
             return Wrench{force, torque, f, compensated};
           }),
           py::arg("force"), py::arg("torque"), py::arg("frame") = Frame::World,
           py::arg("gravity_compensated") = false)
      .def_readwrite("force", &Wrench::force)
      .def_readwrite("torque", &Wrench::torque)
      .def_readwrite("frame", &Wrench::frame)
      .def_readwrite("gravity_compensated", &Wrench::gravity_compensated);

  m.def("pose_error", &pose_error, py::arg("desired"), py::arg("actual"));
  m.def("adjoint_twist_to_world", &adjoint_twist_to_world,
        py::arg("body_twist"), py::arg("ee_pose"));
  m.def("wrench_to_world_compensated", &wrench_to_world_compensated,
        py::arg("raw"), py::arg("ee_pose"), py::arg("tool_mass"),
        py::arg("tool_com"));

  // -- impedance ---------------------------------------------------------
  py::class_<ImpedanceParams>(m, "ImpedanceParams")
      .def(py::init<>())
      .def_readwrite("k_trans", &ImpedanceParams::k_trans)
      .def_readwrite("d_trans", &ImpedanceParams::d_trans)
      .def_readwrite("epsilon", &ImpedanceParams::epsilon)
      .def_readwrite("zeta", &ImpedanceParams::zeta);

  py::class_<ImpedanceRange>(m, "ImpedanceRange")
      .def(py::init<>())
      .def(py::init([](double k_min, double k_max, double d_min, double d_max) {
             return ImpedanceRange{k_min, k_max, d_min, d_max};
           }),
           py::arg("k_min"), py::arg("k_max"), py::arg("d_min"),
           py::arg("d_max"))
      .def_readwrite("k_min", &ImpedanceRange::k_min)
      .def_readwrite("k_max", &ImpedanceRange::k_max)
      .def_readwrite("d_min", &ImpedanceRange::d_min)
      .def_readwrite("d_max", &ImpedanceRange::d_max)
      .def("validate", &ImpedanceRange::validate);

  py::class_<Gains6>(m, "Gains6")
      .def_readwrite("k", &Gains6::k)
      .def_readwrite("d", &Gains6::d);

  m.def("expand_gains", &expand_gains, py::arg("params"));
  m.def("impedance_wrench", &impedance_wrench, py::arg("params"),
        py::arg("pose_err"), py::arg("vel_err"));
  m.def("clamp_params", &clamp_params, py::arg("params"), py::arg("range"));
  m.def("baseline_params", &baseline_params);
  m.def("damping_from_stiffness", &damping_from_stiffness, py::arg("k"));

  // -- similarity --------------------------------------------------------
  m.def("cosine_sim",
        [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
          return cosine_sim(a, b);
        },
        py::arg("a"), py::arg("b"));

  // -- bank --------------------------------------------------------------
  py::enum_<Phase>(m, "Phase")
      .value("FreeMotion", Phase::FreeMotion)
      .value("Approaching", Phase::Approaching)
      .value("Contact", Phase::Contact)
      .value("Retreat", Phase::Retreat);

  py::enum_<OutcomeLabel>(m, "OutcomeLabel")
      .value("Success", OutcomeLabel::Success)
      .value("FailureForce", OutcomeLabel::FailureForce)
      .value("FailureTimeout", OutcomeLabel::FailureTimeout);

  m.def("label_outcome",
        [](const std::vector<double>& trace, long step_count, double f_max,
           long t_max, int consecutive) {
          return label_outcome(trace, step_count, f_max, t_max, consecutive);
        },
        py::arg("force_trace"), py::arg("step_count"), py::arg("f_max"),
        py::arg("t_max"), py::arg("consecutive"));

  py::class_<RagRecord>(m, "RagRecord")
      .def(py::init<>())
      .def_readwrite("record_id", &RagRecord::record_id)
      .def_readwrite("instruction_text", &RagRecord::instruction_text)
      .def_readwrite("instruction_embedding", &RagRecord::instruction_embedding)
      .def_readwrite("phase", &RagRecord::phase)
      .def_readwrite("twist", &RagRecord::twist)
      .def_readwrite("wrench", &RagRecord::wrench)
      .def_readwrite("k_trans", &RagRecord::k_trans)
      .def_readwrite("d_trans", &RagRecord::d_trans);

  py::class_<BankConfig>(m, "BankConfig")
      .def(py::init<>())
      .def(py::init([](std::size_t capacity, int dim) {
             return BankConfig{capacity, dim};
           }),
           py::arg("capacity_b") = 200, py::arg("embedding_dim") = 256)
      .def_readwrite("capacity_b", &BankConfig::capacity_b)
      .def_readwrite("embedding_dim", &BankConfig::embedding_dim);

  py::class_<InsertReport>(m, "InsertReport")
      .def_readonly("added", &InsertReport::added)
      .def_readonly("record_id", &InsertReport::record_id)
      .def_readonly("evicted_id", &InsertReport::evicted_id);

  py::class_<BankStats>(m, "BankStats")
      .def_readonly("size", &BankStats::size)
      .def_readonly("distinct_instructions", &BankStats::distinct_instructions)
      .def_readonly("per_phase", &BankStats::per_phase);

  py::register_exception<BankIoError>(m, "BankIoError");

  py::class_<Bank>(m, "Bank")
      .def(py::init<BankConfig, std::uint64_t>(), py::arg("config"),
           py::arg("eviction_seed") = 0)
      .def("insert", &Bank::insert, py::arg("record"), py::arg("label"))
      .def("records", &Bank::records,
           py::return_value_policy::reference_internal)
      .def("stats", &Bank::stats)
      .def("save", &Bank::save, py::arg("path"))
      .def_static("load", &Bank::load, py::arg("path"), py::arg("config"),
                  py::arg("eviction_seed") = 0);

  // -- retrieval ---------------------------------------------------------
  py::class_<QueryContext>(m, "QueryContext")
      .def(py::init<>())
      .def_readwrite("instruction_text", &QueryContext::instruction_text)
      .def_readwrite("instruction_embedding",
                     &QueryContext::instruction_embedding)
      .def_readwrite("phase", &QueryContext::phase)
      .def_readwrite("twist", &QueryContext::twist)
      .def_readwrite("wrench", &QueryContext::wrench);

  py::class_<RetrievalConfig>(m, "RetrievalConfig")
      .def(py::init<>())
      .def_readwrite("m_percent", &RetrievalConfig::m_percent)
      .def_readwrite("top_n", &RetrievalConfig::top_n);

  py::class_<Exemplar>(m, "Exemplar")
      .def_readonly("record", &Exemplar::record)
      .def_readonly("force_sim", &Exemplar::force_sim)
      .def_readonly("torque_sim", &Exemplar::torque_sim)
      .def_readonly("linvel_sim", &Exemplar::linvel_sim)
      .def_readonly("angvel_sim", &Exemplar::angvel_sim)
      .def_readonly("aggregate", &Exemplar::aggregate);

  m.def("retrieve", &retrieve, py::arg("bank"), py::arg("query"),
        py::arg("config"));
  m.def("brute_force_retrieve", &brute_force_retrieve, py::arg("bank"),
        py::arg("query"), py::arg("config"));

  // -- parameter generation ----------------------------------------------
  py::register_exception<ParseError>(m, "ParseError");

  py::enum_<BackendTag>(m, "BackendTag")
      .value("Remote", BackendTag::Remote)
      .value("Heuristic", BackendTag::Heuristic);

  py::class_<PromptBundle>(m, "PromptBundle")
      .def_readonly("system_preamble", &PromptBundle::system_preamble)
      .def_readonly("instruction", &PromptBundle::instruction)
      .def_readonly("phase", &PromptBundle::phase)
      .def_readonly("exemplar_blocks", &PromptBundle::exemplar_blocks)
      .def("body", &PromptBundle::body)
      .def("render", &PromptBundle::render);

  py::class_<GeneratorOutput>(m, "GeneratorOutput")
      .def_readonly("k_trans", &GeneratorOutput::k_trans)
      .def_readonly("d_trans", &GeneratorOutput::d_trans)
      .def_readonly("raw_response", &GeneratorOutput::raw_response)
      .def_readonly("backend_tag", &GeneratorOutput::backend_tag);

  py::class_<HeuristicConfig>(m, "HeuristicConfig")
      .def(py::init<>())
      .def_readwrite("resistance_threshold_n",
                     &HeuristicConfig::resistance_threshold_n)
      .def_readwrite("increase", &HeuristicConfig::increase)
      .def_readwrite("decrease", &HeuristicConfig::decrease)
      .def_readwrite("blend", &HeuristicConfig::blend);

  m.def("build_prompt", &build_prompt, py::arg("query"), py::arg("exemplars"),
        py::arg("range"));
  m.def("parse_response", &parse_response, py::arg("text"), py::arg("range"));
  m.def("render_output", &render_output, py::arg("output"));
  m.def("heuristic_generate", &heuristic_generate, py::arg("query"),
        py::arg("exemplars"), py::arg("range"),
        py::arg("config") = HeuristicConfig{});

  // -- phase labeling ------------------------------------------------------
  py::class_<PhaseThresholds>(m, "PhaseThresholds")
      .def(py::init<>())
      .def_readwrite("contact_force_n", &PhaseThresholds::contact_force_n)
      .def_readwrite("motion_speed", &PhaseThresholds::motion_speed)
      .def_readwrite("approach_window", &PhaseThresholds::approach_window);

  py::class_<PhaseLabeler>(m, "PhaseLabeler")
      .def(py::init<PhaseThresholds>(), py::arg("thresholds") = PhaseThresholds{})
      .def("label", &PhaseLabeler::label, py::arg("twist"), py::arg("wrench"))
      .def("reset", &PhaseLabeler::reset);

  // -- embedding -----------------------------------------------------------
  py::class_<HashEmbedder>(m, "HashEmbedder")
      .def(py::init<int>(), py::arg("dim") = 256)
      .def("embed", &HashEmbedder::embed, py::arg("text"))
      .def("dim", &HashEmbedder::dim);

  // -- simulation ----------------------------------------------------------
  py::enum_<sim::MethodKind>(m, "MethodKind")
      .value("Baseline", sim::MethodKind::Baseline)
      .value("OmniVic", sim::MethodKind::OmniVic)
      .value("RagOnly", sim::MethodKind::RagOnly);

  py::enum_<sim::GeneratorBackend>(m, "GeneratorBackend")
      .value("Heuristic", sim::GeneratorBackend::Heuristic)
      .value("Remote", sim::GeneratorBackend::Remote);

  py::class_<sim::ControllerSettings>(m, "ControllerSettings")
      .def(py::init<>())
      .def_readwrite("range", &sim::ControllerSettings::range)
      .def_readwrite("retrieval", &sim::ControllerSettings::retrieval)
      .def_readwrite("heuristic", &sim::ControllerSettings::heuristic)
      .def_readwrite("backend", &sim::ControllerSettings::backend)
      .def_readwrite("generator_period",
                     &sim::ControllerSettings::generator_period)
      .def_readwrite("epsilon", &sim::ControllerSettings::epsilon)
      .def_readwrite("zeta", &sim::ControllerSettings::zeta);

  py::class_<sim::EpisodeResult>(m, "EpisodeResult")
      .def_readonly("outcome", &sim::EpisodeResult::outcome)
      .def_readonly("detail", &sim::EpisodeResult::detail)
      .def_readonly("steps_used", &sim::EpisodeResult::steps_used)
      .def_readonly("dt", &sim::EpisodeResult::dt)
      .def_readonly("peak_force", &sim::EpisodeResult::peak_force)
      .def_readonly("degraded_backend", &sim::EpisodeResult::degraded_backend)
      .def_readonly("phases", &sim::EpisodeResult::phases)
      .def_readonly("k_trace", &sim::EpisodeResult::k_trace)
      .def_readonly("d_trace", &sim::EpisodeResult::d_trace);

  py::class_<sim::SuiteCell>(m, "SuiteCell")
      .def_readonly("env_name", &sim::SuiteCell::env_name)
      .def_readonly("method", &sim::SuiteCell::method)
      .def_readonly("episodes", &sim::SuiteCell::episodes)
      .def_readonly("successes", &sim::SuiteCell::successes)
      .def_readonly("violations", &sim::SuiteCell::violations)
      .def_readonly("success_rate", &sim::SuiteCell::success_rate)
      .def_readonly("violation_rate", &sim::SuiteCell::violation_rate)
      .def_readonly("mean_peak_force", &sim::SuiteCell::mean_peak_force);

  py::class_<sim::SuiteResult>(m, "SuiteResult")
      .def_readonly("cells", &sim::SuiteResult::cells)
      .def_readonly("degraded_backend", &sim::SuiteResult::degraded_backend)
      .def("method_success_rate", &sim::SuiteResult::method_success_rate,
           py::arg("method"));

  m.def("fixture_names", &sim::fixture_names);
  m.def("mix_seed", &sim::mix_seed, py::arg("a"), py::arg("b"));
  m.def("run_fixture_episode", &run_fixture_episode, py::arg("fixture_name"),
        py::arg("method"), py::arg("bank"),
        py::arg("settings") = sim::ControllerSettings{},
        py::arg("thresholds") = PhaseThresholds{}, py::arg("seed") = 0,
        py::arg("jitter") = false);
  m.def("evaluate_fixtures", &evaluate_fixtures, py::arg("env_names"),
        py::arg("methods"), py::arg("episodes"), py::arg("seed"),
        py::arg("bank"), py::arg("settings") = sim::ControllerSettings{},
        py::arg("thresholds") = PhaseThresholds{}, py::arg("jitter") = true);
}
