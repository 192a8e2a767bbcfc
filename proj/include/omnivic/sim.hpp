#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "omnivic/bank.hpp"
#include "omnivic/geometry.hpp"
#include "omnivic/impedance.hpp"
#include "omnivic/phase.hpp"

namespace omnivic::sim {

enum class EnvKind { Drawer, Ramp, Push };

const char* to_string(EnvKind kind);

// Sliding drawer on rails: a rigid face at y = q that the end effector can
// press against. Rail friction is a stick-slip pair of forces, not a
// coefficient, since the rails preload is what matters at desk scale.
struct DrawerGeometry {
  double travel{0.15};             // open position; closed is q = 0
  double static_friction_n{2.0};   // drive force needed to start moving
  double kinetic_friction_n{1.5};  // resistance while moving
  double drawer_mass_kg{1.5};
};

// Heightfield along y (the motion axis), piecewise linear, flat in x.
struct RampGeometry {
  std::vector<std::array<double, 2>> profile_yz;  // ascending y breakpoints
  double friction_mu{0.3};
  double viscous_ns_per_m{5.0};
};

// A free object on a table that the end effector pushes along -y by its
// +y face.
struct PushGeometry {
  double object_mass_kg{0.5};
  double friction_mu{0.3};  // object-table friction
  double half_width_m{0.05};
  double start_y{0.0};   // object center at episode start
  double target_y{-0.12};
};

struct EnvSpec {
  EnvKind kind{EnvKind::Drawer};
  std::variant<DrawerGeometry, RampGeometry, PushGeometry> geometry{DrawerGeometry{}};
  double contact_stiffness{1e4};  // N/m
  double contact_damping{50.0};   // N*s/m

  void validate() const;  // geometry well-formed, positive masses/constants
};

struct SimState {
  Pose ee_pose;
  Twist ee_twist;      // world frame
  double env_q{0.0};   // drawer position, or object center y; unused for ramp
  double env_qd{0.0};
  long time_step{0};
  double dt{0.002};
};

struct SafetyConfig {
  double f_max{30.0};
  int consecutive{3};
  long t_max{5000};

  void validate() const;
};

// Run-length detector over per-step force magnitudes. Latches once fired.
class SafetyMonitor {
 public:
  explicit SafetyMonitor(SafetyConfig config);

  // Feed one sample; returns true exactly from the step where `consecutive`
  // strictly-above-f_max samples in a row have been seen.
  bool update(double force_magnitude);
  bool violated() const { return violated_; }
  const SafetyConfig& config() const { return config_; }

 private:
  SafetyConfig config_;
  int run_{0};
  bool violated_{false};
};

struct InstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TaskGoal {
  std::string instruction;
  Vector3 start_position{Vector3::Zero()};
  Vector3 goal_position{Vector3::Zero()};
  double duration_s{6.0};  // reference reaches the goal at this time
};

struct MinJerkRef {
  Vector3 position{Vector3::Zero()};
  Vector3 velocity{Vector3::Zero()};
};

// Straight-line minimum-jerk profile s(u) = 10u^3 - 15u^4 + 6u^5; holds the
// goal with zero velocity for t >= duration.
MinJerkRef min_jerk_reference(const Vector3& start, const Vector3& goal,
                              double duration_s, double t);

// Environment reaction on the end effector, world frame, compensated, zero
// torque. Penalty normal force max(0, k_c*delta - d_c*v_n) along the surface
// normal plus the per-kind tangential resistance; exactly zero when
// separated.
Wrench contact_wrench(const EnvSpec& env, const SimState& state);

struct StepOutput {
  SimState state;
  Wrench measured;  // the contact wrench during this step
};

// One control step: the end effector is a point mass under the impedance
// wrench toward (desired_pose, desired_twist) plus the contact reaction;
// semi-implicit Euler (velocity first, then position); orientation held
// fixed. The environment degree of freedom integrates alongside. Throws
// InstabilityError when the state leaves the desk (position norm > 10 m) or
// turns non-finite.
StepOutput step_dynamics(const SimState& state, const ImpedanceParams& params,
                         const Pose& desired_pose, const Twist& desired_twist,
                         const EnvSpec& env, double ee_mass = 2.0);

// Gain source driven by the episode runner. One instance per episode at a
// time; begin_episode resets any per-episode state.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void begin_episode(const TaskGoal& goal, std::uint64_t seed) = 0;
  virtual ImpedanceParams step(long step_index, Phase phase, const Twist& twist,
                               const Wrench& wrench) = 0;
  virtual const char* name() const = 0;
  // True when a remote backend had to fall back at least once this episode.
  virtual bool degraded() const { return false; }
};

struct EpisodeResult {
  OutcomeLabel outcome{OutcomeLabel::FailureTimeout};
  std::string detail;  // empty, or a diagnostic such as the instability note
  long steps_used{0};
  double dt{0.002};
  double peak_force{0.0};
  bool degraded_backend{false};
  // Parallel per-step traces, all of length steps_used. Pose/twist are the
  // pre-step state; the wrench is the contact reaction measured during the
  // step.
  std::vector<Phase> phases;
  std::vector<Vector3> k_trace;
  std::vector<Vector3> d_trace;
  std::vector<Wrench> wrenches;
  std::vector<Twist> twists;
  std::vector<Pose> poses;
};

// Runs one episode to success, safety violation, instability, or the step
// budget. Success predicates: Drawer closes within 5 mm; Ramp reaches the
// goal y within 5 mm; Push puts the object within 10 mm of its target.
EpisodeResult run_episode(const EnvSpec& env, const TaskGoal& goal,
                          Controller& controller, const SafetyConfig& safety,
                          const PhaseThresholds& thresholds = {},
                          double ee_mass = 2.0, double dt = 0.002,
                          std::uint64_t seed = 0);

// Trace export for plotting; see read_trace_csv for the exact column set.
void write_trace_csv(const std::filesystem::path& path,
                     const EpisodeResult& result);

struct TraceRow {
  double t{0.0};
  Phase phase{Phase::FreeMotion};
  std::array<double, 3> k{}, d{}, force{}, torque{}, linvel{}, angvel{};
  double y{0.0}, z{0.0};
};

struct TraceIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses a trace written by write_trace_csv; lossless round trip. Throws
// TraceIoError on a header or row that does not match the format.
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

// Deterministic seed mixer (splitmix64 over the xor of the inputs) used to
// derive per-episode seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace omnivic::sim
