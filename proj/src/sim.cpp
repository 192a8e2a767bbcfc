#include "omnivic/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "omnivic/number_format.hpp"

namespace omnivic::sim {

namespace {

constexpr double kPositionBound = 10.0;   // m; leaving this radius is a blow-up
constexpr double kSlipSpeedEps = 1e-6;    // m/s; below this counts as stuck
constexpr double kTangentRegEps = 1e-4;   // m/s; Coulomb regularization

const DrawerGeometry& drawer_of(const EnvSpec& e) {
  return std::get<DrawerGeometry>(e.geometry);
}
const RampGeometry& ramp_of(const EnvSpec& e) {
  return std::get<RampGeometry>(e.geometry);
}
const PushGeometry& push_of(const EnvSpec& e) {
  return std::get<PushGeometry>(e.geometry);
}

// Height and slope of the ramp profile at y. Outside the breakpoints the
// profile continues flat at the end heights.
void ramp_height(const RampGeometry& g, double y, double* h, double* dh_dy) {
  const auto& p = g.profile_yz;
  if (y <= p.front()[0]) {
    *h = p.front()[1];
    *dh_dy = 0.0;
    return;
  }
  if (y >= p.back()[0]) {
    *h = p.back()[1];
    *dh_dy = 0.0;
    return;
  }
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (y <= p[i][0]) {
      const double y0 = p[i - 1][0], z0 = p[i - 1][1];
      const double y1 = p[i][0], z1 = p[i][1];
      const double slope = (z1 - z0) / (y1 - y0);
      *h = z0 + slope * (y - y0);
      *dh_dy = slope;
      return;
    }
  }
  *h = p.back()[1];
  *dh_dy = 0.0;
}

// Regularized Coulomb + viscous tangential force against the tangential
// velocity. Smooth near zero speed so the integrator stays well-behaved.
Vector3 tangential_friction(const Vector3& v_t, double normal_force, double mu,
                            double viscous) {
  const double speed = v_t.norm();
  Vector3 f = -viscous * v_t;
  if (speed > 0.0) {
    f -= mu * normal_force * v_t / (speed + kTangentRegEps);
  }
  return f;
}

}  // namespace

const char* to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::Drawer: return "drawer";
    case EnvKind::Ramp: return "ramp";
    case EnvKind::Push: return "push";
  }
  throw std::invalid_argument("to_string: bad EnvKind");
}

void EnvSpec::validate() const {
  if (!(contact_stiffness > 0.0) || !(contact_damping >= 0.0)) {
    throw std::invalid_argument("EnvSpec: contact model constants must be positive");
  }
  switch (kind) {
    case EnvKind::Drawer: {
      if (!std::holds_alternative<DrawerGeometry>(geometry)) {
        throw std::invalid_argument("EnvSpec: kind/geometry mismatch");
      }
      const auto& g = drawer_of(*this);
      if (!(g.travel > 0.0) || !(g.drawer_mass_kg > 0.0) ||
          !(g.static_friction_n >= 0.0) || !(g.kinetic_friction_n >= 0.0) ||
          g.kinetic_friction_n > g.static_friction_n) {
        throw std::invalid_argument("EnvSpec: bad drawer geometry");
      }
      break;
    }
    case EnvKind::Ramp: {
      if (!std::holds_alternative<RampGeometry>(geometry)) {
        throw std::invalid_argument("EnvSpec: kind/geometry mismatch");
      }
      const auto& g = ramp_of(*this);
      if (g.profile_yz.size() < 2 || !(g.friction_mu >= 0.0) ||
          !(g.viscous_ns_per_m >= 0.0)) {
        throw std::invalid_argument("EnvSpec: bad ramp geometry");
      }
      for (std::size_t i = 1; i < g.profile_yz.size(); ++i) {
        if (!(g.profile_yz[i][0] > g.profile_yz[i - 1][0])) {
          throw std::invalid_argument(
              "EnvSpec: ramp breakpoints must strictly increase in y");
        }
      }
      break;
    }
    case EnvKind::Push: {
      if (!std::holds_alternative<PushGeometry>(geometry)) {
        throw std::invalid_argument("EnvSpec: kind/geometry mismatch");
      }
      const auto& g = push_of(*this);
      if (!(g.object_mass_kg > 0.0) || !(g.friction_mu >= 0.0) ||
          !(g.half_width_m > 0.0)) {
        throw std::invalid_argument("EnvSpec: bad push geometry");
      }
      break;
    }
  }
}

void SafetyConfig::validate() const {
  if (!(f_max > 0.0) || consecutive < 1 || t_max < 1) {
    throw std::invalid_argument("SafetyConfig: all fields must be positive");
  }
}

SafetyMonitor::SafetyMonitor(SafetyConfig config) : config_(config) {
  config_.validate();
}

bool SafetyMonitor::update(double force_magnitude) {
  if (violated_) {
    return true;
  }
  if (force_magnitude > config_.f_max) {
    if (++run_ >= config_.consecutive) {
      violated_ = true;
    }
  } else {
    run_ = 0;
  }
  return violated_;
}

MinJerkRef min_jerk_reference(const Vector3& start, const Vector3& goal,
                              double duration_s, double t) {
  if (!(duration_s > 0.0)) {
    throw std::invalid_argument("min_jerk_reference: duration must be positive");
  }
  MinJerkRef ref;
  if (t >= duration_s) {
    ref.position = goal;
    return ref;
  }
  const double u = std::max(t, 0.0) / duration_s;
  const double s = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  const double sdot = u * u * (30.0 + u * (-60.0 + 30.0 * u)) / duration_s;
  ref.position = start + s * (goal - start);
  ref.velocity = sdot * (goal - start);
  return ref;
}

Wrench contact_wrench(const EnvSpec& env, const SimState& state) {
  Wrench w;
  w.frame = Frame::World;
  w.gravity_compensated = true;

  const Vector3 pos = state.ee_pose.position();
  const Vector3 vel = state.ee_twist.linear;
  const double kc = env.contact_stiffness;
  const double dc = env.contact_damping;

  switch (env.kind) {
    case EnvKind::Drawer: {
      // Face at y = q with outward normal +y; EE presses from +y side.
      const double delta = state.env_q - pos.y();
      if (delta <= 0.0) {
        return w;
      }
      const double v_n = vel.y() - state.env_qd;
      const double fn = std::max(0.0, kc * delta - dc * v_n);
      w.force = Vector3(0.0, fn, 0.0);
      return w;
    }
    case EnvKind::Ramp: {
      const auto& g = ramp_of(env);
      double h = 0.0, dh = 0.0;
      ramp_height(g, pos.y(), &h, &dh);
      const double gap = h - pos.z();
      if (gap <= 0.0) {
        return w;
      }
      const double denom = std::sqrt(1.0 + dh * dh);
      const Vector3 n(0.0, -dh / denom, 1.0 / denom);
      const double delta_n = gap / denom;  // vertical gap projected on n
      const double v_n = vel.dot(n);
      const double fn = std::max(0.0, kc * delta_n - dc * v_n);
      const Vector3 v_t = vel - v_n * n;
      w.force = fn * n + tangential_friction(v_t, fn, g.friction_mu,
                                             g.viscous_ns_per_m);
      return w;
    }
    case EnvKind::Push: {
      const auto& g = push_of(env);
      const double face = state.env_q + g.half_width_m;
      const double delta = face - pos.y();
      if (delta <= 0.0) {
        return w;
      }
      const double v_n = vel.y() - state.env_qd;
      const double fn = std::max(0.0, kc * delta - dc * v_n);
      const Vector3 v_t(vel.x(), 0.0, vel.z());
      w.force = Vector3(0.0, fn, 0.0) +
                tangential_friction(v_t, fn, g.friction_mu, 1.0);
      return w;
    }
  }
  return w;
}

namespace {

// Integrates the environment's own degree of freedom under the normal force
// the EE applies to it (the reaction of fn, pointing -y).
void integrate_env(const EnvSpec& env, double fn, SimState* s) {
  switch (env.kind) {
    case EnvKind::Drawer: {
      const auto& g = drawer_of(env);
      double qdd = 0.0;
      if (std::abs(s->env_qd) < kSlipSpeedEps) {
        s->env_qd = 0.0;
        if (fn > g.static_friction_n) {
          // Breaks loose; kinetic friction opposes the impending -y motion.
          qdd = (-fn + g.kinetic_friction_n) / g.drawer_mass_kg;
        }
      } else {
        const double friction =
            g.kinetic_friction_n * (s->env_qd > 0.0 ? -1.0 : 1.0);
        qdd = (-fn + friction) / g.drawer_mass_kg;
      }
      s->env_qd += s->dt * qdd;
      s->env_q += s->dt * s->env_qd;
      if (s->env_q <= 0.0) {
        s->env_q = 0.0;
        s->env_qd = 0.0;  // hard stop at fully closed
      } else if (s->env_q >= g.travel) {
        s->env_q = g.travel;
        s->env_qd = std::min(s->env_qd, 0.0);
      }
      break;
    }
    case EnvKind::Push: {
      const auto& g = push_of(env);
      const double weight = g.object_mass_kg * kGravity;
      double qdd = 0.0;
      if (std::abs(s->env_qd) < kSlipSpeedEps) {
        s->env_qd = 0.0;
        if (fn > g.friction_mu * weight) {
          qdd = (-fn + g.friction_mu * weight) / g.object_mass_kg;
        }
      } else {
        const double friction =
            g.friction_mu * weight * (s->env_qd > 0.0 ? -1.0 : 1.0);
        qdd = (-fn + friction) / g.object_mass_kg;
      }
      s->env_qd += s->dt * qdd;
      s->env_q += s->dt * s->env_qd;
      break;
    }
    case EnvKind::Ramp:
      break;  // rigid terrain
  }
}

}  // namespace

StepOutput step_dynamics(const SimState& state, const ImpedanceParams& params,
                         const Pose& desired_pose, const Twist& desired_twist,
                         const EnvSpec& env, double ee_mass) {
  if (!(ee_mass > 0.0) || !(state.dt > 0.0)) {
    throw std::invalid_argument("step_dynamics: mass and dt must be positive");
  }

  const Wrench contact = contact_wrench(env, state);

  Vector6 pe = pose_error(desired_pose, state.ee_pose);
  Vector6 ve;
  ve.head<3>() = desired_twist.linear - state.ee_twist.linear;
  ve.tail<3>() = desired_twist.angular - state.ee_twist.angular;
  const Wrench imp = impedance_wrench(params, pe, ve);

  StepOutput out;
  out.measured = contact;
  out.state = state;

  // Semi-implicit Euler on the translational point mass; orientation and
  // angular velocity stay fixed (translation-only environments).
  const Vector3 accel = (imp.force + contact.force) / ee_mass;
  Vector3 vel = state.ee_twist.linear + state.dt * accel;
  Vector3 pos = state.ee_pose.position() + state.dt * vel;

  if (!vel.allFinite() || !pos.allFinite() || pos.norm() > kPositionBound) {
    throw InstabilityError(
        "step_dynamics: end effector left the workspace or diverged at step " +
        std::to_string(state.time_step));
  }

  out.state.ee_pose = Pose(pos, state.ee_pose.orientation());
  out.state.ee_twist.linear = vel;
  out.state.ee_twist.frame = Frame::World;
  out.state.time_step = state.time_step + 1;

  integrate_env(env, std::max(0.0, contact.force.y()), &out.state);
  return out;
}

EpisodeResult run_episode(const EnvSpec& env, const TaskGoal& goal,
                          Controller& controller, const SafetyConfig& safety,
                          const PhaseThresholds& thresholds, double ee_mass,
                          double dt, std::uint64_t seed) {
  env.validate();
  safety.validate();
  if (!(dt > 0.0)) {
    throw std::invalid_argument("run_episode: dt must be positive");
  }

  SimState s;
  s.dt = dt;
  s.ee_pose = Pose(goal.start_position, Quaternion::Identity());
  s.ee_twist.frame = Frame::World;
  switch (env.kind) {
    case EnvKind::Drawer:
      s.env_q = std::get<DrawerGeometry>(env.geometry).travel;
      break;
    case EnvKind::Push:
      s.env_q = std::get<PushGeometry>(env.geometry).start_y;
      break;
    case EnvKind::Ramp:
      break;
  }

  controller.begin_episode(goal, seed);
  PhaseLabeler labeler(thresholds);
  SafetyMonitor monitor(safety);

  EpisodeResult result;
  result.dt = dt;

  Wrench measured;  // zero until the first step completes
  measured.frame = Frame::World;
  measured.gravity_compensated = true;

  auto succeeded = [&]() {
    switch (env.kind) {
      case EnvKind::Drawer:
        return s.env_q <= 0.005;
      case EnvKind::Ramp:
        return s.ee_pose.position().y() <= goal.goal_position.y() + 0.005;
      case EnvKind::Push:
        return std::abs(s.env_q - std::get<PushGeometry>(env.geometry).target_y) <=
               0.010;
    }
    return false;
  };

  for (long step = 0; step < safety.t_max; ++step) {
    const double t = static_cast<double>(step) * dt;
    const MinJerkRef ref =
        min_jerk_reference(goal.start_position, goal.goal_position,
                           goal.duration_s, t);
    const Pose desired(ref.position, Quaternion::Identity());
    Twist desired_twist;
    desired_twist.linear = ref.velocity;
    desired_twist.frame = Frame::World;

    const Phase phase = labeler.label(s.ee_twist, measured);
    const ImpedanceParams params =
        controller.step(step, phase, s.ee_twist, measured);

    result.phases.push_back(phase);
    result.k_trace.push_back(params.k_trans);
    result.d_trace.push_back(params.d_trans);
    result.twists.push_back(s.ee_twist);
    result.poses.push_back(s.ee_pose);

    StepOutput stepped;
    try {
      stepped = step_dynamics(s, params, desired, desired_twist, env, ee_mass);
    } catch (const InstabilityError& e) {
      result.wrenches.push_back(measured);
      result.steps_used = step + 1;
      result.outcome = OutcomeLabel::FailureForce;
      result.detail = e.what();
      result.degraded_backend = controller.degraded();
      return result;
    }
    s = stepped.state;
    measured = stepped.measured;
    result.wrenches.push_back(measured);
    result.steps_used = step + 1;
    result.peak_force = std::max(result.peak_force, measured.force.norm());

    if (monitor.update(measured.force.norm())) {
      result.outcome = OutcomeLabel::FailureForce;
      result.degraded_backend = controller.degraded();
      return result;
    }
    if (succeeded()) {
      result.outcome = OutcomeLabel::Success;
      result.degraded_backend = controller.degraded();
      return result;
    }
  }

  result.outcome = OutcomeLabel::FailureTimeout;
  result.degraded_backend = controller.degraded();
  return result;
}

void write_trace_csv(const std::filesystem::path& path,
                     const EpisodeResult& result) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw TraceIoError("trace write: cannot open '" + path.string() + "'");
  }
  out << "t,phase,Kx,Ky,Kz,Dx,Dy,Dz,Fx,Fy,Fz,Tx,Ty,Tz,vx,vy,vz,wx,wy,wz,y,z\n";
  for (long i = 0; i < result.steps_used; ++i) {
    const auto u = static_cast<std::size_t>(i);
    std::string line = format_sig(static_cast<double>(i) * result.dt, 17);
    line += ',';
    line += to_string(result.phases[u]);
    auto push3 = [&line](const Vector3& v) {
      for (int j = 0; j < 3; ++j) {
        line += ',';
        line += format_sig(v[j], 17);
      }
    };
    push3(result.k_trace[u]);
    push3(result.d_trace[u]);
    push3(result.wrenches[u].force);
    push3(result.wrenches[u].torque);
    push3(result.twists[u].linear);
    push3(result.twists[u].angular);
    line += ',';
    line += format_sig(result.poses[u].position().y(), 17);
    line += ',';
    line += format_sig(result.poses[u].position().z(), 17);
    line += '\n';
    out << line;
  }
  if (!out) {
    throw TraceIoError("trace write: write failed for '" + path.string() + "'");
  }
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw TraceIoError("trace read: cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line) ||
      line != "t,phase,Kx,Ky,Kz,Dx,Dy,Dz,Fx,Fy,Fz,Tx,Ty,Tz,vx,vy,vz,wx,wy,wz,y,z") {
    throw TraceIoError("trace read: bad header in '" + path.string() + "'");
  }
  std::vector<TraceRow> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (cells.size() != 22) {
      throw TraceIoError("trace read: line " + std::to_string(line_no) +
                         " has " + std::to_string(cells.size()) +
                         " cells, want 22");
    }
    try {
      TraceRow r;
      r.t = std::stod(cells[0]);
      r.phase = phase_from_string(cells[1]);
      auto grab3 = [&cells](std::size_t at, std::array<double, 3>* dst) {
        for (int j = 0; j < 3; ++j) {
          (*dst)[static_cast<std::size_t>(j)] = std::stod(cells[at + static_cast<std::size_t>(j)]);
        }
      };
      grab3(2, &r.k);
      grab3(5, &r.d);
      grab3(8, &r.force);
      grab3(11, &r.torque);
      grab3(14, &r.linvel);
      grab3(17, &r.angvel);
      r.y = std::stod(cells[20]);
      r.z = std::stod(cells[21]);
      rows.push_back(r);
    } catch (const std::exception& e) {
      throw TraceIoError("trace read: line " + std::to_string(line_no) + ": " +
                         e.what());
    }
  }
  return rows;
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace omnivic::sim
