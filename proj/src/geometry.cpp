#include "omnivic/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace omnivic {

Pose::Pose(const Vector3& position, const Quaternion& orientation)
    : position_(position), orientation_(orientation) {
  if (!position_.allFinite() || !orientation_.coeffs().allFinite()) {
    throw std::invalid_argument("Pose: non-finite component");
  }
  const double n = orientation_.norm();
  if (n < 1e-9) {
    throw std::invalid_argument("Pose: quaternion norm is near zero");
  }
  orientation_.normalize();
}

bool is_finite(const Vector3& v) { return v.allFinite(); }
bool is_finite(const Twist& t) {
  return t.linear.allFinite() && t.angular.allFinite();
}
bool is_finite(const Wrench& w) {
  return w.force.allFinite() && w.torque.allFinite();
}

Vector6 pose_error(const Pose& desired, const Pose& actual) {
  Vector6 err;
  err.head<3>() = desired.position() - actual.position();

  Quaternion q_rel = desired.orientation() * actual.orientation().conjugate();
  // Antipodal quaternions encode the same rotation; flipping the sign keeps
  // the recovered angle on the shortest path.
  if (q_rel.w() < 0.0) {
    q_rel.coeffs() = -q_rel.coeffs();
  }
  q_rel.normalize();
  const Eigen::AngleAxisd aa(q_rel);
  err.tail<3>() = aa.angle() * aa.axis();
  return err;
}

Twist adjoint_twist_to_world(const Twist& body_twist, const Pose& ee_pose) {
  if (body_twist.frame != Frame::Body) {
    throw std::invalid_argument(
        "adjoint_twist_to_world: input twist must be body-frame");
  }
  if (!is_finite(body_twist)) {
    throw std::invalid_argument("adjoint_twist_to_world: non-finite twist");
  }
  const Eigen::Matrix3d R = ee_pose.rotation();
  Twist out;
  out.angular = R * body_twist.angular;
  out.linear = R * body_twist.linear + ee_pose.position().cross(out.angular);
  out.frame = Frame::World;
  return out;
}

Wrench wrench_to_world_compensated(const Wrench& raw, const Pose& ee_pose,
                                   double tool_mass, const Vector3& tool_com) {
  if (raw.frame != Frame::Body) {
    throw std::invalid_argument(
        "wrench_to_world_compensated: input wrench must be body-frame");
  }
  if (raw.gravity_compensated) {
    throw std::invalid_argument(
        "wrench_to_world_compensated: input is already compensated");
  }
  if (!is_finite(raw) || !tool_com.allFinite() || !std::isfinite(tool_mass)) {
    throw std::invalid_argument(
        "wrench_to_world_compensated: non-finite input");
  }
  if (tool_mass < 0.0) {
    throw std::invalid_argument(
        "wrench_to_world_compensated: negative tool mass");
  }

  const Eigen::Matrix3d R = ee_pose.rotation();
  const Vector3 weight_force(0.0, 0.0, -tool_mass * kGravity);
  const Vector3 com_world = R * tool_com;

  Wrench out;
  out.force = R * raw.force - weight_force;
  out.torque = R * raw.torque - com_world.cross(weight_force);
  out.frame = Frame::World;
  out.gravity_compensated = true;
  return out;
}

}  // namespace omnivic
