#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace omnivic {

using Vector3 = Eigen::Vector3d;
using Vector6 = Eigen::Matrix<double, 6, 1>;
using Quaternion = Eigen::Quaterniond;

inline constexpr double kGravity = 9.81;  // m/s^2

enum class Frame { World, Body };

// Rigid transform as position + unit quaternion. The quaternion is
// renormalized on construction; a near-zero or non-finite quaternion is a
// contract violation.
class Pose {
 public:
  Pose() : position_(Vector3::Zero()), orientation_(Quaternion::Identity()) {}
  Pose(const Vector3& position, const Quaternion& orientation);

  const Vector3& position() const { return position_; }
  const Quaternion& orientation() const { return orientation_; }
  Eigen::Matrix3d rotation() const { return orientation_.toRotationMatrix(); }

  static Pose identity() { return Pose(); }

 private:
  Vector3 position_;
  Quaternion orientation_;
};

struct Twist {
  Vector3 linear{Vector3::Zero()};
  Vector3 angular{Vector3::Zero()};
  Frame frame{Frame::World};
};

struct Wrench {
  Vector3 force{Vector3::Zero()};
  Vector3 torque{Vector3::Zero()};
  Frame frame{Frame::World};
  bool gravity_compensated{false};
};

bool is_finite(const Vector3& v);
bool is_finite(const Twist& t);
bool is_finite(const Wrench& w);

// Error from `actual` to `desired`: translation difference stacked on the
// rotation vector (axis * angle) of the relative rotation, with the angle
// taken on the shortest path, i.e. in (-pi, pi].
Vector6 pose_error(const Pose& desired, const Pose& actual);

// Re-expresses a body-frame twist in the world frame at the given pose:
//   angular_w = R * angular_b
//   linear_w  = R * linear_b + p x (R * angular_b)
// Throws if the input is not tagged Body.
Twist adjoint_twist_to_world(const Twist& body_twist, const Pose& ee_pose);

// Rotates a raw body-frame sensor wrench into the world frame and subtracts
// the tool's weight wrench (force -m*g*z applied at tool_com, expressed in
// the sensor body frame). Throws if the input is already compensated, is not
// tagged Body, or tool_mass is negative. The result is tagged World and
// marked compensated.
Wrench wrench_to_world_compensated(const Wrench& raw, const Pose& ee_pose,
                                   double tool_mass, const Vector3& tool_com);

}  // namespace omnivic
