#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "omnivic/geometry.hpp"

using namespace omnivic;

namespace {

Quaternion random_unit_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Quaternion q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q;
}

}  // namespace

TEST_CASE("pose construction renormalizes and rejects degenerate quaternions") {
  Pose p(Vector3(1, 2, 3), Quaternion(2, 0, 0, 0));  // scaled identity
  CHECK(p.orientation().norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.orientation().w() == doctest::Approx(1.0));

  CHECK_THROWS_AS(Pose(Vector3::Zero(), Quaternion(0, 0, 0, 0)),
                  std::invalid_argument);
  const double nan = std::nan("");
  CHECK_THROWS_AS(Pose(Vector3(nan, 0, 0), Quaternion::Identity()),
                  std::invalid_argument);
}

TEST_CASE("pose_error is zero for identical poses") {
  Pose p(Vector3(0.3, -0.2, 1.1),
         Quaternion(Eigen::AngleAxisd(0.7, Vector3(0, 1, 0))));
  CHECK(pose_error(p, p).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pose_error pure translation") {
  Pose desired(Vector3(0.1, 0, 0), Quaternion::Identity());
  Pose actual(Vector3::Zero(), Quaternion::Identity());
  Vector6 e = pose_error(desired, actual);
  CHECK(e[0] == doctest::Approx(0.1));
  CHECK(e.tail<5>().norm() == doctest::Approx(0.0));
}

TEST_CASE("pose_error 90 degree rotation about z") {
  Pose desired(Vector3::Zero(),
               Quaternion(Eigen::AngleAxisd(std::numbers::pi / 2,
                                            Vector3::UnitZ())));
  Pose actual(Vector3::Zero(), Quaternion::Identity());
  Vector6 e = pose_error(desired, actual);
  CHECK(e.head<3>().norm() == doctest::Approx(0.0));
  CHECK(e[3] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e[4] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e[5] == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("pose_error takes the short way around") {
  // 350 degrees one way is 10 degrees the other; the angle must land in
  // (-pi, pi].
  const double big = 350.0 * std::numbers::pi / 180.0;
  Pose desired(Vector3::Zero(),
               Quaternion(Eigen::AngleAxisd(big, Vector3::UnitX())));
  Pose actual(Vector3::Zero(), Quaternion::Identity());
  Vector6 e = pose_error(desired, actual);
  CHECK(std::abs(e[3]) == doctest::Approx(10.0 * std::numbers::pi / 180.0));
  CHECK(e[3] < 0.0);  // rotating back is the short way
}

TEST_CASE("adjoint_twist_to_world identity pose passes the twist through") {
  Twist body{Vector3(0.1, -0.2, 0.3), Vector3(1, 2, 3), Frame::Body};
  Twist world = adjoint_twist_to_world(body, Pose::identity());
  CHECK((world.linear - body.linear).norm() == doctest::Approx(0.0));
  CHECK((world.angular - body.angular).norm() == doctest::Approx(0.0));
  CHECK(world.frame == Frame::World);
}

TEST_CASE("adjoint_twist_to_world lever arm: p x omega") {
  // Pure translation p = (0,0,1), angular (1,0,0): linear' = p x w = (0,1,0).
  Twist body{Vector3::Zero(), Vector3(1, 0, 0), Frame::Body};
  Pose pose(Vector3(0, 0, 1), Quaternion::Identity());
  Twist world = adjoint_twist_to_world(body, pose);
  CHECK(world.angular.x() == doctest::Approx(1.0));
  CHECK(world.linear.x() == doctest::Approx(0.0));
  CHECK(world.linear.y() == doctest::Approx(1.0));
  CHECK(world.linear.z() == doctest::Approx(0.0));
}

TEST_CASE("adjoint_twist_to_world rejects world-frame input") {
  Twist already_world{Vector3::Zero(), Vector3::Zero(), Frame::World};
  CHECK_THROWS_AS(adjoint_twist_to_world(already_world, Pose::identity()),
                  std::invalid_argument);
}

TEST_CASE("adjoint round trip is identity on random poses") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Pose pose(Vector3(u(rng), u(rng), u(rng)), random_unit_quaternion(rng));
    Twist body{Vector3(u(rng), u(rng), u(rng)), Vector3(u(rng), u(rng), u(rng)),
               Frame::Body};
    Twist world = adjoint_twist_to_world(body, pose);

    // Undo by hand: w_b = R^T w_w, v_b = R^T (v_w - p x w_w).
    Eigen::Matrix3d r = pose.rotation();
    Vector3 w_back = r.transpose() * world.angular;
    Vector3 v_back =
        r.transpose() * (world.linear - pose.position().cross(world.angular));
    CHECK((w_back - body.angular).norm() < 1e-9);
    CHECK((v_back - body.linear).norm() < 1e-9);
  }
}

TEST_CASE("wrench_to_world_compensated cancels gravity exactly") {
  // 1 kg tool at the sensor origin, identity pose: raw reading is the tool
  // weight, so the compensated external wrench is zero.
  Wrench raw{Vector3(0, 0, -9.81), Vector3::Zero(), Frame::Body, false};
  Wrench out =
      wrench_to_world_compensated(raw, Pose::identity(), 1.0, Vector3::Zero());
  CHECK(out.force.norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(out.torque.norm() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(out.frame == Frame::World);
  CHECK(out.gravity_compensated);
}

TEST_CASE("wrench_to_world_compensated zero mass is a rotation pass-through") {
  Wrench raw{Vector3(1, 2, 3), Vector3(0.1, 0.2, 0.3), Frame::Body, false};
  Wrench out =
      wrench_to_world_compensated(raw, Pose::identity(), 0.0, Vector3::Zero());
  CHECK((out.force - raw.force).norm() == doctest::Approx(0.0));
  CHECK((out.torque - raw.torque).norm() == doctest::Approx(0.0));
}

TEST_CASE("wrench_to_world_compensated offset COM produces the weight torque") {
  // Weight -mg z at com (0.1, 0, 0) gives torque com x F = (0, mg*0.1, 0)
  // about the sensor origin; a raw reading equal to that weight wrench must
  // compensate to zero.
  const double m = 2.0;
  Vector3 com(0.1, 0.0, 0.0);
  Vector3 weight(0, 0, -m * kGravity);
  Wrench raw{weight, com.cross(weight), Frame::Body, false};
  Wrench out = wrench_to_world_compensated(raw, Pose::identity(), m, com);
  CHECK(out.force.norm() < 1e-12);
  CHECK(out.torque.norm() < 1e-12);
}

TEST_CASE("wrench_to_world_compensated rejects bad inputs") {
  Wrench compensated{Vector3::Zero(), Vector3::Zero(), Frame::Body, true};
  CHECK_THROWS_AS(wrench_to_world_compensated(compensated, Pose::identity(),
                                              1.0, Vector3::Zero()),
                  std::invalid_argument);
  Wrench world_frame{Vector3::Zero(), Vector3::Zero(), Frame::World, false};
  CHECK_THROWS_AS(wrench_to_world_compensated(world_frame, Pose::identity(),
                                              1.0, Vector3::Zero()),
                  std::invalid_argument);
  Wrench raw{Vector3::Zero(), Vector3::Zero(), Frame::Body, false};
  CHECK_THROWS_AS(
      wrench_to_world_compensated(raw, Pose::identity(), -1.0, Vector3::Zero()),
      std::invalid_argument);
}

TEST_CASE("wrench_to_world_compensated is linear in the raw wrench") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  Pose pose(Vector3(0.2, 0.1, 0.5), random_unit_quaternion(rng));
  const double mass = 1.5;
  Vector3 com(0.02, -0.01, 0.04);

  Wrench a{Vector3(u(rng), u(rng), u(rng)), Vector3(u(rng), u(rng), u(rng)),
           Frame::Body, false};
  Wrench b{Vector3(u(rng), u(rng), u(rng)), Vector3(u(rng), u(rng), u(rng)),
           Frame::Body, false};
  Wrench sum{a.force + b.force, a.torque + b.torque, Frame::Body, false};

  Wrench fa = wrench_to_world_compensated(a, pose, mass, com);
  Wrench fb = wrench_to_world_compensated(b, pose, mass, com);
  Wrench fs = wrench_to_world_compensated(sum, pose, mass, com);
  Wrench zero{Vector3::Zero(), Vector3::Zero(), Frame::Body, false};
  Wrench f0 = wrench_to_world_compensated(zero, pose, mass, com);

  // f(a + b) - f(0) = (f(a) - f(0)) + (f(b) - f(0)): affine in the raw
  // wrench with the weight term as the constant offset.
  CHECK((fs.force - fa.force - fb.force + f0.force).norm() < 1e-9);
  CHECK((fs.torque - fa.torque - fb.torque + f0.torque).norm() < 1e-9);
}
