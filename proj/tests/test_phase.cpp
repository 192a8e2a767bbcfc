#include <cmath>
#include <vector>

#include <doctest.h>

#include "omnivic/phase.hpp"

using namespace omnivic;

namespace {

Twist moving_twist(double speed) {
  Twist t;
  t.frame = Frame::World;
  t.linear = Vector3(speed, 0.0, 0.0);
  t.angular = Vector3::Zero();
  return t;
}

Wrench contact_wrench(double fz) {
  Wrench w;
  w.frame = Frame::World;
  w.gravity_compensated = true;
  w.force = Vector3(0.0, 0.0, fz);
  w.torque = Vector3::Zero();
  return w;
}

}  // namespace

TEST_CASE("force at or above the threshold labels Contact") {
  PhaseLabeler labeler;
  CHECK(labeler.label(moving_twist(0.0), contact_wrench(5.0)) == Phase::Contact);
  CHECK(labeler.label(moving_twist(0.0), contact_wrench(1.0)) == Phase::Contact);
  CHECK(labeler.label(moving_twist(0.0), contact_wrench(-1.0)) == Phase::Contact);
}

TEST_CASE("contact wins over motion") {
  PhaseLabeler labeler;
  CHECK(labeler.label(moving_twist(0.5), contact_wrench(3.0)) == Phase::Contact);
}

TEST_CASE("quiet samples label FreeMotion") {
  PhaseLabeler labeler;
  for (int i = 0; i < 20; ++i) {
    CHECK(labeler.label(moving_twist(0.0), contact_wrench(0.0)) ==
          Phase::FreeMotion);
  }
}

TEST_CASE("motion with no contact history labels Approaching") {
  PhaseLabeler labeler;
  CHECK(labeler.label(moving_twist(0.05), contact_wrench(0.0)) ==
        Phase::Approaching);
}

TEST_CASE("motion speed boundary is inclusive") {
  PhaseThresholds t;
  PhaseLabeler labeler(t);
  CHECK(labeler.label(moving_twist(t.motion_speed), contact_wrench(0.0)) ==
        Phase::Approaching);
  CHECK(labeler.label(moving_twist(0.9 * t.motion_speed), contact_wrench(0.0)) ==
        Phase::FreeMotion);
}

TEST_CASE("motion just after contact labels Retreat until the window expires") {
  PhaseThresholds t;  // approach_window = 5
  PhaseLabeler labeler(t);
  REQUIRE(labeler.label(moving_twist(0.0), contact_wrench(2.0)) ==
          Phase::Contact);
  for (int step = 1; step <= t.approach_window; ++step) {
    CHECK(labeler.label(moving_twist(0.05), contact_wrench(0.0)) ==
          Phase::Retreat);
  }
  // One step past the window the segment has reset: motion means a new
  // approach, not a back-off.
  CHECK(labeler.label(moving_twist(0.05), contact_wrench(0.0)) ==
        Phase::Approaching);
}

TEST_CASE("rest inside the retreat window still labels FreeMotion") {
  PhaseLabeler labeler;
  REQUIRE(labeler.label(moving_twist(0.0), contact_wrench(2.0)) ==
          Phase::Contact);
  CHECK(labeler.label(moving_twist(0.0), contact_wrench(0.0)) ==
        Phase::FreeMotion);
  CHECK(labeler.label(moving_twist(0.05), contact_wrench(0.0)) ==
        Phase::Retreat);
}

TEST_CASE("renewed contact restarts the retreat window") {
  PhaseThresholds t;
  PhaseLabeler labeler(t);
  REQUIRE(labeler.label(moving_twist(0.0), contact_wrench(2.0)) ==
          Phase::Contact);
  for (int i = 0; i < t.approach_window - 1; ++i) {
    labeler.label(moving_twist(0.05), contact_wrench(0.0));
  }
  REQUIRE(labeler.label(moving_twist(0.0), contact_wrench(2.0)) ==
          Phase::Contact);
  for (int step = 1; step <= t.approach_window; ++step) {
    CHECK(labeler.label(moving_twist(0.05), contact_wrench(0.0)) ==
          Phase::Retreat);
  }
  CHECK(labeler.label(moving_twist(0.05), contact_wrench(0.0)) ==
        Phase::Approaching);
}

TEST_CASE("reset forgets contact history") {
  PhaseLabeler labeler;
  REQUIRE(labeler.label(moving_twist(0.0), contact_wrench(2.0)) ==
          Phase::Contact);
  labeler.reset();
  CHECK(labeler.label(moving_twist(0.05), contact_wrench(0.0)) ==
        Phase::Approaching);
}

TEST_CASE("identical streams produce identical labels") {
  std::vector<std::pair<double, double>> stream = {
      {0.0, 0.0}, {0.05, 0.0}, {0.02, 3.0}, {0.05, 0.0}, {0.0, 0.0},
      {0.05, 0.0}, {0.05, 0.0}, {0.05, 0.0}, {0.05, 0.0}, {0.05, 0.0},
  };
  PhaseLabeler a, b;
  for (const auto& [speed, fz] : stream) {
    CHECK(a.label(moving_twist(speed), contact_wrench(fz)) ==
          b.label(moving_twist(speed), contact_wrench(fz)));
  }
}

TEST_CASE("threshold validation") {
  PhaseThresholds t;
  t.contact_force_n = 0.0;
  CHECK_THROWS_AS(PhaseLabeler{t}, std::invalid_argument);
  t = PhaseThresholds{};
  t.motion_speed = -0.1;
  CHECK_THROWS_AS(PhaseLabeler{t}, std::invalid_argument);
  t = PhaseThresholds{};
  t.approach_window = 0;
  CHECK_THROWS_AS(PhaseLabeler{t}, std::invalid_argument);
}

TEST_CASE("labeler rejects wrong-frame or raw inputs") {
  PhaseLabeler labeler;
  Twist body = moving_twist(0.05);
  body.frame = Frame::Body;
  CHECK_THROWS_AS(labeler.label(body, contact_wrench(0.0)),
                  std::invalid_argument);

  Wrench raw = contact_wrench(0.0);
  raw.gravity_compensated = false;
  CHECK_THROWS_AS(labeler.label(moving_twist(0.0), raw), std::invalid_argument);

  Wrench nan_wrench = contact_wrench(0.0);
  nan_wrench.force[1] = std::nan("");
  CHECK_THROWS_AS(labeler.label(moving_twist(0.0), nan_wrench),
                  std::invalid_argument);
}
