#include <doctest.h>

#include <cmath>
#include <random>

#include "omnivic/impedance.hpp"

using namespace omnivic;

TEST_CASE("expand_gains places translational and scaled rotational entries") {
  ImpedanceParams p;
  p.k_trans = Vector3(150, 150, 150);
  p.epsilon = 0.1;
  Gains6 g = expand_gains(p);
  CHECK(g.k[0] == doctest::Approx(150));
  CHECK(g.k[3] == doctest::Approx(15));
  CHECK(g.k[4] == doctest::Approx(15));
  CHECK(g.k[5] == doctest::Approx(15));

  p.k_trans = Vector3(100, 200, 300);
  p.epsilon = 1.0;
  g = expand_gains(p);
  CHECK(g.k[0] == doctest::Approx(100));
  CHECK(g.k[1] == doctest::Approx(200));
  CHECK(g.k[2] == doctest::Approx(300));
  CHECK(g.k[3] == doctest::Approx(100));  // unit epsilon copies the block
}

TEST_CASE("expand_gains rejects non-positive entries") {
  ImpedanceParams p;
  p.k_trans = Vector3(0, 150, 150);
  CHECK_THROWS_AS(expand_gains(p), std::invalid_argument);
  p.k_trans = Vector3(150, 150, 150);
  p.zeta = -0.1;
  CHECK_THROWS_AS(expand_gains(p), std::invalid_argument);
}

TEST_CASE("impedance_wrench evaluates the control law") {
  ImpedanceParams p = baseline_params();
  Vector6 pose_err = Vector6::Zero();
  Vector6 vel_err = Vector6::Zero();

  SUBCASE("equilibrium gives zero wrench") {
    Wrench w = impedance_wrench(p, pose_err, vel_err);
    CHECK(w.force.norm() == doctest::Approx(0.0));
    CHECK(w.torque.norm() == doctest::Approx(0.0));
  }

  SUBCASE("baseline gains on a 1 cm / 0.1 m/s error") {
    pose_err[0] = 0.01;
    vel_err[0] = 0.1;
    Wrench w = impedance_wrench(p, pose_err, vel_err);
    CHECK(w.force.x() == doctest::Approx(150 * 0.01 + 24.494 * 0.1));
    CHECK(w.force.x() == doctest::Approx(3.9494));
    CHECK(w.frame == Frame::World);
  }

  SUBCASE("doubling the pose error doubles the stiffness contribution") {
    pose_err[1] = 0.02;
    Wrench once = impedance_wrench(p, pose_err, vel_err);
    pose_err[1] = 0.04;
    Wrench twice = impedance_wrench(p, pose_err, vel_err);
    CHECK(twice.force.y() == doctest::Approx(2.0 * once.force.y()));
  }

  SUBCASE("non-finite input is rejected") {
    pose_err[2] = std::nan("");
    CHECK_THROWS_AS(impedance_wrench(p, pose_err, vel_err),
                    std::invalid_argument);
  }
}

TEST_CASE("impedance_wrench is linear in both errors") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  ImpedanceParams p;
  p.k_trans = Vector3(120, 260, 75);
  p.d_trans = Vector3(12, 31, 8);
  for (int i = 0; i < 100; ++i) {
    Vector6 pa, pb, va, vb;
    for (int j = 0; j < 6; ++j) {
      pa[j] = u(rng);
      pb[j] = u(rng);
      va[j] = u(rng);
      vb[j] = u(rng);
    }
    Wrench wa = impedance_wrench(p, pa, va);
    Wrench wb = impedance_wrench(p, pb, vb);
    Wrench ws = impedance_wrench(p, pa + pb, va + vb);
    CHECK((ws.force - wa.force - wb.force).norm() < 1e-9);
    CHECK((ws.torque - wa.torque - wb.torque).norm() < 1e-9);
  }
}

TEST_CASE("clamp_params projects componentwise and leaves scales alone") {
  ImpedanceRange range{300, 1000, 30, 60};
  ImpedanceParams p;
  p.k_trans = Vector3(2000, 500, 100);
  p.d_trans = Vector3(10, 45, 90);
  p.epsilon = 0.25;
  ImpedanceParams c = clamp_params(p, range);
  CHECK(c.k_trans.x() == doctest::Approx(1000));
  CHECK(c.k_trans.y() == doctest::Approx(500));
  CHECK(c.k_trans.z() == doctest::Approx(300));
  CHECK(c.d_trans.x() == doctest::Approx(30));
  CHECK(c.d_trans.y() == doctest::Approx(45));
  CHECK(c.d_trans.z() == doctest::Approx(60));
  CHECK(c.epsilon == doctest::Approx(0.25));

  // Idempotence and boundary closure.
  ImpedanceParams cc = clamp_params(c, range);
  CHECK((cc.k_trans - c.k_trans).norm() == doctest::Approx(0.0));
  ImpedanceParams at_bound;
  at_bound.k_trans = Vector3(300, 1000, 650);
  at_bound.d_trans = Vector3(30, 60, 45);
  ImpedanceParams cb = clamp_params(at_bound, range);
  CHECK((cb.k_trans - at_bound.k_trans).norm() == doctest::Approx(0.0));
  CHECK((cb.d_trans - at_bound.d_trans).norm() == doctest::Approx(0.0));
}

TEST_CASE("impedance range validation") {
  ImpedanceRange ok{50, 500, 5, 60};
  CHECK_NOTHROW(ok.validate());
  ImpedanceRange inverted{500, 50, 5, 60};
  CHECK_THROWS_AS(inverted.validate(), std::invalid_argument);
  ImpedanceRange zero_min{0, 500, 5, 60};
  CHECK_THROWS_AS(zero_min.validate(), std::invalid_argument);
}

TEST_CASE("baseline_params matches the reference gains") {
  ImpedanceParams p = baseline_params();
  CHECK(p.k_trans.x() == doctest::Approx(150));
  CHECK(p.k_trans.y() == doctest::Approx(150));
  CHECK(p.k_trans.z() == doctest::Approx(150));
  CHECK(p.d_trans.x() == doctest::Approx(24.494));
  CHECK(p.d_trans.x() == doctest::Approx(2.0 * std::sqrt(150.0)).epsilon(1e-3));
  Gains6 g = expand_gains(p);
  CHECK(g.k[3] == doctest::Approx(15));
}

TEST_CASE("damping_from_stiffness") {
  CHECK(damping_from_stiffness(1000) == doctest::Approx(44.71).epsilon(1e-3));
  CHECK(damping_from_stiffness(300) == doctest::Approx(24.49).epsilon(1e-3));
  CHECK(damping_from_stiffness(500) > damping_from_stiffness(50));
  CHECK_THROWS_AS(damping_from_stiffness(0), std::invalid_argument);
  CHECK_THROWS_AS(damping_from_stiffness(-10), std::invalid_argument);
}
