#pragma once

#include "omnivic/geometry.hpp"

namespace omnivic {

// Norm below which a vector counts as zero for similarity purposes. A zero
// vector has no direction, so any cosine involving one is defined as 0.
inline constexpr double kZeroNormEps = 1e-12;

// cos(a, b) = a.b / (|a| |b|), clamped into [-1, 1]. Either operand with
// norm below kZeroNormEps yields 0. Throws on dimension mismatch.
double cosine_sim(const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b);

// The four per-channel cosines used to compare interaction states.
struct SignalScores {
  double force_sim{0.0};
  double torque_sim{0.0};
  double linvel_sim{0.0};
  double angvel_sim{0.0};

  double aggregate() const {
    return force_sim + torque_sim + linvel_sim + angvel_sim;
  }
};

// Channel-wise cosines between two interaction states. Both twists must be
// world-frame and both wrenches world-frame and gravity-compensated.
SignalScores signal_scores(const Twist& a_twist, const Wrench& a_wrench,
                           const Twist& b_twist, const Wrench& b_wrench);

}  // namespace omnivic
