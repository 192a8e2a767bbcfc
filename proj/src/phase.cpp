#include "omnivic/phase.hpp"

#include <limits>
#include <stdexcept>

namespace omnivic {

namespace {
// "No contact seen yet" marker; far beyond any real window.
constexpr long kNever = std::numeric_limits<long>::max() / 2;
}  // namespace

void PhaseThresholds::validate() const {
  if (!(contact_force_n > 0.0) || !(motion_speed > 0.0) ||
      approach_window < 1) {
    throw std::invalid_argument("PhaseThresholds: all thresholds must be positive");
  }
}

PhaseLabeler::PhaseLabeler(PhaseThresholds thresholds)
    : thresholds_(thresholds), steps_since_contact_(kNever) {
  thresholds_.validate();
}

void PhaseLabeler::reset() { steps_since_contact_ = kNever; }

Phase PhaseLabeler::label(const Twist& twist, const Wrench& wrench) {
  if (twist.frame != Frame::World || !is_finite(twist)) {
    throw std::invalid_argument("PhaseLabeler: twist must be finite world-frame");
  }
  if (wrench.frame != Frame::World || !wrench.gravity_compensated ||
      !is_finite(wrench)) {
    throw std::invalid_argument(
        "PhaseLabeler: wrench must be finite, world-frame, compensated");
  }

  if (wrench.force.norm() >= thresholds_.contact_force_n) {
    steps_since_contact_ = 0;
    return Phase::Contact;
  }
  if (steps_since_contact_ < kNever) {
    ++steps_since_contact_;
  }
  const bool moving = twist.linear.norm() >= thresholds_.motion_speed;
  if (steps_since_contact_ <= thresholds_.approach_window) {
    return moving ? Phase::Retreat : Phase::FreeMotion;
  }
  return moving ? Phase::Approaching : Phase::FreeMotion;
}

}  // namespace omnivic
