#pragma once

#include "omnivic/bank.hpp"
#include "omnivic/geometry.hpp"

namespace omnivic {

struct PhaseThresholds {
  double contact_force_n{1.0};
  double motion_speed{0.005};  // m/s
  int approach_window{5};      // steps after contact that still count as retreat

  void validate() const;  // throws unless all strictly positive
};

// Rule-based interaction phase labeler. Feed it one (twist, wrench) sample
// per control step; it keeps just enough history to tell "backing off from a
// contact" apart from "approaching a new one". One labeler per episode; call
// reset() between episodes.
class PhaseLabeler {
 public:
  explicit PhaseLabeler(PhaseThresholds thresholds = {});

  // twist must be world-frame; wrench world-frame and compensated.
  // Contact wins when the force magnitude reaches the threshold. Otherwise
  // motion within approach_window steps of the last contact labels Retreat,
  // motion outside that window labels Approaching (the segment has reset),
  // and rest labels FreeMotion.
  Phase label(const Twist& twist, const Wrench& wrench);

  void reset();
  const PhaseThresholds& thresholds() const { return thresholds_; }

 private:
  PhaseThresholds thresholds_;
  long steps_since_contact_;
};

}  // namespace omnivic
