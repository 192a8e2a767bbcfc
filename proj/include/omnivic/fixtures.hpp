#pragma once

#include <string>
#include <vector>

#include "omnivic/controllers.hpp"

namespace omnivic::sim {

// Versioned desk-scale environments. The ramp constants were fixed by the
// calibration sweep described next to calibrated_ramp_env(); treat them as
// frozen fixtures, not tunables.

// Triangular bump (apex 0.16 m over a 0.12 m run on each face) crossed while
// holding a commanded height of 0.02 m. Calibrated such that the fixed-gain
// baseline (k = 150) presses into the uphill face hard enough to exceed the
// 30 N safety threshold for many consecutive steps, while a compliant
// contact-phase controller crosses with a wide force margin. Verified over
// the jitter ranges used by the evaluation suite.
EnvSpec calibrated_ramp_env();
TaskGoal calibrated_ramp_goal();
SafetyConfig ramp_safety();  // 10000-step budget (20 s)

// Sliding drawer closed by pressing its face through a 0.15 m travel.
EnvSpec drawer_env();
TaskGoal drawer_goal();
SafetyConfig drawer_safety();  // 5000-step budget (10 s)

// Free plate pushed 0.12 m across a table against Coulomb friction.
EnvSpec push_env();
TaskGoal push_goal();
SafetyConfig push_safety();  // 5000-step budget (10 s)

// Knowledge-base tasks for bank collection (nominal instructions).
std::vector<NamedEnv> knowledge_tasks();

// Evaluation suite: the same physical environments queried under reworded
// instructions, so retrieval has to bridge phrasings rather than string
// match.
std::vector<NamedEnv> evaluation_suite();

// Lookup by fixture name: calibrated_ramp, drawer, push, ramp_eval,
// drawer_eval. Throws std::invalid_argument for unknown names.
NamedEnv fixture_by_name(const std::string& name);

std::vector<std::string> fixture_names();

}  // namespace omnivic::sim
