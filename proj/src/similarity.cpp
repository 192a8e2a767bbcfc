#include "omnivic/similarity.hpp"

#include <algorithm>
#include <stdexcept>

namespace omnivic {

double cosine_sim(const Eigen::Ref<const Eigen::VectorXd>& a,
                  const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine_sim: dimension mismatch");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na < kZeroNormEps || nb < kZeroNormEps) {
    return 0.0;
  }
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

SignalScores signal_scores(const Twist& a_twist, const Wrench& a_wrench,
                           const Twist& b_twist, const Wrench& b_wrench) {
  if (a_twist.frame != Frame::World || b_twist.frame != Frame::World) {
    throw std::invalid_argument("signal_scores: twists must be world-frame");
  }
  if (a_wrench.frame != Frame::World || b_wrench.frame != Frame::World ||
      !a_wrench.gravity_compensated || !b_wrench.gravity_compensated) {
    throw std::invalid_argument(
        "signal_scores: wrenches must be world-frame and compensated");
  }
  SignalScores s;
  s.force_sim = cosine_sim(a_wrench.force, b_wrench.force);
  s.torque_sim = cosine_sim(a_wrench.torque, b_wrench.torque);
  s.linvel_sim = cosine_sim(a_twist.linear, b_twist.linear);
  s.angvel_sim = cosine_sim(a_twist.angular, b_twist.angular);
  return s;
}

}  // namespace omnivic
