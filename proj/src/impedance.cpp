#include "omnivic/impedance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace omnivic {

void ImpedanceRange::validate() const {
  const bool ok = std::isfinite(k_min) && std::isfinite(k_max) &&
                  std::isfinite(d_min) && std::isfinite(d_max) &&
                  k_min > 0.0 && k_min < k_max && d_min > 0.0 && d_min < d_max;
  if (!ok) {
    throw std::invalid_argument("ImpedanceRange: require 0 < min < max");
  }
}

Gains6 expand_gains(const ImpedanceParams& params) {
  if (!params.k_trans.allFinite() || !params.d_trans.allFinite() ||
      !std::isfinite(params.epsilon) || !std::isfinite(params.zeta)) {
    throw std::invalid_argument("expand_gains: non-finite parameter");
  }
  if ((params.k_trans.array() <= 0.0).any() ||
      (params.d_trans.array() <= 0.0).any() || params.epsilon <= 0.0 ||
      params.zeta <= 0.0) {
    throw std::invalid_argument("expand_gains: gains must be positive");
  }
  Gains6 g;
  g.k.head<3>() = params.k_trans;
  g.k.tail<3>() = params.epsilon * params.k_trans;
  g.d.head<3>() = params.d_trans;
  g.d.tail<3>() = params.zeta * params.d_trans;
  return g;
}

Wrench impedance_wrench(const ImpedanceParams& params, const Vector6& pose_err,
                        const Vector6& vel_err) {
  if (!pose_err.allFinite() || !vel_err.allFinite()) {
    throw std::invalid_argument("impedance_wrench: non-finite error input");
  }
  const Gains6 g = expand_gains(params);
  const Vector6 f = g.d.cwiseProduct(vel_err) + g.k.cwiseProduct(pose_err);
  Wrench out;
  out.force = f.head<3>();
  out.torque = f.tail<3>();
  out.frame = Frame::World;
  out.gravity_compensated = true;
  return out;
}

ImpedanceParams clamp_params(const ImpedanceParams& params,
                             const ImpedanceRange& range) {
  range.validate();
  ImpedanceParams out = params;
  for (int i = 0; i < 3; ++i) {
    out.k_trans[i] = std::clamp(params.k_trans[i], range.k_min, range.k_max);
    out.d_trans[i] = std::clamp(params.d_trans[i], range.d_min, range.d_max);
  }
  return out;
}

ImpedanceParams baseline_params() {
  ImpedanceParams p;
  p.k_trans.setConstant(150.0);
  p.d_trans.setConstant(24.494);
  return p;
}

double damping_from_stiffness(double k) {
  if (!std::isfinite(k) || k <= 0.0) {
    throw std::invalid_argument("damping_from_stiffness: k must be positive");
  }
  return 2.0 * 0.707 * std::sqrt(k);
}

}  // namespace omnivic
