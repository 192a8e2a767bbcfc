#pragma once

#include "omnivic/geometry.hpp"

namespace omnivic {

// Translational gains plus the scale factors that derive the rotational
// block. The full 6x6 stiffness is diag{Kx, Ky, Kz, e*Kx, e*Ky, e*Kz} and
// damping is built the same way from zeta.
struct ImpedanceParams {
  Vector3 k_trans{150.0, 150.0, 150.0};
  Vector3 d_trans{24.494, 24.494, 24.494};
  double epsilon{0.1};
  double zeta{0.1};
};

struct ImpedanceRange {
  double k_min{50.0};
  double k_max{500.0};
  double d_min{5.0};
  double d_max{60.0};

  void validate() const;  // throws unless 0 < min < max on both axes
};

struct Gains6 {
  Vector6 k;  // diagonal entries of the 6x6 stiffness
  Vector6 d;  // diagonal entries of the 6x6 damping
};

// Expands translational gains into the diagonal entries of the full
// matrices. Throws on non-positive gains or scale factors.
Gains6 expand_gains(const ImpedanceParams& params);

// Restoring wrench D*ve + K*pe for diagonal gains, world frame. pose_err and
// vel_err stack translation before rotation. Throws on non-finite input.
Wrench impedance_wrench(const ImpedanceParams& params, const Vector6& pose_err,
                        const Vector6& vel_err);

// Componentwise projection of k_trans/d_trans into the range. epsilon and
// zeta pass through untouched.
ImpedanceParams clamp_params(const ImpedanceParams& params,
                             const ImpedanceRange& range);

// Fixed reference gains: k = 150 N/m with d = 2*sqrt(k) = 24.494 on every
// translational axis.
ImpedanceParams baseline_params();

// d = 2 * 0.707 * sqrt(k). Throws for k <= 0.
double damping_from_stiffness(double k);

}  // namespace omnivic
