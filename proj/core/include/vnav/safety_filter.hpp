#pragma once

#include <array>

#include "vnav/geometry.hpp"
#include "vnav/vessel.hpp"

namespace vnav {

/// Body-frame linear velocity and yaw rate, u = (v, omega).
struct ControlCommand {
  Vec3 v{};
  double omega = 0.0;

  std::array<double, 4> as_array() const { return {v.x, v.y, v.z, omega}; }
  static ControlCommand from_array(const std::array<double, 4>& u) {
    return {{u[0], u[1], u[2]}, u[3]};
  }
  double norm() const;
  bool operator==(const ControlCommand&) const = default;
};

struct FilterParams {
  /// Linear class-K rate: Gamma(h) = gamma_bar * h.
  double gamma_bar = 2.0;
  /// Diagonal of K_v.
  Vec3 k_v{1.0, 1.0, 1.0};
  double k_omega = 1.0;
  /// Below this planar target distance no heading correction is commanded.
  double heading_deadband = 0.05;
  double v_max = 0.6;
  double omega_max = 1.0;

  void validate() const;
};

enum class FilterStatus {
  no_constraint,  // empty cloud: u_ref passed through
  inactive,       // u_ref already satisfies the barrier condition
  projected,      // u_ref moved onto the constraint boundary
  infeasible,     // zero gradient with a violated condition; command is zero
};

struct FilterResult {
  ControlCommand command;
  FilterStatus status;
};

/// Proportional controller towards a body-frame target.
ControlCommand reference_control(const Vec3& target_body, const FilterParams& params);

/// Closed-form CBF-QP for x' = u:
///   min ||u - u_ref||^2  s.t.  a . u >= -gamma_bar * h,  a = grad4.
FilterResult filter_command(const ControlCommand& u_ref, const CbfEval& eval,
                            const FilterParams& params);

/// Same projection on raw constraint data, a . u >= bound.
FilterResult project_halfspace(const std::array<double, 4>& u_ref, const std::array<double, 4>& a,
                               double bound);

/// Scales u uniformly towards zero until |v| <= v_max and |omega| <= omega_max.
/// Uniform scaling keeps a . u >= -gamma_bar * h whenever h >= 0.
ControlCommand saturate(const ControlCommand& u, double v_max, double omega_max);

}  // namespace vnav
