#include "vnav/safety_filter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vnav {

double ControlCommand::norm() const { return std::sqrt(dot(v, v) + omega * omega); }

void FilterParams::validate() const {
  if (!(gamma_bar > 0.0)) throw std::invalid_argument("gamma_bar must be > 0");
  if (!(k_v.x > 0.0 && k_v.y > 0.0 && k_v.z > 0.0)) {
    throw std::invalid_argument("k_v entries must be > 0");
  }
  if (!(k_omega > 0.0)) throw std::invalid_argument("k_omega must be > 0");
  if (!(heading_deadband >= 0.0)) throw std::invalid_argument("heading_deadband must be >= 0");
  if (!(v_max > 0.0) || !(omega_max > 0.0)) {
    throw std::invalid_argument("v_max and omega_max must be > 0");
  }
}

ControlCommand reference_control(const Vec3& target_body, const FilterParams& params) {
  ControlCommand u;
  u.v = {params.k_v.x * target_body.x, params.k_v.y * target_body.y,
         params.k_v.z * target_body.z};
  if (std::hypot(target_body.x, target_body.y) >= params.heading_deadband) {
    u.omega = params.k_omega * std::atan2(target_body.y, target_body.x);
  }
  return u;
}

FilterResult project_halfspace(const std::array<double, 4>& u_ref, const std::array<double, 4>& a,
                               double bound) {
  double au = 0.0;
  double aa = 0.0;
  for (int i = 0; i < 4; ++i) {
    au += a[i] * u_ref[i];
    aa += a[i] * a[i];
  }
  if (au >= bound) return {ControlCommand::from_array(u_ref), FilterStatus::inactive};
  if (aa == 0.0) return {ControlCommand{}, FilterStatus::infeasible};
  const double lambda = (bound - au) / aa;
  std::array<double, 4> u{};
  for (int i = 0; i < 4; ++i) u[i] = u_ref[i] + lambda * a[i];
  return {ControlCommand::from_array(u), FilterStatus::projected};
}

FilterResult filter_command(const ControlCommand& u_ref, const CbfEval& eval,
                            const FilterParams& params) {
  if (!eval.has_constraint()) return {u_ref, FilterStatus::no_constraint};
  return project_halfspace(u_ref.as_array(), eval.grad4, -params.gamma_bar * eval.h);
}

ControlCommand saturate(const ControlCommand& u, double v_max, double omega_max) {
  double k = 1.0;
  const double speed = u.v.norm();
  if (speed > v_max) k = std::min(k, v_max / speed);
  if (std::abs(u.omega) > omega_max) k = std::min(k, omega_max / std::abs(u.omega));
  if (k == 1.0) return u;
  return {u.v * k, u.omega * k};
}

}  // namespace vnav
