#include "vnav/geometry.hpp"

#include <algorithm>
#include <string>

namespace vnav {

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(a + std::numbers::pi, two_pi);
  if (w < 0.0) w += two_pi;
  w -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift for inputs just below -pi.
  if (w >= std::numbers::pi) w -= two_pi;
  return w;
}

HyperEllipsoid::HyperEllipsoid(double a, double b, double c, int order)
    : axes_{a, b, c}, order_(order) {
  for (double ax : axes_) {
    if (!(ax > 0.0) || !std::isfinite(ax)) {
      throw std::invalid_argument("HyperEllipsoid: semi-axes must be finite and > 0, got " +
                                  std::to_string(ax));
    }
  }
  if (order < 1) {
    throw std::invalid_argument("HyperEllipsoid: order must be >= 1, got " + std::to_string(order));
  }
}

double HyperEllipsoid::max_axis() const { return std::max({axes_[0], axes_[1], axes_[2]}); }

PlanarPose::PlanarPose(Vec3 position, double yaw)
    : r_(position), yaw_(wrap_angle(yaw)), c_(std::cos(yaw_)), s_(std::sin(yaw_)) {
  if (!position.finite() || !std::isfinite(yaw)) {
    throw std::invalid_argument("PlanarPose: position and yaw must be finite");
  }
}

std::array<double, 4> PlanarPose::quaternion() const {
  return {std::cos(0.5 * yaw_), 0.0, 0.0, std::sin(0.5 * yaw_)};
}

std::array<double, 4> PlanarPose::quaternion_yaw_derivative() const {
  return {-0.5 * std::sin(0.5 * yaw_), 0.0, 0.0, 0.5 * std::cos(0.5 * yaw_)};
}

double alpha_value(const HyperEllipsoid& e, const Vec3& p) {
  const int d = e.order();
  const double qx = p.x / e.a();
  const double qy = p.y / e.b();
  const double qz = p.z / e.c();
  return ipow(qx * qx, d) + ipow(qy * qy, d) + ipow(qz * qz, d);
}

double geometric_scale(const HyperEllipsoid& e, const Vec3& p) {
  const double alpha = alpha_value(e, p);
  if (e.order() == 1) return std::sqrt(alpha);
  return std::pow(alpha, 1.0 / (2.0 * e.order()));
}

Vec3 body_from_world(const PlanarPose& pose, const Vec3& p_world) {
  return rotate_z(p_world - pose.position(), pose.cos_yaw(), -pose.sin_yaw());
}

Vec3 world_from_body(const PlanarPose& pose, const Vec3& p_body) {
  return rotate_z(p_body, pose.cos_yaw(), pose.sin_yaw()) + pose.position();
}

}  // namespace vnav
