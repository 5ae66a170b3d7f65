#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vnav {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr bool operator==(const Vec3&) const = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

/// x^n for small non-negative integer n, by repeated squaring.
constexpr double ipow(double x, int n) {
  double result = 1.0;
  while (n > 0) {
    if (n & 1) result *= x;
    x *= x;
    n >>= 1;
  }
  return result;
}

/// Wraps an angle to [-pi, pi).
double wrap_angle(double a);

/// Axis-aligned higher-order ellipsoid sum_i (p_i / axis_i)^(2d) <= 1.
///
/// Order 1 is the ordinary ellipsoid p^T P p <= 1 with P = diag(1/a^2, 1/b^2, 1/c^2).
/// Larger orders flatten the sides towards a box.
class HyperEllipsoid {
 public:
  HyperEllipsoid(double a, double b, double c, int order);

  double a() const { return axes_[0]; }
  double b() const { return axes_[1]; }
  double c() const { return axes_[2]; }
  int order() const { return order_; }
  const std::array<double, 3>& axes() const { return axes_; }
  double max_axis() const;

 private:
  std::array<double, 3> axes_;
  int order_;
};

/// Position plus heading about world z.
class PlanarPose {
 public:
  PlanarPose() = default;
  PlanarPose(Vec3 position, double yaw);

  const Vec3& position() const { return r_; }
  double yaw() const { return yaw_; }
  double cos_yaw() const { return c_; }
  double sin_yaw() const { return s_; }

  /// Unit quaternion (w, x, y, z) of the yaw rotation.
  std::array<double, 4> quaternion() const;
  /// d quaternion / d yaw.
  std::array<double, 4> quaternion_yaw_derivative() const;

 private:
  Vec3 r_{};
  double yaw_ = 0.0;
  double c_ = 1.0;
  double s_ = 0.0;
};

/// Rotates v about +z by the angle whose cosine and sine are given.
constexpr Vec3 rotate_z(const Vec3& v, double c, double s) {
  return {c * v.x - s * v.y, s * v.x + c * v.y, v.z};
}

/// Uniform-scaling value alpha = sum_i p_i^(2d) / axis_i^(2d); p in the body frame.
/// alpha >= 1 means p is outside (or on) the unscaled body.
double alpha_value(const HyperEllipsoid& e, const Vec3& p);

/// Scale s >= 0 at which the boundary of s * E passes through p, i.e. alpha^(1/(2d)).
double geometric_scale(const HyperEllipsoid& e, const Vec3& p);

Vec3 body_from_world(const PlanarPose& pose, const Vec3& p_world);
Vec3 world_from_body(const PlanarPose& pose, const Vec3& p_body);

}  // namespace vnav
