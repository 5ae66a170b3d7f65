#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "vnav/geometry.hpp"

namespace vnav {

class WorkerPool;

enum class Frame { body, world };

struct PointCloud {
  std::vector<Vec3> points;
  Frame frame = Frame::body;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Keeps only points whose body-frame z lies in [lo, hi]; used to drop floor returns.
struct ZCrop {
  double lo = -0.15;
  double hi = 1.0;
};

struct VesselParams {
  double beta = 1.2;
  double delta = 0.01;
  /// Largest cloud the configuration is certified for.
  std::size_t n_max = 65536;
  std::optional<ZCrop> z_crop = ZCrop{};

  /// Throws std::invalid_argument unless beta >= 1 + delta * ln(n_max), delta > 0
  /// and the crop interval is ordered. The coupling makes h >= 0 imply that no
  /// point of a cloud of at most n_max points is inside the unscaled vessel.
  void validate() const;
  /// 1 + delta * ln(n_max)
  double min_safe_beta() const;
};

/// Gradient layout: (r_x, r_y, r_z, q_w, q_x, q_y, q_z).
using Grad7 = std::array<double, 7>;
/// Gradient layout: (r_x, r_y, r_z, yaw).
using Grad4 = std::array<double, 4>;

struct PointBarrier {
  double h = 0.0;
  Grad7 grad7{};
};

struct CbfEval {
  /// Softmin barrier; +inf when no point constrains the robot.
  double h = std::numeric_limits<double>::infinity();
  double h_min = std::numeric_limits<double>::infinity();
  /// Index into the input cloud of the (first) minimizing point.
  std::size_t argmin_index = 0;
  /// Points that entered the softmin (after cropping).
  std::size_t n_points = 0;
  Grad7 grad7{};
  Grad4 grad4{};

  bool has_constraint() const { return n_points > 0; }
};

/// Barrier h_j = alpha(E, p_body) - beta of one world-frame point, with its
/// closed-form gradient in (r, q).
PointBarrier per_point_h(const HyperEllipsoid& e, const PlanarPose& pose, const Vec3& p_world,
                         double beta);

/// min + (-delta * ln(1/N sum exp(-(v_j - min) / delta))).
/// Never overflows; returns nullopt for an empty input.
std::optional<double> softmin_stable(std::span<const double> values, double delta);

/// Softmin point-cloud barrier and its pose gradient.
///
/// Body-frame clouds are taken relative to pose. Work is split into fixed
/// chunks whose partial sums are combined in chunk order, so the result does
/// not depend on the pool size. An empty (or fully cropped) cloud returns the
/// no-constraint sentinel.
CbfEval evaluate_cbf(const HyperEllipsoid& e, const PlanarPose& pose, const PointCloud& cloud,
                     const VesselParams& params, WorkerPool* pool = nullptr);

/// grad4 from grad7 through q(yaw).
Grad4 reduce_to_yaw(const Grad7& g, const PlanarPose& pose);

}  // namespace vnav
