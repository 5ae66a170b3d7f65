#include "vnav/lidar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace vnav {

void LidarSpec::validate() const {
  if (n_channels < 1 || rays_per_channel < 1) {
    throw std::invalid_argument("lidar channel and ray counts must be >= 1");
  }
  if (!(vertical_fov_deg >= 0.0 && vertical_fov_deg < 180.0)) {
    throw std::invalid_argument("lidar vertical_fov_deg must be in [0, 180)");
  }
  if (!(max_range > 0.0)) throw std::invalid_argument("lidar max_range must be > 0");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("lidar noise_sigma must be >= 0");
}

PointCloud lidar_scan(const PlanarPose& pose, const World& world, const LidarSpec& spec,
                      std::mt19937_64& rng) {
  PointCloud cloud;
  cloud.frame = Frame::body;
  if (world.empty()) return cloud;

  std::vector<double> elevations(spec.n_channels, 0.0);
  if (spec.n_channels > 1) {
    const double fov = spec.vertical_fov_deg * std::numbers::pi / 180.0;
    for (int k = 0; k < spec.n_channels; ++k) {
      elevations[k] = -0.5 * fov + fov * k / (spec.n_channels - 1);
    }
  }
  std::vector<double> az_cos(spec.rays_per_channel), az_sin(spec.rays_per_channel);
  for (int k = 0; k < spec.rays_per_channel; ++k) {
    const double az = -std::numbers::pi + 2.0 * std::numbers::pi * k / spec.rays_per_channel;
    az_cos[k] = std::cos(az);
    az_sin[k] = std::sin(az);
  }

  std::normal_distribution<double> noise(0.0, spec.noise_sigma > 0.0 ? spec.noise_sigma : 1.0);
  const Vec3 origin = world_from_body(pose, spec.mount);
  cloud.points.reserve(static_cast<std::size_t>(spec.n_channels) * spec.rays_per_channel / 4);
  for (double el : elevations) {
    const double ce = std::cos(el);
    const double se = std::sin(el);
    for (int k = 0; k < spec.rays_per_channel; ++k) {
      const Vec3 dir_body{ce * az_cos[k], ce * az_sin[k], se};
      const Vec3 dir_world = rotate_z(dir_body, pose.cos_yaw(), pose.sin_yaw());
      const auto range = world.ray_cast(origin, dir_world, spec.max_range);
      if (!range) continue;
      double r = *range;
      if (spec.noise_sigma > 0.0) r = std::max(0.0, r + noise(rng));
      cloud.points.push_back(spec.mount + dir_body * r);
    }
  }
  return cloud;
}

}  // namespace vnav
