#pragma once

#include <cstdint>
#include <random>

#include "vnav/geometry.hpp"
#include "vnav/vessel.hpp"
#include "vnav/world.hpp"

namespace vnav {

/// Multi-channel spinning range sensor. Channels are spread evenly over the
/// vertical field of view (a single channel looks horizontally); rays within a
/// channel start at azimuth -pi and are evenly spaced.
struct LidarSpec {
  int n_channels = 16;
  int rays_per_channel = 360;
  double vertical_fov_deg = 30.0;
  double max_range = 20.0;
  double noise_sigma = 0.0;
  /// Sensor origin in the robot body frame.
  Vec3 mount{};

  void validate() const;
};

/// Body-frame point per ray that hits geometry within range. Gaussian range
/// noise draws from rng only when noise_sigma > 0.
PointCloud lidar_scan(const PlanarPose& pose, const World& world, const LidarSpec& spec,
                      std::mt19937_64& rng);

}  // namespace vnav
