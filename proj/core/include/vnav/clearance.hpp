#pragma once

#include <vector>

#include "vnav/geometry.hpp"
#include "vnav/world.hpp"

namespace vnav {

/// Default surface sampling pitch of the clearance oracle, metres.
inline constexpr double kClearancePitch = 0.01;

/// Surface samples of every face on a grid of at most `pitch` spacing
/// (both face edges included).
std::vector<Vec3> sample_surface(const World& world, double pitch = kClearancePitch);

/// Minimum alpha of the vessel at pose over the sampled surface of the world,
/// 0 when the vessel centre lies inside an obstacle and +inf for an empty
/// world. Values below 1 mean the unscaled vessel penetrates geometry.
///
/// Equal to the brute-force minimum over sample_surface(world, pitch); faces
/// and tiles whose body-frame bounding box cannot beat the running minimum are
/// skipped.
double true_clearance_alpha(const PlanarPose& pose, const World& world, const HyperEllipsoid& vessel,
                            double pitch = kClearancePitch);

}  // namespace vnav
