#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "vnav/geometry.hpp"
#include "vnav/vessel.hpp"

namespace vnav {

class WorkerPool;

/// Needle family: elongated higher-order ellipsoids rooted at the robot centre
/// that only grow along their own x axis.
struct NeedleConfig {
  double a_bar = 2.0;
  double b_bar = 0.8;
  double c_bar = 0.8;
  /// Even order of the needle cross-section.
  int d_bar = 2;
  std::size_t n_needle = 100;
  double s_min = 0.4;
  double s_max = 2.5;
  /// Explicit needle headings in [-pi, pi); empty selects the uniform
  /// distribution 2*pi*i/n - pi.
  std::vector<double> custom_angles;

  void validate() const;
};

struct NeedleResult {
  std::vector<double> angles;
  std::vector<double> scales;
  std::vector<bool> valid;
  std::optional<std::size_t> chosen_index;
  std::optional<Vec3> preview_target_body;
  /// Preview target replaced by the waypoint itself (its own needle reaches it).
  bool clipped_to_target = false;

  bool stuck() const { return !chosen_index.has_value(); }
};

std::vector<double> needle_angles(const NeedleConfig& config);

/// Scale of the needle pointing at theta against a body-frame cloud, clamped to s_max.
double needle_scale(const NeedleConfig& config, double theta, const PointCloud& cloud_body);

/// Body-frame tip of a needle of the given scale, R(theta) (2 s a_bar, 0, 0).
Vec3 needle_tip(const NeedleConfig& config, double theta, double scale);

/// Scales every needle against the cloud and picks the valid needle whose tip
/// is closest to target_body (smallest index on ties).
NeedleResult select_preview_target(const NeedleConfig& config, const PointCloud& cloud_body,
                                   const Vec3& target_body, WorkerPool* pool = nullptr);

}  // namespace vnav
