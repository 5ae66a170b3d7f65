#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "vnav/geometry.hpp"
#include "vnav/global_plan.hpp"
#include "vnav/lidar.hpp"
#include "vnav/mariner.hpp"
#include "vnav/safety_filter.hpp"
#include "vnav/vessel.hpp"
#include "vnav/world.hpp"

namespace vnav {

/// Invalid scenario content; what() names the offending field (and line for
/// syntax errors).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Update rates: sensor-rate barrier filtering, slower needle preview, and
/// the integration step. Both periods must be whole multiples of sim_dt.
struct Rates {
  double sensor_hz = 10.0;
  double mariner_hz = 2.0;
  double sim_dt = 0.01;

  int sensor_period_ticks() const;
  int mariner_period_ticks() const;
};

struct PlannerSettings {
  double resolution = 0.1;
  /// Defaults to the vessel's largest semi-axis.
  std::optional<double> inflation_radius;
  double advance_radius = 0.5;
  /// Defaults to the static geometry, start and goal grown by bounds_margin.
  std::optional<GridBounds> bounds;
  double bounds_margin = 2.0;
  /// Optional plain-text floor plan used instead of rasterizing the world.
  std::optional<std::filesystem::path> map_file;
};

struct Termination {
  double goal_tolerance = 0.2;
  double stuck_speed = 1e-3;
  double stuck_time = 5.0;
};

struct Scenario {
  std::string name = "scenario";
  std::string description;
  World world;
  PlanarPose start{{0.0, 0.0, 0.4}, 0.0};
  /// Planar goal; its z is forced to the start height.
  Vec3 goal{};
  HyperEllipsoid vessel{0.8, 0.4, 0.4, 1};
  VesselParams vessel_params;
  NeedleConfig needles;
  FilterParams filter;
  LidarSpec sensor;
  Rates rates;
  PlannerSettings planner;
  Termination termination;
  double duration_s = 60.0;
  std::uint64_t seed = 1;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

/// Parses scenario JSON; relative map_file paths resolve against base_dir.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace vnav
