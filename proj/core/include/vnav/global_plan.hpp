#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnav/geometry.hpp"
#include "vnav/world.hpp"

namespace vnav {

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

/// Planar occupancy grid; cell (0, 0) has its lower-left corner at origin.
class OccupancyGrid {
 public:
  OccupancyGrid(double resolution, Vec3 origin, int width, int height);

  double resolution() const { return resolution_; }
  const Vec3& origin() const { return origin_; }
  int width() const { return width_; }
  int height() const { return height_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  /// Out-of-bounds cells count as occupied.
  bool occupied(Cell c) const { return !in_bounds(c) || cells_[index(c)] != 0; }
  void set_occupied(Cell c, bool occ) { cells_[index(c)] = occ ? 1 : 0; }
  std::size_t occupied_count() const;

  Vec3 center(Cell c) const;
  Cell cell_of(const Vec3& p) const;

  bool operator==(const OccupancyGrid&) const = default;

 private:
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }

  double resolution_;
  Vec3 origin_;
  int width_;
  int height_;
  std::vector<std::uint8_t> cells_;
};

/// Planar region covered by a grid.
struct GridBounds {
  double min_x, min_y, max_x, max_y;
};

/// Marks every cell whose centre is within inflation_radius of a static
/// (non-transient) obstacle footprint.
OccupancyGrid rasterize(const World& world, double resolution, double inflation_radius,
                        const GridBounds& bounds);

/// Plain-text map: a header line `resolution <r> origin <x> <y>` followed by
/// one row per line, top row (largest y) first, '#' occupied and '.' free.
void write_grid_text(std::ostream& out, const OccupancyGrid& grid);
OccupancyGrid read_grid_text(std::istream& in);

class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cost of an 8-connected grid path as exact move counts.
struct GridCost {
  long straight = 0;
  long diagonal = 0;

  double cells() const;
  bool operator==(const GridCost&) const = default;
};

struct WaypointPath {
  /// Waypoints after the start; the last one is the goal.
  std::vector<Vec3> waypoints;
  double advance_radius = 0.5;
  /// Raw optimal grid path, start cell to goal cell.
  std::vector<Cell> cells;
  GridCost cost;
};

/// Cost of one 8-connected move between neighbours; diagonal moves may not cut
/// an occupied corner.
bool grid_move_allowed(const OccupancyGrid& grid, Cell from, Cell to);

/// A* over the 8-connected grid (no corner cutting), then line-of-sight string
/// pulling. Throws NoPathError when start or goal is blocked or unreachable.
WaypointPath plan_path(const OccupancyGrid& grid, const Vec3& start, const Vec3& goal,
                       double advance_radius = 0.5);

/// Whether every cell touched by the segment a-b is free.
bool line_of_sight(const OccupancyGrid& grid, const Vec3& a, const Vec3& b);

/// Follows a waypoint path, advancing past waypoint k once the robot is within
/// advance_radius of it. The goal is never abandoned and the index never
/// decreases.
class WaypointTracker {
 public:
  explicit WaypointTracker(WaypointPath path);

  /// Advances as needed and returns the active waypoint in the body frame of pose.
  Vec3 update(const PlanarPose& pose);

  std::size_t active_index() const { return index_; }
  const Vec3& active_world() const { return path_.waypoints[index_]; }
  const WaypointPath& path() const { return path_; }

 private:
  WaypointPath path_;
  std::size_t index_ = 0;
};

}  // namespace vnav
