#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "vnav/geometry.hpp"

namespace vnav {

using Vec2 = std::array<double, 2>;

/// Axis-aligned box. Transient obstacles exist in the simulated world but not
/// in the floor plan handed to the global planner.
struct Box {
  Vec3 min;
  Vec3 max;
  bool transient = false;
};

/// Convex polygon (counter-clockwise, x-y plane) extruded over [z_min, z_max].
struct Prism {
  std::vector<Vec2> vertices;
  double z_min = 0.0;
  double z_max = 1.0;
  bool transient = false;
};

/// Planar rectangle origin + i * u + j * v, i in [0, len_u], j in [0, len_v],
/// with u, v orthonormal. A non-empty polygon (world x-y) further restricts
/// the face to its interior; used for prism caps.
struct Face {
  Vec3 origin;
  Vec3 u;
  Vec3 v;
  double len_u = 0.0;
  double len_v = 0.0;
  std::vector<Vec2> polygon;

  Vec3 at(double su, double sv) const { return origin + u * su + v * sv; }
};

/// Static geometry of a simulated scene.
class World {
 public:
  std::vector<Box> boxes;
  std::vector<Prism> prisms;

  bool empty() const { return boxes.empty() && prisms.empty(); }

  /// Throws std::invalid_argument for degenerate boxes or non-convex /
  /// clockwise polygons.
  void validate() const;

  /// Distance along a unit direction to the first surface hit within
  /// max_range. Rays starting inside an obstacle report no hit.
  std::optional<double> ray_cast(const Vec3& origin, const Vec3& dir, double max_range) const;

  /// Whether p lies inside or on any obstacle.
  bool contains(const Vec3& p) const;

  /// Planar distance from (x, y) to the nearest obstacle footprint; 0 inside.
  double footprint_distance(double x, double y, bool include_transient) const;

  /// Boundary faces of every obstacle.
  std::vector<Face> faces() const;

  /// Planar bounding box (min x, min y, max x, max y) of all geometry.
  std::optional<std::array<double, 4>> planar_bounds(bool include_transient) const;
};

bool point_in_convex_polygon(const std::vector<Vec2>& poly, double x, double y);

}  // namespace vnav
