#include "vnav/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Entry/exit parameters of a ray against a slab lo <= o + t d <= hi.
bool clip_slab(double o, double d, double lo, double hi, double& t0, double& t1) {
  if (d == 0.0) return o >= lo && o <= hi;
  double ta = (lo - o) / d;
  double tb = (hi - o) / d;
  if (ta > tb) std::swap(ta, tb);
  t0 = std::max(t0, ta);
  t1 = std::min(t1, tb);
  return t0 <= t1;
}

std::optional<double> ray_box(const Box& b, const Vec3& o, const Vec3& d) {
  double t0 = -kInf;
  double t1 = kInf;
  if (!clip_slab(o.x, d.x, b.min.x, b.max.x, t0, t1)) return std::nullopt;
  if (!clip_slab(o.y, d.y, b.min.y, b.max.y, t0, t1)) return std::nullopt;
  if (!clip_slab(o.z, d.z, b.min.z, b.max.z, t0, t1)) return std::nullopt;
  if (t0 < 0.0) return std::nullopt;
  return t0;
}

std::optional<double> ray_prism(const Prism& p, const Vec3& o, const Vec3& d) {
  double t0 = -kInf;
  double t1 = kInf;
  if (!clip_slab(o.z, d.z, p.z_min, p.z_max, t0, t1)) return std::nullopt;
  const std::size_t n = p.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = p.vertices[i];
    const Vec2& b = p.vertices[(i + 1) % n];
    // Outward normal of a counter-clockwise edge.
    const double nx = b[1] - a[1];
    const double ny = a[0] - b[0];
    const double num = nx * (o.x - a[0]) + ny * (o.y - a[1]);  // > 0 outside
    const double den = nx * d.x + ny * d.y;
    if (den == 0.0) {
      if (num > 0.0) return std::nullopt;
      continue;
    }
    const double t = -num / den;
    if (den < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return std::nullopt;
  }
  if (t0 < 0.0) return std::nullopt;
  return t0;
}

double segment_distance(const Vec2& a, const Vec2& b, double x, double y) {
  const double ex = b[0] - a[0];
  const double ey = b[1] - a[1];
  const double len_sq = ex * ex + ey * ey;
  double t = len_sq > 0.0 ? ((x - a[0]) * ex + (y - a[1]) * ey) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(x - (a[0] + t * ex), y - (a[1] + t * ey));
}

}  // namespace

bool point_in_convex_polygon(const std::vector<Vec2>& poly, double x, double y) {
  const std::size_t n = poly.size();
  const Vec2 p{x, y};
  for (std::size_t i = 0; i < n; ++i) {
    if (cross2(poly[i], poly[(i + 1) % n], p) < 0.0) return false;
  }
  return n >= 3;
}

void World::validate() const {
  for (const Box& b : boxes) {
    if (!b.min.finite() || !b.max.finite() || !(b.min.x < b.max.x) || !(b.min.y < b.max.y) ||
        !(b.min.z < b.max.z)) {
      throw std::invalid_argument("box requires finite min < max on every axis");
    }
  }
  for (const Prism& p : prisms) {
    if (p.vertices.size() < 3) throw std::invalid_argument("prism needs at least 3 vertices");
    if (!(p.z_min < p.z_max)) throw std::invalid_argument("prism requires z_min < z_max");
    const std::size_t n = p.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!(cross2(p.vertices[i], p.vertices[(i + 1) % n], p.vertices[(i + 2) % n]) > 0.0)) {
        throw std::invalid_argument("prism polygon must be strictly convex and counter-clockwise");
      }
    }
  }
}

std::optional<double> World::ray_cast(const Vec3& origin, const Vec3& dir, double max_range) const {
  double best = kInf;
  for (const Box& b : boxes) {
    if (auto t = ray_box(b, origin, dir); t && *t < best) best = *t;
  }
  for (const Prism& p : prisms) {
    if (auto t = ray_prism(p, origin, dir); t && *t < best) best = *t;
  }
  if (best > max_range) return std::nullopt;
  return best;
}

bool World::contains(const Vec3& p) const {
  for (const Box& b : boxes) {
    if (p.x >= b.min.x && p.x <= b.max.x && p.y >= b.min.y && p.y <= b.max.y && p.z >= b.min.z &&
        p.z <= b.max.z) {
      return true;
    }
  }
  for (const Prism& pr : prisms) {
    if (p.z >= pr.z_min && p.z <= pr.z_max && point_in_convex_polygon(pr.vertices, p.x, p.y)) {
      return true;
    }
  }
  return false;
}

double World::footprint_distance(double x, double y, bool include_transient) const {
  double best = kInf;
  for (const Box& b : boxes) {
    if (b.transient && !include_transient) continue;
    const double dx = std::max({b.min.x - x, 0.0, x - b.max.x});
    const double dy = std::max({b.min.y - y, 0.0, y - b.max.y});
    best = std::min(best, std::hypot(dx, dy));
  }
  for (const Prism& p : prisms) {
    if (p.transient && !include_transient) continue;
    if (point_in_convex_polygon(p.vertices, x, y)) return 0.0;
    const std::size_t n = p.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      best = std::min(best, segment_distance(p.vertices[i], p.vertices[(i + 1) % n], x, y));
    }
  }
  return best;
}

std::vector<Face> World::faces() const {
  std::vector<Face> out;
  const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, ez{0, 0, 1};
  for (const Box& b : boxes) {
    const Vec3 size = b.max - b.min;
    for (double x : {b.min.x, b.max.x}) out.push_back({{x, b.min.y, b.min.z}, ey, ez, size.y, size.z, {}});
    for (double y : {b.min.y, b.max.y}) out.push_back({{b.min.x, y, b.min.z}, ex, ez, size.x, size.z, {}});
    for (double z : {b.min.z, b.max.z}) out.push_back({{b.min.x, b.min.y, z}, ex, ey, size.x, size.y, {}});
  }
  for (const Prism& p : prisms) {
    const std::size_t n = p.vertices.size();
    const double height = p.z_max - p.z_min;
    double lo_x = kInf, lo_y = kInf, hi_x = -kInf, hi_y = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = p.vertices[i];
      const Vec2& b = p.vertices[(i + 1) % n];
      const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
      out.push_back({{a[0], a[1], p.z_min}, {(b[0] - a[0]) / len, (b[1] - a[1]) / len, 0.0}, ez,
                     len, height, {}});
      lo_x = std::min(lo_x, a[0]);
      lo_y = std::min(lo_y, a[1]);
      hi_x = std::max(hi_x, a[0]);
      hi_y = std::max(hi_y, a[1]);
    }
    for (double z : {p.z_min, p.z_max}) {
      out.push_back({{lo_x, lo_y, z}, ex, ey, hi_x - lo_x, hi_y - lo_y, p.vertices});
    }
  }
  return out;
}

std::optional<std::array<double, 4>> World::planar_bounds(bool include_transient) const {
  std::array<double, 4> bb{kInf, kInf, -kInf, -kInf};
  bool any = false;
  auto grow = [&](double x, double y) {
    bb[0] = std::min(bb[0], x);
    bb[1] = std::min(bb[1], y);
    bb[2] = std::max(bb[2], x);
    bb[3] = std::max(bb[3], y);
    any = true;
  };
  for (const Box& b : boxes) {
    if (b.transient && !include_transient) continue;
    grow(b.min.x, b.min.y);
    grow(b.max.x, b.max.y);
  }
  for (const Prism& p : prisms) {
    if (p.transient && !include_transient) continue;
    for (const Vec2& v : p.vertices) grow(v[0], v[1]);
  }
  if (!any) return std::nullopt;
  return bb;
}

}  // namespace vnav
