#include "vnav/clearance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vnav {

namespace {

struct FaceGrid {
  const Face* face;
  int nu;  // intervals along u
  int nv;
  double du;
  double dv;

  Vec3 node(int i, int j) const { return face->at(i * du, j * dv); }
  bool keep(const Vec3& p) const {
    return face->polygon.empty() || point_in_convex_polygon(face->polygon, p.x, p.y);
  }
};

FaceGrid make_grid(const Face& f, double pitch) {
  const int nu = std::max(1, static_cast<int>(std::ceil(f.len_u / pitch)));
  const int nv = std::max(1, static_cast<int>(std::ceil(f.len_v / pitch)));
  return {&f, nu, nv, f.len_u / nu, f.len_v / nv};
}

// Lower bound of alpha over the body-frame axis-aligned box [lo, hi]; alpha is
// separable, so the per-axis minima add up to the exact box minimum.
double alpha_lower_bound(const HyperEllipsoid& e, const Vec3& lo, const Vec3& hi) {
  auto axis_min = [](double l, double h) { return l <= 0.0 && h >= 0.0 ? 0.0 : std::min(std::abs(l), std::abs(h)); };
  return alpha_value(e, {axis_min(lo.x, hi.x), axis_min(lo.y, hi.y), axis_min(lo.z, hi.z)});
}

struct Search {
  const PlanarPose& pose;
  const HyperEllipsoid& vessel;
  double best = std::numeric_limits<double>::infinity();

  double tile_bound(const FaceGrid& g, int i0, int i1, int j0, int j1) const {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi = -lo;
    for (const Vec3& corner : {g.node(i0, j0), g.node(i1, j0), g.node(i0, j1), g.node(i1, j1)}) {
      const Vec3 p = body_from_world(pose, corner);
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    // Widen by a few ulps so rounding in the corner transform cannot cut off a node.
    const double pad = 1e-12 * (1.0 + std::max({std::abs(lo.x), std::abs(lo.y), std::abs(lo.z),
                                                std::abs(hi.x), std::abs(hi.y), std::abs(hi.z)}));
    return alpha_lower_bound(vessel, lo - Vec3{pad, pad, pad}, hi + Vec3{pad, pad, pad});
  }

  void visit(const FaceGrid& g, int i0, int i1, int j0, int j1) {
    if (tile_bound(g, i0, i1, j0, j1) >= best) return;
    if ((i1 - i0 + 1) * (j1 - j0 + 1) <= 16) {
      for (int i = i0; i <= i1; ++i) {
        for (int j = j0; j <= j1; ++j) {
          const Vec3 w = g.node(i, j);
          if (!g.keep(w)) continue;
          best = std::min(best, alpha_value(vessel, body_from_world(pose, w)));
        }
      }
      return;
    }
    if (i1 - i0 >= j1 - j0) {
      const int mid = i0 + (i1 - i0) / 2;
      visit(g, i0, mid, j0, j1);
      visit(g, mid + 1, i1, j0, j1);
    } else {
      const int mid = j0 + (j1 - j0) / 2;
      visit(g, i0, i1, j0, mid);
      visit(g, i0, i1, mid + 1, j1);
    }
  }
};

}  // namespace

std::vector<Vec3> sample_surface(const World& world, double pitch) {
  std::vector<Vec3> out;
  const std::vector<Face> faces = world.faces();
  for (const Face& f : faces) {
    const FaceGrid g = make_grid(f, pitch);
    for (int i = 0; i <= g.nu; ++i) {
      for (int j = 0; j <= g.nv; ++j) {
        const Vec3 w = g.node(i, j);
        if (g.keep(w)) out.push_back(w);
      }
    }
  }
  return out;
}

double true_clearance_alpha(const PlanarPose& pose, const World& world, const HyperEllipsoid& vessel,
                            double pitch) {
  if (world.contains(pose.position())) return 0.0;
  const std::vector<Face> faces = world.faces();
  std::vector<FaceGrid> grids;
  grids.reserve(faces.size());
  for (const Face& f : faces) grids.push_back(make_grid(f, pitch));

  Search search{pose, vessel};
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(grids.size());
  for (std::size_t k = 0; k < grids.size(); ++k) {
    order.emplace_back(search.tile_bound(grids[k], 0, grids[k].nu, 0, grids[k].nv), k);
  }
  std::sort(order.begin(), order.end());
  for (const auto& [bound, k] : order) {
    if (bound >= search.best) break;
    search.visit(grids[k], 0, grids[k].nu, 0, grids[k].nv);
  }
  return search.best;
}

}  // namespace vnav
