#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/oracles.hpp"
#include "vnav/clearance.hpp"
#include "vnav/lidar.hpp"
#include "vnav/world.hpp"

using namespace vnav;

namespace {

World one_box() {
  World w;
  w.boxes.push_back({{2, -1, 0}, {3, 1, 1}, false});
  return w;
}

}  // namespace

TEST_CASE("ray cast against a box") {
  const World w = one_box();
  CHECK(*w.ray_cast({0, 0, 0.5}, {1, 0, 0}, 20) == doctest::Approx(2.0));
  CHECK_FALSE(w.ray_cast({0, 0, 0.5}, {-1, 0, 0}, 20));
  CHECK_FALSE(w.ray_cast({0, 0, 0.5}, {1, 0, 0}, 1.5));
  CHECK_FALSE(w.ray_cast({2.5, 0, 0.5}, {1, 0, 0}, 20));  // starts inside
}

TEST_CASE("ray cast matches the face-plane oracle") {
  oracle::Rng rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec3 lo{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-1, 1)};
    const Box b{lo, lo + Vec3{rng.uniform(0.1, 2), rng.uniform(0.1, 2), rng.uniform(0.1, 2)}, false};
    World w;
    w.boxes.push_back(b);
    const Vec3 o{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-2, 2)};
    const double az = rng.uniform(-3.14, 3.14), el = rng.uniform(-1.2, 1.2);
    const Vec3 d{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};
    const auto got = w.ray_cast(o, d, 100);
    const auto ref = oracle::ray_box_faces(b, o, d);
    REQUIRE(got.has_value() == ref.has_value());
    if (got) CHECK(*got == doctest::Approx(*ref).epsilon(1e-9));
  }
}

TEST_CASE("ray cast against a prism") {
  World w;
  w.prisms.push_back({{{1, -1}, {3, -1}, {3, 1}, {1, 1}}, 0.0, 1.0, false});
  CHECK(*w.ray_cast({0, 0, 0.5}, {1, 0, 0}, 20) == doctest::Approx(1.0));
  CHECK_FALSE(w.ray_cast({0, 0, 1.5}, {1, 0, 0}, 20));
  const double s = std::sqrt(0.5);
  CHECK(*w.ray_cast({0, -2, 0.5}, {s, s, 0}, 20) == doctest::Approx(std::sqrt(2.0) * 1.0));
  // Same square as a box gives the same hits.
  World b;
  b.boxes.push_back({{1, -1, 0}, {3, 1, 1}, false});
  oracle::Rng rng(37);
  for (int k = 0; k < 500; ++k) {
    const Vec3 o{rng.uniform(-2, 0), rng.uniform(-3, 3), rng.uniform(-0.5, 1.5)};
    const double az = rng.uniform(-3.14, 3.14);
    const Vec3 d{std::cos(az), std::sin(az), 0.0};
    const auto p = w.ray_cast(o, d, 50), q = b.ray_cast(o, d, 50);
    REQUIRE(p.has_value() == q.has_value());
    if (p) CHECK(*p == doctest::Approx(*q).epsilon(1e-9));
  }
}

TEST_CASE("world validation") {
  World w;
  w.boxes.push_back({{0, 0, 0}, {0, 1, 1}, false});
  CHECK_THROWS(w.validate());
  World p;
  p.prisms.push_back({{{0, 0}, {0, 1}, {1, 0}}, 0, 1, false});  // clockwise
  CHECK_THROWS(p.validate());
}

TEST_CASE("footprint distance and containment") {
  const World w = one_box();
  CHECK(w.footprint_distance(0, 0, true) == doctest::Approx(2.0));
  CHECK(w.footprint_distance(2.5, 0, true) == 0.0);
  CHECK(w.contains({2.5, 0, 0.5}));
  CHECK_FALSE(w.contains({2.5, 0, 1.5}));
  World t;
  t.boxes.push_back({{2, -1, 0}, {3, 1, 1}, true});
  CHECK(std::isinf(t.footprint_distance(0, 0, false)));
}

TEST_CASE("lidar scan layout and ranges") {
  const World w = one_box();
  LidarSpec spec;
  spec.n_channels = 1;
  spec.rays_per_channel = 360;
  std::mt19937_64 rng(1);
  const PointCloud c = lidar_scan(PlanarPose({0, 0, 0.5}, 0.0), w, spec, rng);
  CHECK(c.frame == Frame::body);
  CHECK_FALSE(c.empty());
  double nearest = 1e9;
  for (const Vec3& p : c.points) {
    nearest = std::min(nearest, std::hypot(p.x, p.y));
    CHECK(p.z == doctest::Approx(0.0).scale(1.0));
  }
  CHECK(nearest == doctest::Approx(2.0));
  // Rotating the robot rotates the body-frame returns.
  std::mt19937_64 rng2(1);
  const PointCloud turned = lidar_scan(PlanarPose({0, 0, 0.5}, std::numbers::pi / 2), w, spec, rng2);
  for (const Vec3& p : turned.points) CHECK(p.y < 0.0);
}

TEST_CASE("lidar noise only consumes the rng when enabled") {
  const World w = one_box();
  LidarSpec spec;
  std::mt19937_64 a(5), b(5);
  lidar_scan(PlanarPose({0, 0, 0.5}, 0.0), w, spec, a);
  CHECK(a() == b());
  spec.noise_sigma = 0.01;
  std::mt19937_64 c(5), d(5);
  const auto p = lidar_scan(PlanarPose({0, 0, 0.5}, 0.0), w, spec, c);
  const auto q = lidar_scan(PlanarPose({0, 0, 0.5}, 0.0), w, spec, d);
  REQUIRE(p.size() == q.size());
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.points[i] == q.points[i]);
}

TEST_CASE("clearance equals the brute-force surface minimum") {
  oracle::Rng rng(41);
  const HyperEllipsoid e(0.8, 0.4, 0.4, 1);
  World w;
  w.boxes.push_back({{1.5, -0.5, 0}, {2.0, 0.5, 1}, false});
  w.prisms.push_back({{{-2, 1}, {-1, 1}, {-1.5, 2}}, 0.0, 0.8, true});
  const double pitch = 0.05;
  const auto samples = sample_surface(w, pitch);
  for (int k = 0; k < 30; ++k) {
    const PlanarPose pose({rng.uniform(-1, 0.5), rng.uniform(-0.5, 0.5), 0.4}, rng.uniform(-3, 3));
    double brute = oracle::kInf;
    for (const Vec3& s : samples) brute = std::min(brute, alpha_value(e, body_from_world(pose, s)));
    CHECK(true_clearance_alpha(pose, w, e, pitch) == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("clearance special cases") {
  const HyperEllipsoid e(0.8, 0.4, 0.4, 1);
  CHECK(std::isinf(true_clearance_alpha(PlanarPose{}, World{}, e)));
  CHECK(true_clearance_alpha(PlanarPose({2.5, 0, 0.5}, 0), one_box(), e) == 0.0);
  // Face 1.6 m ahead of the centre: alpha = (1.6 / 0.8)^2 = 4.
  World wall;
  wall.boxes.push_back({{1.6, -5, 0}, {2.0, 5, 1}, false});
  CHECK(true_clearance_alpha(PlanarPose({0, 0, 0.5}, 0), wall, e) == doctest::Approx(4.0));
}
