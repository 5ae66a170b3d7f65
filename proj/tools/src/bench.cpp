#include <algorithm>
#include <chrono>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>
#include <ostream>
#include <random>
#include <vector>

#include "commands.hpp"
#include "vnav/mariner.hpp"
#include "vnav/vessel.hpp"
#include "vnav/worker_pool.hpp"

namespace vnav::cli {

namespace {

// Lidar-like synthetic cloud: ranges uniform in [0.5, 20] m, full azimuth,
// elevations within +-15 degrees.
PointCloud synthetic_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> range(0.5, 20.0);
  std::uniform_real_distribution<double> azimuth(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> elevation(-std::numbers::pi / 12, std::numbers::pi / 12);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = range(rng), az = azimuth(rng), el = elevation(rng);
    cloud.points.push_back({r * std::cos(el) * std::cos(az), r * std::cos(el) * std::sin(az), r * std::sin(el)});
  }
  return cloud;
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

BenchReport run_bench(const BenchOptions& o) {
  const PointCloud cloud = synthetic_cloud(o.points, o.seed);
  const HyperEllipsoid vessel(0.8, 0.4, 0.4, 1);
  VesselParams params;
  params.z_crop.reset();
  NeedleConfig needles;
  needles.n_needle = o.needles;
  const Vec3 target{6.0, 1.0, 0.0};
  WorkerPool pool(o.threads);

  using Clock = std::chrono::steady_clock;
  std::vector<double> vessel_ms, mariner_ms;
  // One untimed warm-up pass each.
  volatile double sink = evaluate_cbf(vessel, PlanarPose{}, cloud, params, &pool).h;
  sink = select_preview_target(needles, cloud, target, &pool).scales.front();
  for (std::size_t k = 0; k < o.iterations; ++k) {
    auto t0 = Clock::now();
    sink = evaluate_cbf(vessel, PlanarPose{}, cloud, params, &pool).h;
    vessel_ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
    t0 = Clock::now();
    sink = select_preview_target(needles, cloud, target, &pool).scales.front();
    mariner_ms.push_back(std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  (void)sink;

  BenchReport r;
  r.points = o.points;
  r.needles = o.needles;
  r.iterations = o.iterations;
  r.threads = pool.size();
  r.vessel_median_ms = percentile(vessel_ms, 0.5);
  r.vessel_p95_ms = percentile(vessel_ms, 0.95);
  r.mariner_median_ms = percentile(mariner_ms, 0.5);
  r.mariner_p95_ms = percentile(mariner_ms, 0.95);
  r.vessel_points_per_s = static_cast<double>(o.points) / (r.vessel_median_ms * 1e-3);
  r.mariner_point_needles_per_s = static_cast<double>(o.points * o.needles) / (r.mariner_median_ms * 1e-3);
  return r;
}

int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err) {
  if (options.points < 1 || options.needles < 1 || options.iterations < 1) {
    err << "error: --points, --needles and --iterations must be >= 1\n";
    return kExitConfigError;
  }
  const BenchReport r = run_bench(options);
  nlohmann::ordered_json j;
  j["points"] = r.points;
  j["needles"] = r.needles;
  j["iterations"] = r.iterations;
  j["threads"] = r.threads;
  j["vessel"] = {{"median_ms", r.vessel_median_ms}, {"p95_ms", r.vessel_p95_ms}, {"points_per_s", r.vessel_points_per_s}};
  j["mariner"] = {{"median_ms", r.mariner_median_ms},
                  {"p95_ms", r.mariner_p95_ms},
                  {"point_needles_per_s", r.mariner_point_needles_per_s}};
  out << j.dump(2) << '\n';
  return 0;
}

}  // namespace vnav::cli
