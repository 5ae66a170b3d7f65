// Acceptance criteria 1-9: one PASS/FAIL line each, exit status 1 on any FAIL.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../support/oracles.hpp"
#include "commands.hpp"
#include "vnav/safety_filter.hpp"
#include "vnav/scenario_library.hpp"
#include "vnav/simulator.hpp"
#include "vnav/worker_pool.hpp"

using namespace vnav;

namespace {

// Tolerances and sizes pinned here.
constexpr int kGradInstances = 500;
constexpr double kGradFdStep = 1e-6;
constexpr double kGradRelTol = 1e-5;
constexpr double kGradTimeLimitS = 30.0;
constexpr int kSoftminSets = 10000;
constexpr double kSoftminTol = 1e-12;
constexpr int kQpInstances = 1000;
constexpr double kQpTol = 1e-8;
constexpr int kMarinerScenes = 1000;
constexpr double kTipTol = 1e-9;
constexpr double kMinClearance = 1.0;
constexpr double kEpisodeWallLimitS = 10.0;
constexpr double kVesselBudgetMs = 10.0;
constexpr double kMarinerBudgetMs = 25.0;
constexpr double kScalingLimit = 2.2;
constexpr std::size_t kBenchPoints = 57600;

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void gradient_correctness() {
  const auto t0 = std::chrono::steady_clock::now();
  oracle::Rng rng(101);
  VesselParams params;
  params.z_crop.reset();
  double worst = 0.0;
  for (int k = 0; k < kGradInstances; ++k) {
    const HyperEllipsoid e(rng.uniform(0.3, 1.2), rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8), 1 + k % 4);
    const PlanarPose pose({rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(0, 1)}, rng.uniform(-3.1, 3.1));
    PointCloud cloud{{}, Frame::world};
    const int n = rng.integer(1, 256);
    for (int i = 0; i < n; ++i) {
      const Vec3 b{e.a() * rng.uniform(-3, 3), e.b() * rng.uniform(-3, 3), e.c() * rng.uniform(-3, 3)};
      cloud.points.push_back(world_from_body(pose, b));
    }
    const Grad4 g = evaluate_cbf(e, pose, cloud, params).grad4;
    const Grad4 fd = oracle::fd_grad4(e, pose, cloud, params, kGradFdStep);
    double num = 0, den = 0;
    for (int i = 0; i < 4; ++i) {
      num += (g[i] - fd[i]) * (g[i] - fd[i]);
      den += fd[i] * fd[i];
    }
    worst = std::max(worst, std::sqrt(num) / std::sqrt(den));
  }
  const double t = seconds_since(t0);
  report(1, worst < kGradRelTol && t < kGradTimeLimitS,
         fmt("%d instances, d in {1..4}, max rel err %.3g (< %.0e), %.2f s", kGradInstances, worst, kGradRelTol, t));
}

void softmin_sandwich() {
  oracle::Rng rng(202);
  int violations = 0;
  double worst_spread = 0.0;
  auto check = [&](const std::vector<double>& v, double delta) {
    const double lo = *std::min_element(v.begin(), v.end());
    const double s = *softmin_stable(v, delta);
    const double hi = lo + delta * std::log(static_cast<double>(v.size()));
    if (!(s >= lo - kSoftminTol && s <= hi + kSoftminTol)) ++violations;
  };
  for (int k = 0; k < kSoftminSets; ++k) {
    const int n = rng.integer(1, 2000);
    const double delta = std::pow(10.0, rng.uniform(-4, 0));
    const double spread = std::pow(10.0, rng.uniform(-9, 6));
    const double centre = rng.uniform(-10, 10);
    std::vector<double> v(n);
    switch (k % 4) {
      case 0:  // uniform spread
        for (double& x : v) x = centre + rng.uniform(-spread, spread);
        break;
      case 1:  // all equal
        std::fill(v.begin(), v.end(), centre);
        break;
      case 2:  // one low outlier, the rest far above
        std::fill(v.begin(), v.end(), centre + spread);
        v[rng.integer(0, n - 1)] = centre - spread;
        break;
      default:  // two clusters at the extremes
        for (double& x : v) x = centre + (rng.uniform(0, 1) < 0.5 ? -spread : spread);
    }
    worst_spread = std::max(worst_spread, spread);
    check(v, delta);
  }
  // The barrier reduction itself, on clouds with extreme alpha spread.
  const HyperEllipsoid e(0.8, 0.4, 0.4, 4);
  VesselParams params;
  params.z_crop.reset();
  for (int k = 0; k < 200; ++k) {
    PointCloud c;
    const int n = rng.integer(1, 5000);
    for (int i = 0; i < n; ++i) c.points.push_back({rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-1, 1)});
    const CbfEval r = evaluate_cbf(e, PlanarPose{}, c, params);
    const double hi = r.h_min + params.delta * std::log(static_cast<double>(r.n_points));
    if (!(r.h >= r.h_min - kSoftminTol && r.h <= hi + kSoftminTol)) ++violations;
  }
  report(2, violations == 0,
         fmt("%d value sets + 200 clouds, spreads up to %.0e, %d violations (tol %.0e)", kSoftminSets, worst_spread,
             violations, kSoftminTol));
}

void qp_projection() {
  oracle::Rng rng(303);
  FilterParams fp;
  double worst = 0.0;
  int property_failures = 0;
  for (int k = 0; k < kQpInstances; ++k) {
    ControlCommand u_ref{{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}, rng.uniform(-1, 1)};
    CbfEval eval;
    eval.n_points = 1;
    eval.h = rng.uniform(-1, 3);
    for (double& g : eval.grad4) g = rng.uniform(-5, 5);
    const FilterResult r = filter_command(u_ref, eval, fp);
    const auto got = r.command.as_array();
    const double bound = -fp.gamma_bar * eval.h;
    const auto ref = oracle::qp_bisection(u_ref.as_array(), eval.grad4, bound);
    for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(got[i] - ref[i]));
    // Idempotence: filtering the output again leaves it unchanged.
    const auto again = filter_command(r.command, eval, fp).command.as_array();
    for (int i = 0; i < 4; ++i) property_failures += std::abs(again[i] - got[i]) > kQpTol;
    // Minimal deviation (KKT): u - u_ref = lambda * a with lambda >= 0, zero when inactive.
    const auto ur = u_ref.as_array();
    double aa = 0, au = 0, lam = 0;
    for (int i = 0; i < 4; ++i) {
      aa += eval.grad4[i] * eval.grad4[i];
      au += eval.grad4[i] * got[i];
      lam += eval.grad4[i] * (got[i] - ur[i]);
    }
    lam /= aa;
    property_failures += lam < -kQpTol;
    property_failures += au < bound - kQpTol;
    for (int i = 0; i < 4; ++i) property_failures += std::abs(got[i] - ur[i] - lam * eval.grad4[i]) > kQpTol;
  }
  report(3, worst <= kQpTol && property_failures == 0,
         fmt("%d instances vs bisection oracle, max abs diff %.3g (<= %.0e), %d property failures", kQpInstances, worst,
             kQpTol, property_failures));
}

void mariner_oracle() {
  oracle::Rng rng(404);
  WorkerPool pool;
  int mismatches = 0;
  for (int k = 0; k < kMarinerScenes; ++k) {
    NeedleConfig cfg;
    PointCloud c;
    const int boxes = rng.integer(0, 6);
    for (int b = 0; b < boxes; ++b) {
      const double cx = rng.uniform(-8, 8), cy = rng.uniform(-8, 8), sx = rng.uniform(0.2, 3), sy = rng.uniform(0.2, 3);
      for (int i = 0; i < 60; ++i) {
        c.points.push_back({cx + rng.uniform(-sx, sx), cy + rng.uniform(-sy, sy), rng.uniform(-1, 1)});
      }
    }
    const Vec3 target{rng.uniform(-12, 12), rng.uniform(-12, 12), 0.0};
    const NeedleResult r = select_preview_target(cfg, c, target, &pool);
    if (r.chosen_index != oracle::brute_select(cfg, c.points, target).chosen) ++mismatches;
  }
  double worst_tip = 0.0;
  NeedleConfig cfg;
  oracle::Rng r2(405);
  for (const double th : needle_angles(cfg)) {
    const double dist = r2.uniform(0.5, 9.5);
    const PointCloud p{{{dist * std::cos(th), dist * std::sin(th), 0.0}}, Frame::body};
    worst_tip = std::max(worst_tip, std::abs(needle_tip(cfg, th, needle_scale(cfg, th, p)).norm() - dist));
  }
  report(4, mismatches == 0 && worst_tip <= kTipTol,
         fmt("%d scenes, %d index mismatches vs brute force; on-axis tip error %.2g (<= %.0e)", kMarinerScenes,
             mismatches, worst_tip, kTipTol));
}

struct Timed {
  EpisodeResult result;
  double wall_s;
};

Timed timed_episode(const Scenario& s, const Toggles& t, WorkerPool* pool) {
  const auto t0 = std::chrono::steady_clock::now();
  EpisodeResult r = run_episode(s, t, pool);
  return {std::move(r), seconds_since(t0)};
}

void closed_loop_safety(WorkerPool& pool) {
  bool pass = true;
  std::string detail;
  for (const Scenario& s : shipped_scenarios()) {
    const Timed t = timed_episode(s, Toggles{}, &pool);
    const double a = t.result.metrics.min_true_clearance_alpha;
    pass = pass && a >= kMinClearance && t.wall_s < kEpisodeWallLimitS;
    detail += s.name + ": alpha " + fmt("%.3f", a) + ", " + fmt("%.2f s", t.wall_s) + "; ";
  }
  report(5, pass, detail + fmt("need alpha >= %.1f and < %.0f s", kMinClearance, kEpisodeWallLimitS));
}

void box_wall_ablation(WorkerPool& pool) {
  const Scenario s = box_wall_scenario();
  const Outcome complete = run_episode(s, Toggles{true, true}, &pool).metrics.outcome;
  const Outcome no_vessel = run_episode(s, Toggles{false, true}, &pool).metrics.outcome;
  const Outcome no_mariner = run_episode(s, Toggles{true, false}, &pool).metrics.outcome;
  report(6, complete == Outcome::reached && no_vessel == Outcome::collision && no_mariner == Outcome::stuck,
         std::string("complete=") + outcome_name(complete) + " (want reached), no-vessel=" + outcome_name(no_vessel) +
             " (want collision), no-mariner=" + outcome_name(no_mariner) + " (want stuck)");
}

void hallway(WorkerPool& pool) {
  const Scenario s = hallway_scenario();
  const Metrics m = run_episode(s, Toggles{}, &pool).metrics;
  const bool vessel_ok = s.vessel.a() == 0.8 && s.vessel.b() == 0.4 && s.vessel.c() == 0.4;
  // Corridor width: gap between the south wall top and the north wall bottom.
  const double width = s.world.boxes[1].min.y - s.world.boxes[0].max.y;
  report(7, vessel_ok && std::abs(width - 2.0) < 1e-12 && m.outcome == Outcome::reached &&
                m.min_true_clearance_alpha >= kMinClearance,
         std::string("corridor ") + fmt("%.1f m", width) + ", outcome " + outcome_name(m.outcome) +
             fmt(", min alpha %.3f, mariner stuck updates %zu", m.min_true_clearance_alpha,
                 m.mariner_stuck_updates));
}

void throughput() {
  // Sizes interleaved over several rounds; best median per size damps host noise.
  constexpr int kRounds = 3;
  const std::array<std::size_t, 3> sizes{kBenchPoints / 2, kBenchPoints, kBenchPoints * 2};
  std::array<cli::BenchReport, 3> best{};
  for (int round = 0; round < kRounds; ++round) {
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      cli::BenchOptions o;
      o.iterations = 40;
      o.points = sizes[i];
      const cli::BenchReport r = cli::run_bench(o);
      if (round == 0 || r.vessel_median_ms < best[i].vessel_median_ms) {
        best[i].vessel_median_ms = r.vessel_median_ms;
        best[i].threads = r.threads;
      }
      if (round == 0 || r.mariner_median_ms < best[i].mariner_median_ms) best[i].mariner_median_ms = r.mariner_median_ms;
    }
  }
  const cli::BenchReport& half = best[0];
  const cli::BenchReport& full = best[1];
  const cli::BenchReport& dbl = best[2];
  const double sv = std::max(full.vessel_median_ms / half.vessel_median_ms, dbl.vessel_median_ms / full.vessel_median_ms);
  const double sm =
      std::max(full.mariner_median_ms / half.mariner_median_ms, dbl.mariner_median_ms / full.mariner_median_ms);
  const bool pass = full.vessel_median_ms < kVesselBudgetMs && full.mariner_median_ms < kMarinerBudgetMs &&
                    sv <= kScalingLimit && sm <= kScalingLimit;
  report(8, pass,
         fmt("N=57600: vessel %.2f ms (< 10), mariner %.2f ms (< 25); worst doubling ratio vessel %.2f, mariner %.2f",
             full.vessel_median_ms, full.mariner_median_ms, sv, sm) +
             " (<= 2.2); " + std::to_string(full.threads) + " thread(s) on this host, budget stated for 8 cores");
}

void determinism() {
  bool pass = true;
  std::string detail;
  for (const Scenario& s : {box_wall_scenario(), obstacle_course_scenario()}) {
    std::ostringstream a, b, c;
    WorkerPool p1(2), p2(2), p3(1);
    write_trajectory_csv(a, run_episode(s, Toggles{}, &p1).rows);
    write_trajectory_csv(b, run_episode(s, Toggles{}, &p2).rows);
    write_trajectory_csv(c, run_episode(s, Toggles{}, &p3).rows);
    pass = pass && a.str() == b.str();
    detail += s.name + (a.str() == b.str() ? ": identical" : ": DIFFER") +
              (a.str() == c.str() ? " (also across pool sizes); " : " (differs across pool sizes); ");
  }
  report(9, pass, detail + "two runs, same seed and threads");
}

}  // namespace

int main() {
  WorkerPool pool;
  gradient_correctness();
  softmin_sandwich();
  qp_projection();
  mariner_oracle();
  closed_loop_safety(pool);
  box_wall_ablation(pool);
  hallway(pool);
  throughput();
  determinism();
  std::printf("%s: %d of 9 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
