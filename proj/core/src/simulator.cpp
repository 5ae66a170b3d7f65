#include "vnav/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <random>

#include "vnav/clearance.hpp"
#include "vnav/global_plan.hpp"
#include "vnav/lidar.hpp"
#include "vnav/mariner.hpp"
#include "vnav/vessel.hpp"
#include "vnav/worker_pool.hpp"

namespace vnav {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

double planar_distance(const Vec3& a, const Vec3& b) { return std::hypot(a.x - b.x, a.y - b.y); }

GridBounds default_bounds(const Scenario& s) {
  const Vec3& r = s.start.position();
  GridBounds b{std::min(r.x, s.goal.x), std::min(r.y, s.goal.y), std::max(r.x, s.goal.x),
               std::max(r.y, s.goal.y)};
  if (auto wb = s.world.planar_bounds(false)) {
    b.min_x = std::min(b.min_x, (*wb)[0]);
    b.min_y = std::min(b.min_y, (*wb)[1]);
    b.max_x = std::max(b.max_x, (*wb)[2]);
    b.max_y = std::max(b.max_y, (*wb)[3]);
  }
  const double m = s.planner.bounds_margin;
  // Snap to the grid so the cell lattice does not depend on float noise in the extents.
  const double res = s.planner.resolution;
  return {std::floor((b.min_x - m) / res) * res, std::floor((b.min_y - m) / res) * res,
          std::ceil((b.max_x + m) / res) * res, std::ceil((b.max_y + m) / res) * res};
}

void put(std::string& line, double v) {
  char buf[32];
  if (std::isnan(v)) {
    line += "nan";
  } else {
    const int n = std::snprintf(buf, sizeof buf, "%.10g", v);
    line.append(buf, static_cast<std::size_t>(n));
  }
  line += ',';
}

}  // namespace

PlanarPose integrate(const PlanarPose& pose, const ControlCommand& u, double dt) {
  const Vec3 v_world = rotate_z(u.v, pose.cos_yaw(), pose.sin_yaw());
  return PlanarPose(pose.position() + v_world * dt, pose.yaw() + u.omega * dt);
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::reached:
      return "reached";
    case Outcome::collision:
      return "collision";
    case Outcome::stuck:
      return "stuck";
    case Outcome::timeout:
      return "timeout";
  }
  return "unknown";
}

void StageTiming::add(double ms) {
  ++calls;
  total_ms += ms;
  max_ms = std::max(max_ms, ms);
}

WaypointPath plan_for_scenario(const Scenario& s, bool* fallback) {
  if (fallback) *fallback = false;
  const PlannerSettings& ps = s.planner;
  std::optional<OccupancyGrid> grid;
  if (ps.map_file) {
    std::ifstream in(*ps.map_file);
    if (!in) throw ConfigError("planner.map_file: cannot open " + ps.map_file->string());
    try {
      grid = read_grid_text(in);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("planner.map_file: " + std::string(e.what()));
    }
  } else {
    const double inflation = ps.inflation_radius.value_or(s.vessel.max_axis());
    grid = rasterize(s.world, ps.resolution, inflation, ps.bounds.value_or(default_bounds(s)));
  }
  try {
    return plan_path(*grid, s.start.position(), s.goal, ps.advance_radius);
  } catch (const NoPathError&) {
    if (fallback) *fallback = true;
    WaypointPath direct;
    direct.advance_radius = ps.advance_radius;
    direct.waypoints.push_back(s.goal);
    return direct;
  }
}

EpisodeResult run_episode(const Scenario& s, const Toggles& toggles, WorkerPool* pool) {
  const auto wall_start = Clock::now();
  EpisodeResult out;
  Metrics& m = out.metrics;

  WaypointTracker tracker(plan_for_scenario(s, &m.plan_fallback));
  m.waypoint_count = tracker.path().waypoints.size();

  std::mt19937_64 rng(s.seed);
  const double dt = s.rates.sim_dt;
  const int sensor_every = s.rates.sensor_period_ticks();
  const int mariner_every = s.rates.mariner_period_ticks();
  const auto n_ticks = static_cast<std::size_t>(std::llround(s.duration_s / dt));
  const PlanarPose body_origin;

  PlanarPose pose = s.start;
  ControlCommand u_ref, u;
  CbfEval eval;
  std::optional<Vec3> preview_world;
  double chosen_angle = std::numeric_limits<double>::quiet_NaN();
  bool mariner_stuck = false;
  bool infeasible = false;
  Vec3 target_body;
  double still_time = 0.0;

  m.min_true_clearance_alpha = std::numeric_limits<double>::infinity();
  m.min_h_soft = std::numeric_limits<double>::infinity();
  out.rows.reserve(n_ticks);

  for (std::size_t k = 0; k < n_ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k % static_cast<std::size_t>(sensor_every) == 0) {
      auto t0 = Clock::now();
      const PointCloud cloud = lidar_scan(pose, s.world, s.sensor, rng);
      m.scan.add(elapsed_ms(t0));

      const Vec3 waypoint_body = tracker.update(pose);
      if (toggles.mariner_on && k % static_cast<std::size_t>(mariner_every) == 0) {
        t0 = Clock::now();
        const NeedleResult nr = select_preview_target(s.needles, cloud, waypoint_body, pool);
        m.mariner.add(elapsed_ms(t0));
        mariner_stuck = nr.stuck();
        if (mariner_stuck) {
          ++m.mariner_stuck_updates;
          preview_world.reset();
          chosen_angle = std::numeric_limits<double>::quiet_NaN();
        } else {
          preview_world = world_from_body(pose, *nr.preview_target_body);
          chosen_angle = nr.angles[*nr.chosen_index];
        }
      }
      target_body = toggles.mariner_on && preview_world ? body_from_world(pose, *preview_world) : waypoint_body;
      target_body.z = 0.0;

      // The cloud is in the body frame, so evaluating at the body origin yields
      // the gradient with respect to body-frame motion, i.e. the control frame.
      t0 = Clock::now();
      eval = evaluate_cbf(s.vessel, body_origin, cloud, s.vessel_params, pool);
      m.vessel.add(elapsed_ms(t0));

      t0 = Clock::now();
      u_ref = saturate(reference_control(target_body, s.filter), s.filter.v_max, s.filter.omega_max);
      infeasible = false;
      if (toggles.vessel_on) {
        // Planar robot: vertical velocity is pinned to zero, which turns the
        // QP into the same projection with the z component of a removed.
        CbfEval planar = eval;
        planar.grad4[2] = 0.0;
        const FilterResult fr = filter_command(u_ref, planar, s.filter);
        infeasible = fr.status == FilterStatus::infeasible;
        u = saturate(fr.command, s.filter.v_max, s.filter.omega_max);
      } else {
        u = u_ref;
      }
      m.filter.add(elapsed_ms(t0));
    }

    auto t0 = Clock::now();
    const double clearance = true_clearance_alpha(pose, s.world, s.vessel);
    m.clearance.add(elapsed_ms(t0));

    TrajectoryRow row;
    row.t = t;
    row.r = pose.position();
    row.yaw = pose.yaw();
    row.u_ref = u_ref;
    row.u = u;
    row.h_soft = eval.h;
    row.h_min = eval.h_min;
    row.alpha_min = eval.h_min + s.vessel_params.beta;
    row.mariner_chosen_angle = toggles.mariner_on ? chosen_angle : std::numeric_limits<double>::quiet_NaN();
    row.preview_target = target_body;
    row.active_waypoint_index = tracker.active_index();
    row.true_clearance_alpha = clearance;
    row.stuck = toggles.mariner_on && mariner_stuck;
    row.infeasible = infeasible;
    out.rows.push_back(row);

    m.ticks = k + 1;
    m.sim_time = t;
    m.min_true_clearance_alpha = std::min(m.min_true_clearance_alpha, clearance);
    if (eval.has_constraint()) m.min_h_soft = std::min(m.min_h_soft, eval.h);
    if (infeasible) ++m.infeasible_ticks;

    if (planar_distance(pose.position(), s.goal) < s.termination.goal_tolerance) {
      m.outcome = Outcome::reached;
      m.reached = true;
      m.time_to_goal = t;
      break;
    }
    if (clearance < 1.0) {
      m.outcome = Outcome::collision;
      break;
    }
    still_time = u.norm() < s.termination.stuck_speed ? still_time + dt : 0.0;
    if (still_time >= s.termination.stuck_time - 1e-9) {
      m.outcome = Outcome::stuck;
      break;
    }

    const PlanarPose next = integrate(pose, u, dt);
    m.path_length += planar_distance(pose.position(), next.position());
    pose = next;
  }
  m.wall_time_s = std::chrono::duration<double>(Clock::now() - wall_start).count();
  return out;
}

std::string trajectory_csv_header() {
  return "t,r_x,r_y,r_z,yaw,u_ref_vx,u_ref_vy,u_ref_vz,u_ref_omega,u_vx,u_vy,u_vz,u_omega,"
         "h_soft,h_min,alpha_min,mariner_chosen_angle,preview_target_x,preview_target_y,"
         "preview_target_z,active_waypoint_index,true_clearance_alpha,stuck,infeasible";
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  out << trajectory_csv_header() << '\n';
  std::string line;
  for (const TrajectoryRow& r : rows) {
    line.clear();
    for (double v : {r.t, r.r.x, r.r.y, r.r.z, r.yaw, r.u_ref.v.x, r.u_ref.v.y, r.u_ref.v.z, r.u_ref.omega,
                     r.u.v.x, r.u.v.y, r.u.v.z, r.u.omega, r.h_soft, r.h_min, r.alpha_min,
                     r.mariner_chosen_angle, r.preview_target.x, r.preview_target.y, r.preview_target.z}) {
      put(line, v);
    }
    line += std::to_string(r.active_waypoint_index);
    line += ',';
    put(line, r.true_clearance_alpha);
    line += r.stuck ? '1' : '0';
    line += ',';
    line += r.infeasible ? '1' : '0';
    line += '\n';
    out << line;
  }
}

void write_metrics_json(std::ostream& out, const Metrics& m, const Scenario& s, const Toggles& toggles) {
  using ojson = nlohmann::ordered_json;
  auto finite_or_null = [](double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); };
  auto timing = [](const StageTiming& st) {
    return ojson{{"calls", st.calls}, {"mean_ms", st.mean_ms()}, {"max_ms", st.max_ms}};
  };
  ojson j;
  j["scenario"] = s.name;
  j["seed"] = s.seed;
  j["vessel_on"] = toggles.vessel_on;
  j["mariner_on"] = toggles.mariner_on;
  j["outcome"] = outcome_name(m.outcome);
  j["reached"] = m.reached;
  j["time_to_goal_s"] = m.time_to_goal ? ojson(*m.time_to_goal) : ojson(nullptr);
  j["sim_time_s"] = m.sim_time;
  j["ticks"] = m.ticks;
  j["path_length_m"] = m.path_length;
  j["min_true_clearance_alpha"] = finite_or_null(m.min_true_clearance_alpha);
  j["min_h_soft"] = finite_or_null(m.min_h_soft);
  j["infeasible_ticks"] = m.infeasible_ticks;
  j["mariner_stuck_updates"] = m.mariner_stuck_updates;
  j["plan_fallback"] = m.plan_fallback;
  j["waypoints"] = m.waypoint_count;
  j["timings"] = {{"scan", timing(m.scan)},
                  {"vessel", timing(m.vessel)},
                  {"mariner", timing(m.mariner)},
                  {"filter", timing(m.filter)},
                  {"clearance", timing(m.clearance)}};
  j["wall_time_s"] = m.wall_time_s;
  out << j.dump(2) << '\n';
}

}  // namespace vnav
