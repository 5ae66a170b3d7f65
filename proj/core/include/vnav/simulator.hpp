#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vnav/geometry.hpp"
#include "vnav/safety_filter.hpp"
#include "vnav/scenario.hpp"

namespace vnav {

class WorkerPool;

/// Explicit Euler step of x' = u; v is a body-frame velocity lifted by R(yaw).
PlanarPose integrate(const PlanarPose& pose, const ControlCommand& u, double dt);

struct Toggles {
  bool vessel_on = true;
  bool mariner_on = true;
};

/// One simulation tick: the state at t and the command held over [t, t + dt).
struct TrajectoryRow {
  double t = 0.0;
  Vec3 r;
  double yaw = 0.0;
  ControlCommand u_ref;
  ControlCommand u;
  double h_soft = 0.0;
  double h_min = 0.0;
  double alpha_min = 0.0;
  /// Heading of the chosen needle, NaN when none is active.
  double mariner_chosen_angle = 0.0;
  /// Body-frame target handed to the reference controller.
  Vec3 preview_target;
  std::size_t active_waypoint_index = 0;
  double true_clearance_alpha = 0.0;
  bool stuck = false;
  bool infeasible = false;
};

enum class Outcome { reached, collision, stuck, timeout };

const char* outcome_name(Outcome o);

struct StageTiming {
  std::size_t calls = 0;
  double total_ms = 0.0;
  double max_ms = 0.0;

  void add(double ms);
  double mean_ms() const { return calls ? total_ms / calls : 0.0; }
};

struct Metrics {
  Outcome outcome = Outcome::timeout;
  bool reached = false;
  std::optional<double> time_to_goal;
  double sim_time = 0.0;
  double path_length = 0.0;
  double min_true_clearance_alpha = 0.0;
  double min_h_soft = 0.0;
  std::size_t ticks = 0;
  std::size_t infeasible_ticks = 0;
  std::size_t mariner_stuck_updates = 0;
  /// Global planner could not connect start and goal; the goal was tracked directly.
  bool plan_fallback = false;
  std::size_t waypoint_count = 0;
  StageTiming scan, vessel, mariner, filter, clearance;
  double wall_time_s = 0.0;
};

struct EpisodeResult {
  std::vector<TrajectoryRow> rows;
  Metrics metrics;
};

/// Closed-loop episode: global plan once, then per sensor tick a scan, the
/// barrier evaluation and filtered reference control; per Mariner tick a new
/// preview target held in the world frame; per sim tick an Euler step with the
/// zero-order-held command. Collisions are judged by the sampled-surface
/// clearance oracle.
EpisodeResult run_episode(const Scenario& scenario, const Toggles& toggles, WorkerPool* pool = nullptr);

/// Builds the global plan the episode uses (rasterized world or map file).
WaypointPath plan_for_scenario(const Scenario& scenario, bool* fallback = nullptr);

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);
std::string trajectory_csv_header();
void write_metrics_json(std::ostream& out, const Metrics& metrics, const Scenario& scenario,
                        const Toggles& toggles);

}  // namespace vnav
