#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <system_error>

#include "vnav/scenario.hpp"
#include "vnav/scenario_library.hpp"
#include "vnav/simulator.hpp"
#include "vnav/worker_pool.hpp"

namespace vnav::cli {

namespace {

int exit_code_for(Outcome o) {
  switch (o) {
    case Outcome::reached:
      return kExitReached;
    case Outcome::collision:
      return kExitCollision;
    case Outcome::stuck:
      return kExitStuck;
    case Outcome::timeout:
      return kExitTimeout;
  }
  return kExitError;
}

bool ensure_dir(const std::filesystem::path& dir, std::ostream& err) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    err << "error: cannot create output directory " << dir << ": " << ec.message() << '\n';
    return false;
  }
  return true;
}

}  // namespace

std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& requested) {
  if (requested) return *requested;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return "vnav_out";
}

int cmd_run(const RunOptions& options, std::ostream& log, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = load_scenario(options.scenario_path);
    if (options.seed) scenario.seed = *options.seed;
    if (options.dt) scenario.rates.sim_dt = *options.dt;
    if (options.duration) scenario.duration_s = *options.duration;
    if (options.dt || options.duration) scenario.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  const std::filesystem::path out_dir = resolve_output_dir(options.output_dir);
  if (!ensure_dir(out_dir, err)) return kExitError;

  const Toggles toggles{!options.disable_vessel, !options.disable_mariner};
  EpisodeResult result;
  try {
    WorkerPool pool(options.threads);
    result = run_episode(scenario, toggles, &pool);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  {
    std::ofstream csv(out_dir / "trajectory.csv", std::ios::binary);
    write_trajectory_csv(csv, result.rows);
    std::ofstream metrics(out_dir / "metrics.json", std::ios::binary);
    write_metrics_json(metrics, result.metrics, scenario, toggles);
    if (!csv || !metrics) {
      err << "error: failed writing outputs to " << out_dir << '\n';
      return kExitError;
    }
  }
  const Metrics& m = result.metrics;
  log << scenario.name << ": " << outcome_name(m.outcome) << " after " << m.sim_time << " s, path "
      << m.path_length << " m, min clearance alpha " << m.min_true_clearance_alpha << '\n';
  return exit_code_for(m.outcome);
}

int cmd_scenarios(const std::filesystem::path& output_dir, std::ostream& log, std::ostream& err) {
  if (!ensure_dir(output_dir, err)) return kExitError;
  for (const Scenario& s : shipped_scenarios()) {
    const auto path = output_dir / (s.name + ".json");
    try {
      save_scenario(s, path);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitError;
    }
    log << path.string() << '\n';
  }
  return kExitReached;
}

}  // namespace vnav::cli
