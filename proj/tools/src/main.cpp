#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace vnav::cli;
  CLI::App app{"Reactive vessel navigation simulator"};
  app.require_subcommand(1);

  RunOptions run;
  std::string out_dir;
  std::uint64_t seed = 0;
  double dt = 0.0, duration = 0.0;
  auto* run_cmd = app.add_subcommand("run", "Run one episode from a scenario file");
  run_cmd->add_option("--scenario,scenario", run.scenario_path, "Scenario JSON file")->required();
  auto* out_opt = run_cmd->add_option("-o,--out", out_dir, "Output directory");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override the scenario seed");
  auto* dt_opt = run_cmd->add_option("--dt", dt, "Override the simulation step [s]");
  auto* dur_opt = run_cmd->add_option("--duration", duration, "Override the episode duration [s]");
  run_cmd->add_flag("--disable-vessel", run.disable_vessel, "Disable the safety filter");
  run_cmd->add_flag("--disable-mariner", run.disable_mariner, "Disable the local planner");
  run_cmd->add_option("-j,--threads", run.threads, "Worker threads (0 = hardware)");

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time the barrier and needle kernels");
  bench_cmd->add_option("--points", bench.points, "Cloud size");
  bench_cmd->add_option("--needles", bench.needles, "Needle count");
  bench_cmd->add_option("--iterations", bench.iterations, "Timed iterations");
  bench_cmd->add_option("--seed", bench.seed, "Cloud seed");
  bench_cmd->add_option("-j,--threads", bench.threads, "Worker threads (0 = hardware)");

  std::string scen_dir = "scenarios";
  auto* scen_cmd = app.add_subcommand("scenarios", "Write the shipped scenarios as JSON");
  scen_cmd->add_option("-o,--out", scen_dir, "Directory to write into");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  try {
    if (run_cmd->parsed()) {
      if (*out_opt) run.output_dir = out_dir;
      if (*seed_opt) run.seed = seed;
      if (*dt_opt) run.dt = dt;
      if (*dur_opt) run.duration = duration;
      return cmd_run(run, std::cout, std::cerr);
    }
    if (bench_cmd->parsed()) return cmd_bench(bench, std::cout, std::cerr);
    return cmd_scenarios(scen_dir, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
