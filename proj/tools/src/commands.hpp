#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace vnav::cli {

/// Process exit codes. Episode outcomes map one-to-one onto codes 0, 3, 4, 5.
enum ExitCode : int {
  kExitReached = 0,
  kExitError = 1,
  kExitConfigError = 2,
  kExitCollision = 3,
  kExitStuck = 4,
  kExitTimeout = 5,
};

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "VNAV_OUTPUT_DIR";

struct RunOptions {
  std::filesystem::path scenario_path;
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> duration;
  bool disable_vessel = false;
  bool disable_mariner = false;
  std::size_t threads = 0;
};

struct BenchOptions {
  std::size_t points = 57600;
  std::size_t needles = 100;
  std::size_t iterations = 50;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};

struct BenchReport {
  std::size_t points = 0;
  std::size_t needles = 0;
  std::size_t iterations = 0;
  std::size_t threads = 0;
  double vessel_median_ms = 0.0;
  double vessel_p95_ms = 0.0;
  double mariner_median_ms = 0.0;
  double mariner_p95_ms = 0.0;
  double vessel_points_per_s = 0.0;
  double mariner_point_needles_per_s = 0.0;
};

/// Output directory from the option, else $VNAV_OUTPUT_DIR, else ./vnav_out.
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& requested);

/// Runs one episode and writes trajectory.csv and metrics.json into the output
/// directory. Diagnostics go to err.
int cmd_run(const RunOptions& options, std::ostream& log, std::ostream& err);

BenchReport run_bench(const BenchOptions& options);
/// Writes the report as JSON to out.
int cmd_bench(const BenchOptions& options, std::ostream& out, std::ostream& err);

/// Writes every shipped scenario as <name>.json into output_dir.
int cmd_scenarios(const std::filesystem::path& output_dir, std::ostream& log, std::ostream& err);

}  // namespace vnav::cli
