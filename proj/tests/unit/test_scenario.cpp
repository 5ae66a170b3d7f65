#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "vnav/scenario.hpp"
#include "vnav/scenario_library.hpp"

using namespace vnav;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

const char* kMinimal = R"({"world": {"obstacles": []}, "start": {"position": [0, 0, 0.4]}, "goal": [5, 0]})";

}  // namespace

TEST_CASE("minimal scenario takes documented defaults") {
  const Scenario s = parse_scenario(kMinimal);
  CHECK_NOTHROW(s.validate());
  CHECK(s.vessel_params.beta == 1.2);
  CHECK(s.vessel_params.delta == 0.01);
  CHECK(s.filter.gamma_bar == 2.0);
  CHECK(s.needles.n_needle == 100);
  CHECK(s.rates.sensor_period_ticks() == 10);
  CHECK(s.rates.mariner_period_ticks() == 50);
  CHECK(s.goal.z == 0.4);
}

TEST_CASE("shipped scenarios round-trip through JSON") {
  for (const Scenario& s : shipped_scenarios()) {
    CHECK_NOTHROW(s.validate());
    const std::string text = scenario_to_json(s);
    const Scenario back = parse_scenario(text);
    CHECK(scenario_to_json(back) == text);
  }
}

TEST_CASE("diagnostics name the offending field") {
  CHECK(has(error_of(R"({"world": {"obstacles": []}, "start": {"position": [0, 0, 0.4]}, "goal": [5, 0], "speed": 1})"),
            "speed: unknown field"));
  CHECK(has(error_of(R"({"world": {"obstacles": []}, "start": {"position": [0, 0]}, "goal": [5, 0]})"),
            "start.position"));
  CHECK(has(error_of(R"({"world": {"obstacles": []}, "start": {"position": [0, 0, 0.4]}})"), "goal"));
  CHECK(has(error_of(R"({"world": {"obstacles": [{"type": "cone"}]}, "start": {"position": [0, 0, 0.4]}, "goal": [5, 0]})"),
            "world.obstacles[0].type"));
  CHECK(has(error_of(R"({"world": {"obstacles": []}, "start": {"position": [0, 0, 0.4]}, "goal": [5, 0],
                         "vessel": {"beta": 1.05}})"),
            "vessel"));
  CHECK(has(error_of(R"({"world": {"obstacles": []}, "start": {"position": [0, 0, 0.4]}, "goal": [5, 0],
                         "rates": {"sensor_hz": 7}})"),
            "rates.sensor_hz"));
  CHECK(has(error_of("{\n\"world\": {\n\"obstacles\": [}\n}"), "line 3"));
}

TEST_CASE("start overlapping geometry is rejected") {
  const std::string text = R"({"world": {"obstacles": [{"type": "box", "min": [0.5, -1, 0], "max": [1, 1, 1]}]},
                               "start": {"position": [0, 0, 0.4]}, "goal": [5, 0]})";
  CHECK(has(error_of(text), "start"));
}

TEST_CASE("load_scenario reports the path for missing files") {
  try {
    load_scenario("/nonexistent/scenario.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(has(e.what(), "/nonexistent/scenario.json"));
  }
}

TEST_CASE("map_file resolves against the scenario directory") {
  const auto dir = std::filesystem::temp_directory_path() / "vnav_scenario_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "s.json") << R"({"world": {"obstacles": []}, "start": {"position": [0, 0, 0.4]},
                                         "goal": [5, 0], "planner": {"map_file": "floor.txt"}})";
  }
  const Scenario s = load_scenario(dir / "s.json");
  REQUIRE(s.planner.map_file);
  CHECK(*s.planner.map_file == dir / "floor.txt");
  std::filesystem::remove_all(dir);
}
