#include "vnav/scenario_library.hpp"

namespace vnav {

namespace {

Box wall(double x0, double y0, double x1, double y1, double height = 2.0) {
  return {{x0, y0, 0.0}, {x1, y1, height}, false};
}

Box crate(double cx, double cy, double sx, double sy, double height) {
  return {{cx - 0.5 * sx, cy - 0.5 * sy, 0.0}, {cx + 0.5 * sx, cy + 0.5 * sy, height}, true};
}

Scenario base(const char* name, const char* description) {
  Scenario s;
  s.name = name;
  s.description = description;
  s.seed = 7;
  return s;
}

// Quadruped-scale vessel and needles used by the box-wall and global-planner scenes.
void use_small_robot(Scenario& s) {
  s.vessel = HyperEllipsoid(0.5, 0.3, 0.2, 1);
  s.needles.a_bar = 0.8;
  s.needles.b_bar = 0.1;
  s.needles.c_bar = 0.2;
}

}  // namespace

Scenario free_space_scenario() {
  Scenario s = base("free_space", "Empty world; goal 5 m straight ahead.");
  s.start = PlanarPose({0.0, 0.0, 0.4}, 0.0);
  s.goal = {5.0, 0.0, 0.4};
  s.duration_s = 30.0;
  return s;
}

Scenario box_wall_scenario() {
  Scenario s = base("box_wall",
                    "Reconstructed box-wall ablation scene: a row of boxes unknown to the floor plan "
                    "blocks the straight line to the goal.");
  s.start = PlanarPose({0.0, 0.0, 0.4}, 0.0);
  s.goal = {8.0, 0.0, 0.4};
  for (double y : {-1.0, 0.0, 1.0}) s.world.boxes.push_back(crate(4.0, y, 0.5, 1.0, 1.0));
  use_small_robot(s);
  s.duration_s = 60.0;
  return s;
}

Scenario hallway_scenario() {
  Scenario s = base("hallway",
                    "Reconstructed hallway scene: 2.0 m wide corridor running 12 m east, then 8 m north.");
  s.start = PlanarPose({0.0, 0.0, 0.4}, 0.0);
  s.goal = {13.0, 8.0, 0.4};
  // Corridor centre line: y = 0 for x in [-1, 13], then x = 13 for y in [0, 9].
  s.world.boxes.push_back(wall(-1.5, -1.2, 14.2, -1.0));   // south wall
  s.world.boxes.push_back(wall(-1.5, 1.0, 12.0, 1.2));     // north wall up to the turn
  s.world.boxes.push_back(wall(14.0, -1.2, 14.2, 9.5));    // east wall of the north leg
  s.world.boxes.push_back(wall(11.8, 1.0, 12.0, 9.5));     // west wall of the north leg
  s.world.boxes.push_back(wall(-1.7, -1.2, -1.5, 1.2));    // dead end behind the start
  s.world.boxes.push_back(wall(11.8, 9.5, 14.2, 9.7));     // end cap
  s.duration_s = 90.0;
  return s;
}

Scenario obstacle_course_scenario() {
  Scenario s = base("obstacle_course",
                    "Reconstructed global-planner scene: two rooms joined by a doorway, with four "
                    "boxes placed on the planned route after planning.");
  s.start = PlanarPose({0.0, 0.0, 0.4}, 0.0);
  s.goal = {14.0, 4.0, 0.4};
  use_small_robot(s);
  // Outer walls.
  s.world.boxes.push_back(wall(-2.0, -3.2, 17.0, -3.0));
  s.world.boxes.push_back(wall(-2.0, 7.0, 17.0, 7.2));
  s.world.boxes.push_back(wall(-2.2, -3.2, -2.0, 7.2));
  s.world.boxes.push_back(wall(17.0, -3.2, 17.2, 7.2));
  // Partition with a 2.4 m doorway between y = 1.2 and y = 3.6.
  s.world.boxes.push_back(wall(7.0, -3.0, 7.2, 1.2));
  s.world.boxes.push_back(wall(7.0, 3.6, 7.2, 7.0));
  // Pillar in the second room.
  s.world.prisms.push_back({{{10.5, 0.0}, {11.5, 0.0}, {11.9, 0.8}, {11.0, 1.5}, {10.3, 0.8}}, 0.0, 2.0, false});
  // Boxes unknown to the planner.
  s.world.boxes.push_back(crate(3.0, 0.6, 0.6, 0.6, 0.8));
  s.world.boxes.push_back(crate(5.5, 2.0, 0.6, 1.2, 0.8));
  s.world.boxes.push_back(crate(9.5, 3.0, 0.8, 0.8, 0.8));
  s.world.boxes.push_back(crate(12.5, 4.2, 0.6, 0.6, 0.8));
  s.duration_s = 90.0;
  return s;
}

std::vector<Scenario> shipped_scenarios() {
  return {free_space_scenario(), box_wall_scenario(), hallway_scenario(), obstacle_course_scenario()};
}

}  // namespace vnav
