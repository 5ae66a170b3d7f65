#pragma once

#include <vector>

#include "vnav/scenario.hpp"

namespace vnav {

/// Obstacle-free run to a goal 5 m ahead.
Scenario free_space_scenario();
/// Wall of boxes (absent from the floor plan) between start and goal.
Scenario box_wall_scenario();
/// 2 m wide L-shaped corridor taken from the floor plan.
Scenario hallway_scenario();
/// Floor plan with rooms and doorways plus boxes added after planning.
Scenario obstacle_course_scenario();

/// Every shipped scenario, in a fixed order.
std::vector<Scenario> shipped_scenarios();

}  // namespace vnav
