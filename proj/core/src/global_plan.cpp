#include "vnav/global_plan.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>
#include <sstream>

namespace vnav {

namespace {

constexpr std::array<Cell, 8> kMoves{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

double octile(Cell a, Cell b) {
  const int dx = std::abs(a.x - b.x);
  const int dy = std::abs(a.y - b.y);
  return (std::max(dx, dy) - std::min(dx, dy)) + std::min(dx, dy) * std::numbers::sqrt2;
}

}  // namespace

OccupancyGrid::OccupancyGrid(double resolution, Vec3 origin, int width, int height)
    : resolution_(resolution), origin_(origin), width_(width), height_(height) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be > 0");
  if (width < 1 || height < 1) throw std::invalid_argument("grid dimensions must be >= 1");
  cells_.assign(static_cast<std::size_t>(width) * height, 0);
}

std::size_t OccupancyGrid::occupied_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

Vec3 OccupancyGrid::center(Cell c) const {
  return {origin_.x + (c.x + 0.5) * resolution_, origin_.y + (c.y + 0.5) * resolution_, origin_.z};
}

Cell OccupancyGrid::cell_of(const Vec3& p) const {
  return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
          static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
}

OccupancyGrid rasterize(const World& world, double resolution, double inflation_radius,
                        const GridBounds& bounds) {
  if (!(resolution > 0.0)) throw std::invalid_argument("grid resolution must be > 0");
  const int width = std::max(1, static_cast<int>(std::ceil((bounds.max_x - bounds.min_x) / resolution - 1e-9)));
  const int height = std::max(1, static_cast<int>(std::ceil((bounds.max_y - bounds.min_y) / resolution - 1e-9)));
  OccupancyGrid grid(resolution, {bounds.min_x, bounds.min_y, 0.0}, width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Vec3 c = grid.center({x, y});
      if (world.footprint_distance(c.x, c.y, false) <= inflation_radius) grid.set_occupied({x, y}, true);
    }
  }
  return grid;
}

void write_grid_text(std::ostream& out, const OccupancyGrid& grid) {
  out.precision(17);
  out << "resolution " << grid.resolution() << " origin " << grid.origin().x << ' ' << grid.origin().y
      << '\n';
  for (int y = grid.height() - 1; y >= 0; --y) {
    for (int x = 0; x < grid.width(); ++x) out << (grid.occupied({x, y}) ? '#' : '.');
    out << '\n';
  }
}

OccupancyGrid read_grid_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("grid text: missing header line");
  std::istringstream header(line);
  std::string k1, k2;
  double res = 0.0, ox = 0.0, oy = 0.0;
  if (!(header >> k1 >> res >> k2 >> ox >> oy) || k1 != "resolution" || k2 != "origin") {
    throw std::invalid_argument("grid text: header must be 'resolution <r> origin <x> <y>'");
  }
  std::vector<std::string> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!rows.empty() && line.size() != rows.front().size()) {
      throw std::invalid_argument("grid text: row " + std::to_string(rows.size() + 2) +
                                  " has a different width");
    }
    rows.push_back(line);
  }
  if (rows.empty()) throw std::invalid_argument("grid text: no rows");
  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size());
  OccupancyGrid grid(res, {ox, oy, 0.0}, width, height);
  for (int r = 0; r < height; ++r) {
    for (int x = 0; x < width; ++x) {
      const char ch = rows[r][x];
      if (ch != '#' && ch != '.') {
        throw std::invalid_argument("grid text: row " + std::to_string(r + 2) +
                                    " contains a character other than '#' or '.'");
      }
      grid.set_occupied({x, height - 1 - r}, ch == '#');
    }
  }
  return grid;
}

double GridCost::cells() const {
  return static_cast<double>(straight) + static_cast<double>(diagonal) * std::numbers::sqrt2;
}

bool grid_move_allowed(const OccupancyGrid& grid, Cell from, Cell to) {
  if (grid.occupied(to)) return false;
  const int dx = to.x - from.x;
  const int dy = to.y - from.y;
  if (dx != 0 && dy != 0) {
    return !grid.occupied({from.x + dx, from.y}) && !grid.occupied({from.x, from.y + dy});
  }
  return true;
}

bool line_of_sight(const OccupancyGrid& grid, const Vec3& a, const Vec3& b) {
  Cell cell = grid.cell_of(a);
  const Cell end = grid.cell_of(b);
  const double res = grid.resolution();
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const int sx = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int sy = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto first_crossing = [&](double p, double o, double d, int s, int c) {
    if (s == 0) return inf;
    const double boundary = o + (s > 0 ? c + 1 : c) * res;
    return (boundary - p) / d;
  };
  double t_x = first_crossing(a.x, grid.origin().x, dx, sx, cell.x);
  double t_y = first_crossing(a.y, grid.origin().y, dy, sy, cell.y);
  const double step_x = sx != 0 ? res / std::abs(dx) : inf;
  const double step_y = sy != 0 ? res / std::abs(dy) : inf;
  const int max_steps = std::abs(end.x - cell.x) + std::abs(end.y - cell.y) + 2;
  for (int i = 0; i <= max_steps; ++i) {
    if (grid.occupied(cell)) return false;
    if (cell == end) return true;
    if (std::min(t_x, t_y) > 1.0) return true;
    // Crossing within a whisker of a vertex: both side cells must be free.
    if (std::abs(t_x - t_y) <= 1e-9) {
      if (grid.occupied({cell.x + sx, cell.y}) || grid.occupied({cell.x, cell.y + sy})) return false;
      cell = {cell.x + sx, cell.y + sy};
      t_x += step_x;
      t_y += step_y;
    } else if (t_x < t_y) {
      cell.x += sx;
      t_x += step_x;
    } else {
      cell.y += sy;
      t_y += step_y;
    }
  }
  return !grid.occupied(cell);
}

WaypointPath plan_path(const OccupancyGrid& grid, const Vec3& start, const Vec3& goal,
                       double advance_radius) {
  const Cell s = grid.cell_of(start);
  const Cell g = grid.cell_of(goal);
  if (grid.occupied(s)) throw NoPathError("start is outside the map or in an occupied cell");
  if (grid.occupied(g)) throw NoPathError("goal is outside the map or in an occupied cell");

  const std::size_t n = static_cast<std::size_t>(grid.width()) * grid.height();
  auto idx = [&](Cell c) { return static_cast<std::size_t>(c.y) * grid.width() + c.x; };
  std::vector<GridCost> cost(n);
  std::vector<bool> seen(n, false);
  std::vector<bool> closed(n, false);
  std::vector<std::size_t> parent(n, n);

  struct Entry {
    double f;
    std::uint64_t seq;
    Cell cell;
    bool operator>(const Entry& o) const { return f != o.f ? f > o.f : seq > o.seq; }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;
  seen[idx(s)] = true;
  open.push({octile(s, g), seq++, s});

  bool found = false;
  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    const std::size_t ti = idx(top.cell);
    if (closed[ti]) continue;
    closed[ti] = true;
    if (top.cell == g) {
      found = true;
      break;
    }
    for (const Cell& mv : kMoves) {
      const Cell nb{top.cell.x + mv.x, top.cell.y + mv.y};
      if (!grid_move_allowed(grid, top.cell, nb)) continue;
      const std::size_t ni = idx(nb);
      if (closed[ni]) continue;
      GridCost c = cost[ti];
      (mv.x != 0 && mv.y != 0 ? c.diagonal : c.straight) += 1;
      if (!seen[ni] || c.cells() < cost[ni].cells()) {
        seen[ni] = true;
        cost[ni] = c;
        parent[ni] = ti;
        open.push({c.cells() + octile(nb, g), seq++, nb});
      }
    }
  }
  if (!found) throw NoPathError("goal is unreachable from start");

  WaypointPath path;
  path.advance_radius = advance_radius;
  path.cost = cost[idx(g)];
  for (std::size_t i = idx(g); i != n; i = parent[i]) {
    path.cells.push_back({static_cast<int>(i % grid.width()), static_cast<int>(i / grid.width())});
  }
  std::reverse(path.cells.begin(), path.cells.end());

  // Greedy string pulling over the cell sequence.
  const std::size_t last = path.cells.size() - 1;
  auto point = [&](std::size_t i) {
    Vec3 p = i == last ? goal : grid.center(path.cells[i]);
    p.z = start.z;
    return p;
  };
  Vec3 anchor = start;
  std::size_t j = 1;
  while (j <= last) {
    std::size_t reach = j;
    while (reach + 1 <= last && line_of_sight(grid, anchor, point(reach + 1))) ++reach;
    anchor = point(reach);
    path.waypoints.push_back(anchor);
    j = reach + 1;
  }
  if (path.waypoints.empty()) path.waypoints.push_back(point(last));
  return path;
}

WaypointTracker::WaypointTracker(WaypointPath path) : path_(std::move(path)) {
  if (path_.waypoints.empty()) throw std::invalid_argument("waypoint path is empty");
}

Vec3 WaypointTracker::update(const PlanarPose& pose) {
  const Vec3& r = pose.position();
  while (index_ + 1 < path_.waypoints.size()) {
    const Vec3& w = path_.waypoints[index_];
    if (std::hypot(w.x - r.x, w.y - r.y) >= path_.advance_radius) break;
    ++index_;
  }
  return body_from_world(pose, path_.waypoints[index_]);
}

}  // namespace vnav
