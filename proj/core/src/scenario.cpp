#include "vnav/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "vnav/clearance.hpp"

namespace vnav {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) fail(join(path, key), "unknown field");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

double number(const json& obj, const char* key, const std::string& path, double fallback) {
  const json* v = find(obj, key);
  return v ? number(*v, join(path, key)) : fallback;
}

long integer(const json& obj, const char* key, const std::string& path, long fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) fail(join(path, key), "expected an integer");
  return v->get<long>();
}

bool boolean(const json& obj, const char* key, const std::string& path, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(join(path, key), "expected true or false");
  return v->get<bool>();
}

std::string text(const json& obj, const char* key, const std::string& path, const std::string& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(join(path, key), "expected a string");
  return v->get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& path, std::size_t min_n, std::size_t max_n) {
  if (!v.is_array() || v.size() < min_n || v.size() > max_n) {
    fail(path, min_n == max_n ? "expected an array of " + std::to_string(min_n) + " numbers"
                              : "expected an array of " + std::to_string(min_n) + " to " +
                                    std::to_string(max_n) + " numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Vec3 vec3(const json& v, const std::string& path) {
  const auto n = numbers(v, path, 3, 3);
  return {n[0], n[1], n[2]};
}

const json& required(const json& obj, const char* key, const std::string& path) {
  const json* v = find(obj, key);
  if (!v) fail(join(path, key), "required field is missing");
  return *v;
}

template <typename F>
void wrap(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

World parse_world(const json& j, const std::string& path) {
  check_keys(j, path, {"obstacles"});
  World w;
  const json* obs = find(j, "obstacles");
  if (!obs) return w;
  if (!obs->is_array()) fail(join(path, "obstacles"), "expected an array");
  for (std::size_t i = 0; i < obs->size(); ++i) {
    const json& o = (*obs)[i];
    const std::string p = join(path, "obstacles") + "[" + std::to_string(i) + "]";
    if (!o.is_object()) fail(p, "expected an object");
    const std::string type = text(o, "type", p, "");
    if (type == "box") {
      check_keys(o, p, {"type", "min", "max", "transient"});
      Box b{vec3(required(o, "min", p), join(p, "min")), vec3(required(o, "max", p), join(p, "max")),
            boolean(o, "transient", p, false)};
      World single;
      single.boxes.push_back(b);
      wrap(p, [&] { single.validate(); });
      w.boxes.push_back(b);
    } else if (type == "prism") {
      check_keys(o, p, {"type", "vertices", "z_min", "z_max", "transient"});
      Prism pr;
      const json& verts = required(o, "vertices", p);
      if (!verts.is_array()) fail(join(p, "vertices"), "expected an array of [x, y] pairs");
      for (std::size_t k = 0; k < verts.size(); ++k) {
        const auto xy = numbers(verts[k], join(p, "vertices") + "[" + std::to_string(k) + "]", 2, 2);
        pr.vertices.push_back({xy[0], xy[1]});
      }
      pr.z_min = number(o, "z_min", p, 0.0);
      pr.z_max = number(o, "z_max", p, 2.0);
      pr.transient = boolean(o, "transient", p, false);
      World single;
      single.prisms.push_back(pr);
      wrap(p, [&] { single.validate(); });
      w.prisms.push_back(std::move(pr));
    } else {
      fail(join(p, "type"), "expected \"box\" or \"prism\"");
    }
  }
  return w;
}

void validate_rate_period(double hz, double dt, const std::string& path) {
  if (!(hz > 0.0)) fail(path, "must be > 0");
  const double ticks = 1.0 / (hz * dt);
  if (std::abs(ticks - std::round(ticks)) > 1e-6 || std::round(ticks) < 1.0) {
    fail(path, "period must be a whole multiple of rates.sim_dt");
  }
}

}  // namespace

int Rates::sensor_period_ticks() const { return static_cast<int>(std::lround(1.0 / (sensor_hz * sim_dt))); }
int Rates::mariner_period_ticks() const { return static_cast<int>(std::lround(1.0 / (mariner_hz * sim_dt))); }

void Scenario::validate() const {
  wrap("world", [&] { world.validate(); });
  wrap("vessel", [&] { vessel_params.validate(); });
  wrap("needles", [&] { needles.validate(); });
  wrap("filter", [&] { filter.validate(); });
  wrap("sensor", [&] { sensor.validate(); });
  if (!(rates.sim_dt > 0.0)) fail("rates.sim_dt", "must be > 0");
  validate_rate_period(rates.sensor_hz, rates.sim_dt, "rates.sensor_hz");
  validate_rate_period(rates.mariner_hz, rates.sim_dt, "rates.mariner_hz");
  if (!(planner.resolution > 0.0)) fail("planner.resolution", "must be > 0");
  if (planner.inflation_radius && !(*planner.inflation_radius >= 0.0)) fail("planner.inflation_radius", "must be >= 0");
  if (!(planner.advance_radius > 0.0)) fail("planner.advance_radius", "must be > 0");
  if (planner.bounds && !(planner.bounds->min_x < planner.bounds->max_x && planner.bounds->min_y < planner.bounds->max_y)) {
    fail("planner.bounds", "requires min < max");
  }
  if (!(termination.goal_tolerance > 0.0)) fail("termination.goal_tolerance", "must be > 0");
  if (!(termination.stuck_speed >= 0.0)) fail("termination.stuck_speed", "must be >= 0");
  if (!(termination.stuck_time > 0.0)) fail("termination.stuck_time", "must be > 0");
  if (!(duration_s > 0.0)) fail("duration_s", "must be > 0");
  if (world.contains(start.position())) fail("start", "lies inside an obstacle");
  if (true_clearance_alpha(start, world, vessel) < 1.0) fail("start", "vessel overlaps an obstacle");
  if (world.contains(goal)) fail("goal", "lies inside an obstacle");
}

Scenario parse_scenario(const std::string& body, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    // Byte offset -> line number for the diagnostic.
    const std::size_t upto = std::min<std::size_t>(e.byte, body.size());
    const long line = 1 + std::count(body.begin(), body.begin() + static_cast<long>(upto), '\n');
    throw ConfigError("line " + std::to_string(line) + ": JSON syntax error: " + e.what());
  }
  check_keys(j, "", {"name", "description", "world", "start", "goal", "vessel", "needles", "filter", "sensor",
                     "rates", "planner", "termination", "duration_s", "seed"});
  Scenario s;
  s.name = text(j, "name", "", s.name);
  s.description = text(j, "description", "", "");
  s.world = parse_world(required(j, "world", ""), "world");

  {
    const json& st = required(j, "start", "");
    check_keys(st, "start", {"position", "yaw"});
    const Vec3 pos = vec3(required(st, "position", "start"), "start.position");
    s.start = PlanarPose(pos, number(st, "yaw", "start", 0.0));
  }
  {
    const auto g = numbers(required(j, "goal", ""), "goal", 2, 3);
    s.goal = {g[0], g[1], s.start.position().z};
  }
  if (const json* v = find(j, "vessel")) {
    const std::string p = "vessel";
    check_keys(*v, p, {"semi_axes", "order", "beta", "delta", "n_max", "z_crop"});
    Vec3 axes{s.vessel.a(), s.vessel.b(), s.vessel.c()};
    if (const json* ax = find(*v, "semi_axes")) axes = vec3(*ax, join(p, "semi_axes"));
    const long order = integer(*v, "order", p, s.vessel.order());
    wrap(p, [&] { s.vessel = HyperEllipsoid(axes.x, axes.y, axes.z, static_cast<int>(order)); });
    s.vessel_params.beta = number(*v, "beta", p, s.vessel_params.beta);
    s.vessel_params.delta = number(*v, "delta", p, s.vessel_params.delta);
    const long n_max = integer(*v, "n_max", p, static_cast<long>(s.vessel_params.n_max));
    if (n_max < 1) fail(join(p, "n_max"), "must be >= 1");
    s.vessel_params.n_max = static_cast<std::size_t>(n_max);
    if (const json* zc = find(*v, "z_crop")) {
      if (zc->is_null()) {
        s.vessel_params.z_crop.reset();
      } else {
        const auto lohi = numbers(*zc, join(p, "z_crop"), 2, 2);
        s.vessel_params.z_crop = ZCrop{lohi[0], lohi[1]};
      }
    }
  }
  if (const json* v = find(j, "needles")) {
    const std::string p = "needles";
    check_keys(*v, p, {"semi_axes", "order", "count", "s_min", "s_max", "angles"});
    NeedleConfig& n = s.needles;
    if (const json* ax = find(*v, "semi_axes")) {
      const Vec3 a = vec3(*ax, join(p, "semi_axes"));
      n.a_bar = a.x;
      n.b_bar = a.y;
      n.c_bar = a.z;
    }
    n.d_bar = static_cast<int>(integer(*v, "order", p, n.d_bar));
    const long count = integer(*v, "count", p, static_cast<long>(n.n_needle));
    if (count < 1) fail(join(p, "count"), "must be >= 1");
    n.n_needle = static_cast<std::size_t>(count);
    n.s_min = number(*v, "s_min", p, n.s_min);
    n.s_max = number(*v, "s_max", p, n.s_max);
    if (const json* ang = find(*v, "angles")) n.custom_angles = numbers(*ang, join(p, "angles"), 1, 100000);
  }
  if (const json* v = find(j, "filter")) {
    const std::string p = "filter";
    check_keys(*v, p, {"gamma_bar", "k_v", "k_omega", "heading_deadband", "v_max", "omega_max"});
    FilterParams& f = s.filter;
    f.gamma_bar = number(*v, "gamma_bar", p, f.gamma_bar);
    if (const json* kv = find(*v, "k_v")) f.k_v = vec3(*kv, join(p, "k_v"));
    f.k_omega = number(*v, "k_omega", p, f.k_omega);
    f.heading_deadband = number(*v, "heading_deadband", p, f.heading_deadband);
    f.v_max = number(*v, "v_max", p, f.v_max);
    f.omega_max = number(*v, "omega_max", p, f.omega_max);
  }
  if (const json* v = find(j, "sensor")) {
    const std::string p = "sensor";
    check_keys(*v, p, {"channels", "rays_per_channel", "vertical_fov_deg", "max_range", "noise_sigma", "mount"});
    LidarSpec& l = s.sensor;
    l.n_channels = static_cast<int>(integer(*v, "channels", p, l.n_channels));
    l.rays_per_channel = static_cast<int>(integer(*v, "rays_per_channel", p, l.rays_per_channel));
    l.vertical_fov_deg = number(*v, "vertical_fov_deg", p, l.vertical_fov_deg);
    l.max_range = number(*v, "max_range", p, l.max_range);
    l.noise_sigma = number(*v, "noise_sigma", p, l.noise_sigma);
    if (const json* m = find(*v, "mount")) l.mount = vec3(*m, join(p, "mount"));
  }
  if (const json* v = find(j, "rates")) {
    const std::string p = "rates";
    check_keys(*v, p, {"sensor_hz", "mariner_hz", "sim_dt"});
    s.rates.sensor_hz = number(*v, "sensor_hz", p, s.rates.sensor_hz);
    s.rates.mariner_hz = number(*v, "mariner_hz", p, s.rates.mariner_hz);
    s.rates.sim_dt = number(*v, "sim_dt", p, s.rates.sim_dt);
  }
  if (const json* v = find(j, "planner")) {
    const std::string p = "planner";
    check_keys(*v, p, {"resolution", "inflation_radius", "advance_radius", "bounds", "bounds_margin", "map_file"});
    PlannerSettings& pl = s.planner;
    pl.resolution = number(*v, "resolution", p, pl.resolution);
    if (const json* ir = find(*v, "inflation_radius"); ir && !ir->is_null()) {
      pl.inflation_radius = number(*ir, join(p, "inflation_radius"));
    }
    pl.advance_radius = number(*v, "advance_radius", p, pl.advance_radius);
    if (const json* b = find(*v, "bounds"); b && !b->is_null()) {
      const auto bb = numbers(*b, join(p, "bounds"), 4, 4);
      pl.bounds = GridBounds{bb[0], bb[1], bb[2], bb[3]};
    }
    pl.bounds_margin = number(*v, "bounds_margin", p, pl.bounds_margin);
    if (const json* m = find(*v, "map_file"); m && !m->is_null()) {
      const std::filesystem::path mp = text(*v, "map_file", p, "");
      pl.map_file = mp.is_absolute() || base_dir.empty() ? mp : base_dir / mp;
    }
  }
  if (const json* v = find(j, "termination")) {
    const std::string p = "termination";
    check_keys(*v, p, {"goal_tolerance", "stuck_speed", "stuck_time"});
    s.termination.goal_tolerance = number(*v, "goal_tolerance", p, s.termination.goal_tolerance);
    s.termination.stuck_speed = number(*v, "stuck_speed", p, s.termination.stuck_speed);
    s.termination.stuck_time = number(*v, "stuck_time", p, s.termination.stuck_time);
  }
  s.duration_s = number(j, "duration_s", "", s.duration_s);
  const long seed = integer(j, "seed", "", static_cast<long>(s.seed));
  if (seed < 0) fail("seed", "must be >= 0");
  s.seed = static_cast<std::uint64_t>(seed);

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str(), path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string scenario_to_json(const Scenario& s) {
  ojson j;
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  ojson obstacles = ojson::array();
  for (const Box& b : s.world.boxes) {
    obstacles.push_back({{"type", "box"},
                         {"min", {b.min.x, b.min.y, b.min.z}},
                         {"max", {b.max.x, b.max.y, b.max.z}},
                         {"transient", b.transient}});
  }
  for (const Prism& p : s.world.prisms) {
    ojson verts = ojson::array();
    for (const Vec2& v : p.vertices) verts.push_back({v[0], v[1]});
    obstacles.push_back({{"type", "prism"},
                         {"vertices", verts},
                         {"z_min", p.z_min},
                         {"z_max", p.z_max},
                         {"transient", p.transient}});
  }
  j["world"] = {{"obstacles", obstacles}};
  const Vec3& r = s.start.position();
  j["start"] = {{"position", {r.x, r.y, r.z}}, {"yaw", s.start.yaw()}};
  j["goal"] = {s.goal.x, s.goal.y, s.goal.z};
  ojson vessel = {{"semi_axes", {s.vessel.a(), s.vessel.b(), s.vessel.c()}},
                  {"order", s.vessel.order()},
                  {"beta", s.vessel_params.beta},
                  {"delta", s.vessel_params.delta},
                  {"n_max", s.vessel_params.n_max}};
  if (s.vessel_params.z_crop) {
    vessel["z_crop"] = {s.vessel_params.z_crop->lo, s.vessel_params.z_crop->hi};
  } else {
    vessel["z_crop"] = nullptr;
  }
  j["vessel"] = vessel;
  const NeedleConfig& n = s.needles;
  ojson needles = {{"semi_axes", {n.a_bar, n.b_bar, n.c_bar}},
                   {"order", n.d_bar},
                   {"count", n.n_needle},
                   {"s_min", n.s_min},
                   {"s_max", n.s_max}};
  if (!n.custom_angles.empty()) needles["angles"] = n.custom_angles;
  j["needles"] = needles;
  const FilterParams& f = s.filter;
  j["filter"] = {{"gamma_bar", f.gamma_bar},
                 {"k_v", {f.k_v.x, f.k_v.y, f.k_v.z}},
                 {"k_omega", f.k_omega},
                 {"heading_deadband", f.heading_deadband},
                 {"v_max", f.v_max},
                 {"omega_max", f.omega_max}};
  const LidarSpec& l = s.sensor;
  j["sensor"] = {{"channels", l.n_channels},
                 {"rays_per_channel", l.rays_per_channel},
                 {"vertical_fov_deg", l.vertical_fov_deg},
                 {"max_range", l.max_range},
                 {"noise_sigma", l.noise_sigma},
                 {"mount", {l.mount.x, l.mount.y, l.mount.z}}};
  j["rates"] = {{"sensor_hz", s.rates.sensor_hz}, {"mariner_hz", s.rates.mariner_hz}, {"sim_dt", s.rates.sim_dt}};
  ojson planner = {{"resolution", s.planner.resolution}};
  if (s.planner.inflation_radius) planner["inflation_radius"] = *s.planner.inflation_radius;
  planner["advance_radius"] = s.planner.advance_radius;
  if (s.planner.bounds) {
    const GridBounds& b = *s.planner.bounds;
    planner["bounds"] = {b.min_x, b.min_y, b.max_x, b.max_y};
  }
  planner["bounds_margin"] = s.planner.bounds_margin;
  if (s.planner.map_file) planner["map_file"] = s.planner.map_file->string();
  j["planner"] = planner;
  j["termination"] = {{"goal_tolerance", s.termination.goal_tolerance},
                      {"stuck_speed", s.termination.stuck_speed},
                      {"stuck_time", s.termination.stuck_time}};
  j["duration_s"] = s.duration_s;
  j["seed"] = s.seed;
  return j.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << scenario_to_json(scenario);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace vnav
