/*
 * config.cpp
 * socnav
 *
 * Copyright 2026 The socnav Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "socnav/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace socnav {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string &key, const std::string &text, const char *what) {
  throw Error(ErrorCode::InvalidArgument, "config key '" + key + "': expected " + what + ", got '" + text + "'");
}

}  // namespace

double parse_double_value(const std::string &key, const std::string &text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    bad_value(key, text, "a finite number");
  }
  return v;
}

long long parse_int_value(const std::string &key, const std::string &text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) bad_value(key, text, "an integer");
  return v;
}

bool parse_bool_value(const std::string &key, const std::string &text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  bad_value(key, text, "true or false");
}

std::vector<std::string> split_list(const std::string &text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(sep, start);
    const std::string item = trim(text.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (!item.empty()) out.push_back(item);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

KeyValues parse_key_values(const std::string &text) {
  KeyValues out;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
      throw Error(ErrorCode::Parse, "line " + std::to_string(line_no) + ": expected key = value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

std::string format_key_values(const KeyValues &items) {
  std::string out;
  for (const auto &[k, v] : items) out += k + " = " + v + "\n";
  return out;
}

namespace {

template <class T, class F>
void add_double(KeyRegistry<T> &r, const char *key, F field) {
  r.add(key, [field](const T &t) { return format_double(field(t)); },
        [field, key = std::string(key)](T &t, const std::string &v) { field(t) = parse_double_value(key, v); });
}

template <class T, class F>
void add_int(KeyRegistry<T> &r, const char *key, F field) {
  r.add(key, [field](const T &t) { return std::to_string(field(t)); },
        [field, key = std::string(key)](T &t, const std::string &v) {
          using V = std::remove_reference_t<decltype(field(t))>;
          const long long x = parse_int_value(key, v);
          if constexpr (std::is_unsigned_v<V>) {
            if (x < 0) bad_value(key, v, "a nonnegative integer");
          }
          field(t) = static_cast<V>(x);
        });
}

template <class T, class F>
void add_bool(KeyRegistry<T> &r, const char *key, F field) {
  r.add(key, [field](const T &t) { return std::string(field(t) ? "true" : "false"); },
        [field, key = std::string(key)](T &t, const std::string &v) { field(t) = parse_bool_value(key, v); });
}

template <class T, class F, class Name, class Parse>
void add_enum(KeyRegistry<T> &r, const char *key, F field, Name name, Parse parse, const char *valid) {
  r.add(key, [field, name](const T &t) { return std::string(name(field(t))); },
        [=, key = std::string(key)](T &t, const std::string &v) {
          const auto parsed = parse(trim(v));
          if (!parsed) bad_value(key, v, valid);
          field(t) = *parsed;
        });
}

#define SOCNAV_FIELD(expr) [](auto &c) -> auto & { return c.expr; }

KeyRegistry<EpisodeConfig> make_episode_registry() {
  using C = EpisodeConfig;
  KeyRegistry<C> r;
  add_double(r, "dt", SOCNAV_FIELD(dt));
  add_int(r, "max_steps", SOCNAV_FIELD(max_steps));
  add_double(r, "goal_radius", SOCNAV_FIELD(goal_radius));
  add_double(r, "ped_collision_dist", SOCNAV_FIELD(ped_collision_dist));
  add_double(r, "robot_radius", SOCNAV_FIELD(robot_radius));
  add_double(r, "planning_margin", SOCNAV_FIELD(planning_margin));
  add_double(r, "v_max", SOCNAV_FIELD(v_max));
  add_double(r, "omega_max", SOCNAV_FIELD(omega_max));
  add_int(r, "wall_hits_for_random", SOCNAV_FIELD(wall_hits_for_random));
  add_double(r, "d_norm", SOCNAV_FIELD(d_norm));
  add_enum(r, "global_planner", SOCNAV_FIELD(planner), global_planner_name, parse_global_planner,
           "one of ppp, astar, fixed");
  add_double(r, "waypoint_spacing", SOCNAV_FIELD(waypoint_spacing));
  add_double(r, "waypoint_reach", SOCNAV_FIELD(waypoint_reach));
  add_double(r, "replan_trigger", SOCNAV_FIELD(replan_trigger));
  add_bool(r, "observations", SOCNAV_FIELD(build_observations));

  add_double(r, "reward.goal", SOCNAV_FIELD(reward.goal));
  add_double(r, "reward.ped_collision", SOCNAV_FIELD(reward.ped_collision));
  add_double(r, "reward.wall_collision", SOCNAV_FIELD(reward.wall_collision));
  add_double(r, "reward.waypoint", SOCNAV_FIELD(reward.waypoint));
  add_double(r, "reward.waypoint_radius", SOCNAV_FIELD(reward.waypoint_radius));
  add_double(r, "reward.w1", SOCNAV_FIELD(reward.w1));
  add_double(r, "reward.w2", SOCNAV_FIELD(reward.w2));
  add_double(r, "reward.d_thresh", SOCNAV_FIELD(reward.d_thresh));
  add_double(r, "reward.d_col", SOCNAV_FIELD(reward.d_col));
  add_double(r, "reward.timestep", SOCNAV_FIELD(reward.timestep));
  add_bool(r, "reward.use_goal", SOCNAV_FIELD(reward.use_goal));
  add_bool(r, "reward.use_ped_collision", SOCNAV_FIELD(reward.use_ped_collision));
  add_bool(r, "reward.use_wall_collision", SOCNAV_FIELD(reward.use_wall_collision));
  add_bool(r, "reward.use_waypoint", SOCNAV_FIELD(reward.use_waypoint));
  add_bool(r, "reward.use_timestep", SOCNAV_FIELD(reward.use_timestep));
  add_bool(r, "reward.use_wp_distance", SOCNAV_FIELD(reward.use_wp_distance));
  add_bool(r, "reward.use_ped_avoid", SOCNAV_FIELD(reward.use_ped_avoid));
  add_bool(r, "reward.use_wp_orient", SOCNAV_FIELD(reward.use_wp_orient));

  add_double(r, "sensor.fov", SOCNAV_FIELD(sensor.fov));
  add_double(r, "sensor.range", SOCNAV_FIELD(sensor.range));
  add_int(r, "sensor.ray_count", SOCNAV_FIELD(sensor.ray_count));

  add_double(r, "gaussian.amplitude", SOCNAV_FIELD(gaussian.amplitude));
  add_double(r, "gaussian.w_x", SOCNAV_FIELD(gaussian.w_x));
  add_double(r, "gaussian.w_y", SOCNAV_FIELD(gaussian.w_y));
  add_int(r, "gaussian.forward_shift", SOCNAV_FIELD(gaussian.forward_shift));
  add_double(r, "gaussian.cell_size", SOCNAV_FIELD(gaussian.cell_size));
  add_double(r, "gaussian.max_distance", SOCNAV_FIELD(gaussian.max_distance));
  add_enum(r, "gaussian.proximity", SOCNAV_FIELD(gaussian.proximity), proximity_mode_name, parse_proximity_mode,
           "one of as_written, inverse");
  add_double(r, "gaussian.weight", SOCNAV_FIELD(gaussian.weight));

  add_double(r, "ped.radius", SOCNAV_FIELD(pedestrians.radius));
  add_double(r, "ped.preferred_speed", SOCNAV_FIELD(pedestrians.preferred_speed));
  add_double(r, "ped.max_speed", SOCNAV_FIELD(pedestrians.max_speed));
  add_double(r, "ped.neighbor_distance", SOCNAV_FIELD(pedestrians.neighbor_distance));
  add_int(r, "ped.max_neighbors", SOCNAV_FIELD(pedestrians.max_neighbors));
  add_double(r, "ped.time_horizon_agents", SOCNAV_FIELD(pedestrians.time_horizon_agents));
  add_double(r, "ped.time_horizon_obstacles", SOCNAV_FIELD(pedestrians.time_horizon_obstacles));
  add_double(r, "ped.goal_tolerance", SOCNAV_FIELD(pedestrians.goal_tolerance));
  add_double(r, "ped.route_spacing", SOCNAV_FIELD(pedestrians.route_spacing));
  return r;
}

KeyRegistry<MapGenParams> make_mapgen_registry() {
  KeyRegistry<MapGenParams> r;
  add_double(r, "width", SOCNAV_FIELD(width));
  add_double(r, "height", SOCNAV_FIELD(height));
  add_double(r, "resolution", SOCNAV_FIELD(resolution));
  add_double(r, "min_room", SOCNAV_FIELD(min_room));
  add_double(r, "wall_thickness", SOCNAV_FIELD(wall_thickness));
  add_double(r, "corridor_width", SOCNAV_FIELD(corridor_width));
  add_double(r, "clutter_density", SOCNAV_FIELD(clutter_density));
  add_double(r, "clutter_min", SOCNAV_FIELD(clutter_min));
  add_double(r, "clutter_max", SOCNAV_FIELD(clutter_max));
  add_double(r, "clutter_gap", SOCNAV_FIELD(clutter_gap));
  return r;
}

KeyRegistry<ScenarioParams> make_scenario_registry() {
  KeyRegistry<ScenarioParams> r;
  add_double(r, "min_geodesic", SOCNAV_FIELD(min_geodesic));
  add_double(r, "max_geodesic", SOCNAV_FIELD(max_geodesic));
  add_int(r, "max_attempts", SOCNAV_FIELD(max_attempts));
  add_double(r, "ped_robot_clearance", SOCNAV_FIELD(ped_robot_clearance));
  add_double(r, "ped_separation", SOCNAV_FIELD(ped_separation));
  add_double(r, "ped_goal_min_distance", SOCNAV_FIELD(ped_goal_min_distance));
  return r;
}

KeyRegistry<DwaConfig> make_dwa_registry() {
  KeyRegistry<DwaConfig> r;
  add_double(r, "alpha", SOCNAV_FIELD(alpha));
  add_double(r, "beta", SOCNAV_FIELD(beta));
  add_double(r, "gamma", SOCNAV_FIELD(gamma));
  add_double(r, "linear_accel", SOCNAV_FIELD(linear_accel));
  add_double(r, "angular_accel", SOCNAV_FIELD(angular_accel));
  add_double(r, "horizon", SOCNAV_FIELD(horizon));
  add_int(r, "v_samples", SOCNAV_FIELD(v_samples));
  add_int(r, "omega_samples", SOCNAV_FIELD(omega_samples));
  add_double(r, "clearance_range", SOCNAV_FIELD(clearance_range));
  add_bool(r, "predict_pedestrians", SOCNAV_FIELD(predict_pedestrians));
  return r;
}

#undef SOCNAV_FIELD

}  // namespace

const KeyRegistry<EpisodeConfig> &episode_registry() {
  static const KeyRegistry<EpisodeConfig> r = make_episode_registry();
  return r;
}

const KeyRegistry<MapGenParams> &mapgen_registry() {
  static const KeyRegistry<MapGenParams> r = make_mapgen_registry();
  return r;
}

const KeyRegistry<ScenarioParams> &scenario_registry() {
  static const KeyRegistry<ScenarioParams> r = make_scenario_registry();
  return r;
}

const KeyRegistry<DwaConfig> &dwa_registry() {
  static const KeyRegistry<DwaConfig> r = make_dwa_registry();
  return r;
}

}  // namespace socnav
