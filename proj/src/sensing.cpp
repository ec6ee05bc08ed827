/*
 * sensing.cpp
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

#include "socnav/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "socnav/error.hpp"

namespace socnav {

void SensorSpec::validate() const {
  if (!(fov > 0.0 && fov <= 2.0 * kPi)) throw Error(ErrorCode::InvalidArgument, "sensor fov must be in (0, 2pi]");
  if (!(range > 0.0)) throw Error(ErrorCode::InvalidArgument, "sensor range must be > 0");
  if (ray_count < 2) throw Error(ErrorCode::InvalidArgument, "sensor ray_count must be >= 2");
}

std::size_t LocalMap::count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](std::uint8_t v) { return v != 0; }));
}

double raycast(const OccupancyGrid &grid, const Vec2 &origin, double angle, double max_range) {
  const GridGeometry &g = grid.geometry();
  const auto start = g.world_to_cell(origin);
  if (!start || grid.occupied(*start)) return 0.0;

  const double res = g.resolution;
  const Vec2 dir = unit_from_angle(angle);
  // Grid-local coordinates in cell units.
  const double px = (origin.x - g.origin.x) / res;
  const double py = (origin.y - g.origin.y) / res;
  Cell c = *start;

  constexpr double inf = std::numeric_limits<double>::infinity();
  const int step_x = dir.x > 0.0 ? 1 : (dir.x < 0.0 ? -1 : 0);
  const int step_y = dir.y > 0.0 ? 1 : (dir.y < 0.0 ? -1 : 0);
  const double delta_x = step_x != 0 ? res / std::fabs(dir.x) : inf;
  const double delta_y = step_y != 0 ? res / std::fabs(dir.y) : inf;
  double t_max_x = inf;
  double t_max_y = inf;
  if (step_x > 0) t_max_x = (c.x + 1 - px) * res / dir.x;
  if (step_x < 0) t_max_x = (c.x - px) * res / dir.x;
  if (step_y > 0) t_max_y = (c.y + 1 - py) * res / dir.y;
  if (step_y < 0) t_max_y = (c.y - py) * res / dir.y;

  while (true) {
    double t = 0.0;
    if (t_max_x < t_max_y) {
      t = t_max_x;
      c.x += step_x;
      t_max_x += delta_x;
    } else {
      t = t_max_y;
      c.y += step_y;
      t_max_y += delta_y;
    }
    if (t >= max_range) return max_range;
    if (grid.occupied(c)) return std::max(0.0, t);
  }
}

std::vector<double> depth_scan(const OccupancyGrid &grid, const Pose &pose, const SensorSpec &spec) {
  spec.validate();
  std::vector<double> out(static_cast<std::size_t>(spec.ray_count));
  const double step = spec.fov / (spec.ray_count - 1);
  for (int i = 0; i < spec.ray_count; ++i) {
    const double rel = -spec.fov / 2.0 + step * i;
    out[static_cast<std::size_t>(i)] = raycast(grid, pose.position(), pose.theta + rel, spec.range);
  }
  return out;
}

std::vector<PedestrianEstimate> visible_pedestrians(const Pose &robot, std::span<const Agent> agents,
                                                    const OccupancyGrid &grid,
                                                    const SensorSpec &spec) {
  std::vector<PedestrianEstimate> out;
  const Vec2 rp = robot.position();
  for (const Agent &a : agents) {
    const Vec2 d = a.position - rp;
    const double dist = norm(d);
    if (dist > spec.range) continue;
    const double bearing = dist > 0.0 ? bearing_to(robot, a.position) : 0.0;
    if (std::fabs(bearing) > spec.fov / 2.0) continue;
    if (dist > 0.0 && raycast(grid, rp, std::atan2(d.y, d.x), dist) < dist - 1e-9) continue;

    PedestrianEstimate e;
    e.id = a.id;
    e.distance = dist;
    e.bearing = bearing;
    e.relative_heading = wrap_angle(a.heading - robot.theta);
    e.world_position = a.position;
    e.world_heading = a.heading;
    e.world_velocity = a.velocity;
    e.radius = a.radius;
    out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PedestrianEstimate &a, const PedestrianEstimate &b) { return a.distance < b.distance; });
  return out;
}

LocalMap ego_local_map(const OccupancyGrid &grid, const Pose &robot) {
  LocalMap m;
  const double c = std::cos(robot.theta);
  const double s = std::sin(robot.theta);
  for (int r = 0; r < LocalMap::kSize; ++r) {
    for (int col = 0; col < LocalMap::kSize; ++col) {
      const Vec2 local = LocalMap::cell_center(r, col);
      const Vec2 world{robot.x + c * local.x - s * local.y, robot.y + s * local.x + c * local.y};
      if (grid.occupied_at(world)) m.set(r, col, 1);
    }
  }
  return m;
}

LocalMap pedestrian_map(std::span<const PedestrianEstimate> visible, const Pose &robot) {
  LocalMap m;
  const double c = std::cos(robot.theta);
  const double s = std::sin(robot.theta);
  const double cs = LocalMap::kCellSize;
  const int half = LocalMap::kSize / 2;
  for (const PedestrianEstimate &p : visible) {
    const Vec2 d = p.world_position - robot.position();
    const Vec2 local{c * d.x + s * d.y, -s * d.x + c * d.y};
    const int r0 = std::max(0, static_cast<int>(std::floor((local.x - p.radius) / cs)) + half - 1);
    const int r1 = std::min(LocalMap::kSize - 1, static_cast<int>(std::floor((local.x + p.radius) / cs)) + half + 1);
    const int c0 = std::max(0, static_cast<int>(std::floor((local.y - p.radius) / cs)) + half - 1);
    const int c1 = std::min(LocalMap::kSize - 1, static_cast<int>(std::floor((local.y + p.radius) / cs)) + half + 1);
    for (int r = r0; r <= r1; ++r) {
      for (int col = c0; col <= c1; ++col) {
        if (abs_sq(LocalMap::cell_center(r, col) - local) <= p.radius * p.radius) m.set(r, col, 1);
      }
    }
  }
  return m;
}

}  // namespace socnav
