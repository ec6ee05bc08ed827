/*
 * sensing.hpp
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

#ifndef SOCNAV_SENSING_HPP
#define SOCNAV_SENSING_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "socnav/crowd.hpp"
#include "socnav/geometry.hpp"
#include "socnav/gridmap.hpp"

namespace socnav {

struct SensorSpec {
  double fov = kPi / 2.0;
  double range = 5.0;
  int ray_count = 180;

  void validate() const;
  bool operator==(const SensorSpec &) const = default;
};

struct PedestrianEstimate {
  int id = 0;
  double distance = 0.0;
  /// Robot-frame bearing, (-pi, pi].
  double bearing = 0.0;
  /// Pedestrian heading relative to the robot heading, (-pi, pi].
  double relative_heading = 0.0;
  Vec2 world_position;
  double world_heading = 0.0;
  Vec2 world_velocity;
  double radius = 0.15;
};

/// 100 x 100 robot-centered, robot-aligned binary map at 0.1 m per cell.
///
/// Row r covers robot-frame x in [(r - 50) * 0.1, (r - 49) * 0.1), so rows grow
/// forward; column c covers y in [(c - 50) * 0.1, (c - 49) * 0.1), so columns
/// grow to the left. The robot sits at the shared corner of the four center cells.
struct LocalMap {
  static constexpr int kSize = 100;
  static constexpr double kCellSize = 0.1;

  std::vector<std::uint8_t> cells = std::vector<std::uint8_t>(kSize * kSize, 0);

  std::uint8_t at(int row, int col) const { return cells[static_cast<std::size_t>(row * kSize + col)]; }
  void set(int row, int col, std::uint8_t v) { cells[static_cast<std::size_t>(row * kSize + col)] = v; }
  std::size_t count() const;

  /// Robot-frame center of cell (row, col).
  static Vec2 cell_center(int row, int col) {
    return {(row - kSize / 2 + 0.5) * kCellSize, (col - kSize / 2 + 0.5) * kCellSize};
  }

  bool operator==(const LocalMap &) const = default;
};

/// Distance along the ray to the first Occupied (or out-of-grid) cell
/// boundary, capped at max_range. Zero when the origin cell is occupied.
double raycast(const OccupancyGrid &grid, const Vec2 &origin, double angle, double max_range);

/// `ray_count` ranges spread evenly across the field of view, right to left.
std::vector<double> depth_scan(const OccupancyGrid &grid, const Pose &pose, const SensorSpec &spec);

/// Pedestrians inside the field of view, within range, with a clear line of
/// sight to their center; sorted by ascending distance.
std::vector<PedestrianEstimate> visible_pedestrians(const Pose &robot, std::span<const Agent> agents,
                                                    const OccupancyGrid &grid,
                                                    const SensorSpec &spec);

/// Robot-frame occupancy sampled at cell centers; out-of-grid points are occupied.
LocalMap ego_local_map(const OccupancyGrid &grid, const Pose &robot);

/// Cells whose centers lie within a visible pedestrian's radius of its center.
LocalMap pedestrian_map(std::span<const PedestrianEstimate> visible, const Pose &robot);

}  // namespace socnav

#endif  // SOCNAV_SENSING_HPP
