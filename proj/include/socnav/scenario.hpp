/*
 * scenario.hpp
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

#ifndef SOCNAV_SCENARIO_HPP
#define SOCNAV_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "socnav/episode.hpp"
#include "socnav/gridmap.hpp"
#include "socnav/rng.hpp"

namespace socnav {

/// Procedural indoor layout: BSP rooms joined by L-shaped corridors, plus box clutter.
struct MapGenParams {
  double width = 20.0;
  double height = 16.0;
  double resolution = 0.1;
  /// Smallest BSP leaf side, meters.
  double min_room = 4.0;
  double wall_thickness = 0.2;
  double corridor_width = 1.2;
  /// Fraction of room floor covered by clutter boxes (approximate).
  double clutter_density = 0.03;
  double clutter_min = 0.3;
  double clutter_max = 0.8;
  /// Minimum free gap kept around every clutter box.
  double clutter_gap = 0.6;

  void validate() const;
  bool operator==(const MapGenParams &) const = default;
};

/// Deterministic in (seed, params). The Free region is one 4-connected component.
OccupancyGrid generate_indoor_map(std::uint64_t seed, const MapGenParams &params);

/// 4-connected BFS step counts over non-lethal cells from `start`; -1 where unreachable.
std::vector<int> bfs_steps(const Costmap &costmap, const Cell &start);

struct ScenarioParams {
  double min_geodesic = 5.0;
  double max_geodesic = 15.0;
  int max_attempts = 10000;
  double ped_robot_clearance = 1.0;
  double ped_separation = 0.5;
  double ped_goal_min_distance = 1.0;

  void validate() const;
  bool operator==(const ScenarioParams &) const = default;
};

/// Shortest 8-connected path length in meters over the unit-cost robot costmap; nullopt when unreachable.
std::optional<double> geodesic_distance(const World &world, const Cell &a, const Cell &b);

/**
 * Rejection-samples robot start and goal (cell centers, geodesic distance
 * in [min_geodesic, max_geodesic]) and pedestrian starts and goals over cells
 * reachable from the robot start. Throws InvalidScenario when the attempt cap
 * is exceeded.
 */
Scenario sample_scenario(const World &world, Rng &rng, std::size_t n_pedestrians, CrowdMode mode,
                         const ScenarioParams &params = {});

/// Scenario derived from a single seed; `seed` is stored as the scenario seed.
Scenario scenario_for_seed(const World &world, std::uint64_t seed, std::size_t n_pedestrians, CrowdMode mode,
                           const ScenarioParams &params = {});

/// Map reference: "file:<path>" (image plus sidecar) or "gen:<seed>".
struct MapRef {
  enum class Kind { File, Generated };
  Kind kind = Kind::Generated;
  std::string path;
  std::uint64_t seed = 0;

  static MapRef parse(const std::string &text);
  std::string str() const;
};

OccupancyGrid resolve_map(const MapRef &ref, const MapGenParams &params);

}  // namespace socnav

#endif  // SOCNAV_SCENARIO_HPP
