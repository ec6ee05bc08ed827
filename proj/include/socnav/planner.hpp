/*
 * planner.hpp
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

#ifndef SOCNAV_PLANNER_HPP
#define SOCNAV_PLANNER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socnav/geometry.hpp"
#include "socnav/gridmap.hpp"
#include "socnav/sensing.hpp"

namespace socnav {

/// How the Gaussian spread scales with the robot-pedestrian distance.
enum class ProximityMode {
  /// spread ratio r = d_ped / max_distance (nearer pedestrians get narrower Gaussians)
  AsWritten,
  /// r = clamp(1 - d_ped / max_distance, 0.1, 1) (nearer pedestrians get wider Gaussians)
  Inverse,
};

const char *proximity_mode_name(ProximityMode mode);
std::optional<ProximityMode> parse_proximity_mode(const std::string &name);

struct GaussianParams {
  double amplitude = 1.0;
  double w_x = 1.0;
  double w_y = 0.7;
  /// Shift of the Gaussian center along the pedestrian heading, in cells.
  int forward_shift = 2;
  /// Cell size used to convert forward_shift to meters.
  double cell_size = 0.1;
  double max_distance = 5.0;
  ProximityMode proximity = ProximityMode::Inverse;
  double weight = 20.0;

  void validate() const;
  bool operator==(const GaussianParams &) const = default;
};

/// Center and spreads of one pedestrian's Gaussian.
struct GaussianShape {
  Vec2 center;
  Vec2 heading;
  double sigma_x = 1.0;
  double sigma_y = 0.7;
};

GaussianShape gaussian_shape(const PedestrianEstimate &ped, const GaussianParams &params);

/// Anisotropic heading-aligned Gaussian evaluated at `query`, in [0, amplitude].
double gaussian_cost(const Vec2 &query, const PedestrianEstimate &ped, const GaussianParams &params);

/// cost = base + weight * sum of Gaussians; lethal cells stay lethal. Each
/// Gaussian is evaluated only within 3 sigma_x of its center.
Costmap inflate_pedestrians(const Costmap &base, std::span<const PedestrianEstimate> peds,
                            const GaussianParams &params);

/// Marks every cell within `radius` of a pedestrian center lethal.
Costmap stamp_static_pedestrians(const Costmap &base, std::span<const PedestrianEstimate> peds,
                                 double radius);

enum class PlanStatus { Ok, NoPath, InvalidEndpoint };

struct GridPath {
  std::vector<Cell> cells;
  /// Sum over steps of step length in cells (1 or sqrt 2) times the cost of the entered cell.
  double cost = 0.0;
};

struct PlanResult {
  PlanStatus status = PlanStatus::NoPath;
  GridPath path;
};

/// 8-connected A* without corner cutting and with a Euclidean cell-distance heuristic.
PlanResult plan_astar(const Costmap &costmap, const Vec2 &start, const Vec2 &goal);
PlanResult plan_astar(const Costmap &costmap, const Cell &start, const Cell &goal);

/// Metric length of a cell path.
double path_length(const GridGeometry &geometry, std::span<const Cell> cells);

struct Waypoints {
  std::vector<Vec2> points;
  double spacing = 0.5;
  std::size_t cursor = 0;

  bool empty() const { return points.empty(); }
  const Vec2 &current() const { return points[cursor]; }
  bool operator==(const Waypoints &) const = default;
};

/// Samples the path every `spacing` meters of arc length from its start, always
/// ending with the last cell. Paths shorter than `spacing` yield only the end.
Waypoints extract_waypoints(const GridGeometry &geometry, std::span<const Cell> path, double spacing);

/**
 * Moves the cursor past waypoints the robot has reached (within
 * `reach_radius`) or passed along the path. Never moves past the last point.
 */
void advance_cursor(Waypoints &wp, const Vec2 &robot, double reach_radius = 0.3);

/// True iff a visible pedestrian is within `trigger_distance` of any waypoint at or after the cursor.
bool should_replan(const Waypoints &wp, std::span<const PedestrianEstimate> visible,
                   double trigger_distance = 0.5);

enum class KeepReason { Infeasible, TimeBudgetExceeded };

struct PlanOutcome {
  enum class Kind { NewPlan, KeptOldPlan, NoPath };

  Kind kind = Kind::NoPath;
  Waypoints waypoints;
  KeepReason reason = KeepReason::Infeasible;
  double path_length = 0.0;
};

/**
 * Plans on the pedestrian-aware costmap. Keeps the old plan when no path
 * exists or when the new path cannot be driven at v_max in the remaining
 * steps; otherwise returns fresh waypoints with cursor 0.
 */
PlanOutcome replan_or_keep(const Waypoints &old, const Costmap &costmap, const Pose &robot,
                           const Vec2 &goal, int steps_remaining, double dt, double v_max,
                           double spacing = 0.5);

/// Portable text dump of a costmap plus optional pedestrians and a path, for rendering.
std::string dump_costmap(const Costmap &costmap, std::span<const PedestrianEstimate> peds,
                         std::span<const Vec2> path, double weight);

struct CostmapDump {
  Costmap costmap;
  std::vector<PedestrianEstimate> peds;
  std::vector<Vec2> path;
  double weight = 20.0;
};

CostmapDump parse_costmap_dump(const std::string &text);

}  // namespace socnav

#endif  // SOCNAV_PLANNER_HPP
