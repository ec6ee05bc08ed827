/*
 * crowd.hpp
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

#ifndef SOCNAV_CROWD_HPP
#define SOCNAV_CROWD_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socnav/geometry.hpp"
#include "socnav/gridmap.hpp"
#include "socnav/rng.hpp"

namespace socnav {

enum class CrowdMode { Cooperative, Uncooperative };

const char *crowd_mode_name(CrowdMode mode);
std::optional<CrowdMode> parse_crowd_mode(const std::string &name);

/**
 * A velocity-space constraint. Velocities on the left of `direction` through
 * `point` are permitted, i.e. det(direction, v - point) >= 0.
 */
struct HalfPlane {
  Vec2 point;
  Vec2 direction;

  bool operator==(const HalfPlane &) const = default;
};

/// Default ORCA and pedestrian parameters. None of these are pinned by the
/// benchmark definition; they are surfaced in the episode configuration.
struct PedestrianParams {
  double radius = 0.15;
  double preferred_speed = 0.5;
  double max_speed = 0.6;
  double neighbor_distance = 5.0;
  std::size_t max_neighbors = 10;
  double time_horizon_agents = 2.0;
  double time_horizon_obstacles = 1.0;
  double goal_tolerance = 0.3;
  double route_spacing = 0.5;

  bool operator==(const PedestrianParams &) const = default;
};

struct Agent {
  int id = 0;
  Vec2 position;
  Vec2 velocity;
  double radius = 0.15;
  double preferred_speed = 0.5;
  double max_speed = 0.6;
  Vec2 goal;
  double neighbor_distance = 5.0;
  std::size_t max_neighbors = 10;
  double time_horizon_agents = 2.0;
  double time_horizon_obstacles = 1.0;
  double goal_tolerance = 0.3;

  /// Direction of the last nonzero velocity, radians.
  double heading = 0.0;
  bool goal_reached = false;

  /// Route to the goal; the last point is the goal. Empty means straight line.
  std::vector<Vec2> route;
  std::size_t route_cursor = 0;

  static Agent with_params(int id, Vec2 position, Vec2 goal, const PedestrianParams &p);

  bool operator==(const Agent &) const = default;
};

struct WallSegment {
  Vec2 a;
  Vec2 b;
};

/// Occupied-cell boundaries as merged straight segments, bucketed for range queries.
class WallIndex {
 public:
  WallIndex() = default;
  explicit WallIndex(const OccupancyGrid &grid, double bucket_size = 2.0);

  std::span<const WallSegment> segments() const { return segments_; }

  /// Segments whose closest point lies within `range` of `p`, in index order.
  std::vector<WallSegment> near(const Vec2 &p, double range) const;

 private:
  std::vector<WallSegment> segments_;
  std::vector<std::vector<std::size_t>> buckets_;
  Vec2 origin_;
  double bucket_size_ = 2.0;
  int bx_ = 0;
  int by_ = 0;
};

/// The robot as seen by the crowd.
struct RobotBody {
  Vec2 position;
  Vec2 velocity;
  double radius = 0.15;
};

/**
 * ORCA constraints for `agent`: one per wall segment within the obstacle range
 * (full responsibility), followed by one per neighbor within
 * neighbor_distance (nearest first, at most max_neighbors, responsibility
 * one half). Returns the constraints and the count of leading wall lines.
 */
struct OrcaConstraints {
  std::vector<HalfPlane> lines;
  std::size_t wall_lines = 0;
};

OrcaConstraints orca_halfplanes(const Agent &agent, std::span<const Agent> neighbors,
                                std::span<const WallSegment> walls, double dt);

/**
 * Velocity closest to `preferred` within the speed disc satisfying every
 * half-plane. When no such velocity exists, returns the velocity minimizing the
 * maximum violation over lines past the first `hard_lines`, which are kept.
 */
Vec2 solve_velocity_lp(std::span<const HalfPlane> lines, const Vec2 &preferred, double max_speed,
                       std::size_t hard_lines = 0);

/// Velocity toward the agent's next route point at preferred speed, arriving
/// exactly at the goal when within one step.
Vec2 preferred_velocity(const Agent &agent, double dt);

/// Per-agent constraint sets computed from one snapshot, as used by step_crowd.
std::vector<OrcaConstraints> crowd_constraints(std::span<const Agent> agents, const RobotBody &robot,
                                               const WallIndex &walls, CrowdMode mode, double dt);

/**
 * Advances every agent by one step. Constraints come from the pre-step
 * snapshot, then all agents integrate by forward Euler. In Cooperative mode
 * the robot is an ORCA neighbor of every pedestrian.
 */
std::vector<Agent> step_crowd(std::span<const Agent> agents, const RobotBody &robot,
                              const WallIndex &walls, CrowdMode mode, double dt);

/**
 * Samples a new goal uniformly over non-lethal cells reachable from the
 * agent's cell in `traversable` and recomputes the route.
 */
Agent reassign_goal(const Agent &agent, const Costmap &traversable, Rng &rng,
                    double route_spacing = 0.5);

/// Route from `from` to `goal` on `traversable`; a single-point route to the goal
/// when no grid path exists.
std::vector<Vec2> plan_route(const Costmap &traversable, const Vec2 &from, const Vec2 &goal,
                             double spacing);

}  // namespace socnav

#endif  // SOCNAV_CROWD_HPP
