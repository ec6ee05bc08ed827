/*
 * episode.hpp
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

#ifndef SOCNAV_EPISODE_HPP
#define SOCNAV_EPISODE_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "socnav/crowd.hpp"
#include "socnav/dwa.hpp"
#include "socnav/geometry.hpp"
#include "socnav/gridmap.hpp"
#include "socnav/planner.hpp"
#include "socnav/rng.hpp"
#include "socnav/sensing.hpp"

namespace socnav {

enum class Outcome { Running, Success, PedestrianCollision, Timeout };

const char *outcome_name(Outcome o);
std::optional<Outcome> parse_outcome(const std::string &name);

enum class GlobalPlannerKind {
  /// Gaussian-inflated replanning.
  PPP,
  /// Replanning with pedestrians stamped as static lethal discs.
  AStar,
  /// Plan once at reset, never replan.
  FixedAtStart,
};

const char *global_planner_name(GlobalPlannerKind k);
std::optional<GlobalPlannerKind> parse_global_planner(const std::string &name);

struct RewardConfig {
  double goal = 20.0;
  double ped_collision = -20.0;
  double wall_collision = -10.0;
  double waypoint = 0.8;
  double waypoint_radius = 0.1;
  double w1 = 0.3;
  double w2 = 0.3;
  double d_thresh = 1.0;
  double d_col = 0.3;
  double timestep = -0.001;

  bool use_goal = true;
  bool use_ped_collision = true;
  bool use_wall_collision = true;
  bool use_waypoint = true;
  bool use_timestep = true;
  bool use_wp_distance = true;
  bool use_ped_avoid = true;
  bool use_wp_orient = true;

  void validate() const;
  bool operator==(const RewardConfig &) const = default;
};

struct RewardBreakdown {
  double goal = 0.0;
  double ped_collision = 0.0;
  double wall_collision = 0.0;
  double waypoint = 0.0;
  double timestep = 0.0;
  double wp_distance = 0.0;
  double ped_avoid = 0.0;
  double wp_orient = 0.0;
  double total = 0.0;

  /// Sum of the eight terms in declaration order.
  double sum() const;
  bool operator==(const RewardBreakdown &) const = default;
};

/// Everything the reward needs from one transition.
struct RewardInputs {
  /// Distance and absolute bearing to the tracked waypoint before and after the step.
  double wp_distance_before = 0.0;
  double wp_distance_after = 0.0;
  double wp_bearing_before = 0.0;
  double wp_bearing_after = 0.0;
  /// Nearest visible pedestrian after the step, if any.
  std::optional<double> nearest_visible_ped;
  int waypoints_reached = 0;
  bool wall_hit = false;
  Outcome outcome = Outcome::Running;
};

RewardBreakdown compute_reward(const RewardInputs &in, const RewardConfig &cfg);

struct EpisodeConfig {
  double dt = 0.1;
  int max_steps = 500;
  double goal_radius = 0.3;
  double ped_collision_dist = 0.3;
  double robot_radius = 0.15;
  /// Extra static inflation for the planning costmap on top of robot_radius.
  double planning_margin = 0.15;
  double v_max = 0.5;
  double omega_max = kPi / 2.0;
  int wall_hits_for_random = 5;
  /// Normalization distance for goal and waypoint features.
  double d_norm = 15.0;
  GlobalPlannerKind planner = GlobalPlannerKind::PPP;
  double waypoint_spacing = 0.5;
  double waypoint_reach = 0.3;
  double replan_trigger = 0.5;
  /// Skip observation assembly (maps and features) when nobody reads it.
  bool build_observations = true;

  RewardConfig reward;
  SensorSpec sensor;
  GaussianParams gaussian;
  PedestrianParams pedestrians;

  void validate() const;
  bool operator==(const EpisodeConfig &) const = default;
};

/// Start configuration of one episode.
struct Scenario {
  std::uint64_t seed = 0;
  CrowdMode mode = CrowdMode::Uncooperative;
  Pose robot_start;
  Vec2 robot_goal;
  std::vector<Vec2> ped_starts;
  std::vector<Vec2> ped_goals;

  std::size_t n_pedestrians() const { return ped_starts.size(); }
  bool operator==(const Scenario &) const = default;
};

struct Action {
  double v = 0.0;
  double omega = 0.0;
  bool operator==(const Action &) const = default;
};

/// Normalized observation. Every scalar lies in [-1, 1].
struct Observation {
  static constexpr std::size_t kWaypointSlots = 5;
  static constexpr std::size_t kPedestrianSlots = 5;
  static constexpr std::size_t kLength = 2 + 2 * LocalMap::kSize * LocalMap::kSize + 2 +
                                         2 * kWaypointSlots + 4 * kPedestrianSlots;

  std::array<double, 2> goal{};
  LocalMap ego_map;
  LocalMap ped_map;
  std::array<double, 2> prev_action{};
  std::array<double, 2 * kWaypointSlots> waypoints{};
  std::array<double, 3 * kPedestrianSlots> pedestrians{};
  std::array<double, kPedestrianSlots> ped_mask{};

  /// goal, ego map, pedestrian map, previous action, waypoints, pedestrians, mask.
  std::vector<double> flatten() const;
  bool operator==(const Observation &) const = default;
};

enum class ReplanEvent { None, NewPlan, KeptInfeasible, KeptTimeBudget };

const char *replan_event_name(ReplanEvent e);
std::optional<ReplanEvent> parse_replan_event(const std::string &name);

struct StepInfo {
  Action commanded;
  Action applied;
  bool wall_hit = false;
  bool random_action = false;
  ReplanEvent replan = ReplanEvent::None;
  /// Center distance to the nearest pedestrian (visible or not); +inf with no crowd.
  double nearest_ped_distance = 0.0;
};

struct StepResult {
  int step_index = 0;
  Outcome outcome = Outcome::Running;
  RewardBreakdown reward;
  StepInfo info;
  /// Empty when observation assembly is disabled.
  std::optional<Observation> observation;
};

/// Immutable per-map data shared by every episode on that map.
struct World {
  OccupancyGrid grid;
  std::string map_ref;
  Costmap robot_costmap;
  Costmap ped_costmap;
  WallIndex walls;
  DistanceField clearance;
  double robot_radius = 0.15;
  double ped_radius = 0.15;
  double planning_margin = 0.15;

  static std::shared_ptr<const World> build(OccupancyGrid grid, std::string map_ref,
                                            double robot_radius = 0.15, double ped_radius = 0.15,
                                            double planning_margin = 0.15);
  /// Radii and margin taken from `config`.
  static std::shared_ptr<const World> build(OccupancyGrid grid, std::string map_ref, const EpisodeConfig &config);
};

/// One step of an episode as recorded in the replay log.
struct StepRecord {
  StepResult result;
  Pose pose;
  std::vector<Vec2> ped_positions;
  /// Set when the waypoint list changed during this step.
  std::optional<std::vector<Vec2>> new_waypoints;
};

/**
 * Deterministic simulation of one navigation episode: unicycle robot, ORCA
 * crowd, sensing, global replanning and reward. Single-writer.
 */
class Episode {
 public:
  Episode(std::shared_ptr<const World> world, EpisodeConfig config);

  /// Places robot and crowd and plans the initial route. Throws Error with
  /// InvalidEndpoint or InvalidScenario when the scenario does not fit the map.
  std::optional<Observation> reset(const Scenario &scenario);

  /// Throws ContractViolation before reset or after a terminal outcome.
  StepResult step(const Action &commanded);

  const EpisodeConfig &config() const { return config_; }
  const World &world() const { return *world_; }
  const Scenario &scenario() const { return scenario_; }
  const Pose &pose() const { return pose_; }
  const Action &last_action() const { return last_action_; }
  const std::vector<Agent> &agents() const { return agents_; }
  const Waypoints &waypoints() const { return waypoints_; }
  const std::vector<PedestrianEstimate> &visible() const { return visible_; }
  Outcome outcome() const { return outcome_; }
  int step_index() const { return step_index_; }
  bool started() const { return started_; }
  int consecutive_wall_hits() const { return wall_hits_; }
  double return_so_far() const { return return_; }

  /// Initial state and every step so far, for the replay log.
  const std::vector<StepRecord> &records() const { return records_; }
  const std::vector<Vec2> &initial_ped_positions() const { return initial_peds_; }
  const std::vector<Vec2> &initial_waypoints() const { return initial_waypoints_; }

  Observation observe() const;

 private:
  void set_waypoints(Waypoints wp);

  std::shared_ptr<const World> world_;
  EpisodeConfig config_;
  Scenario scenario_;
  Rng rng_;
  bool started_ = false;
  Pose pose_;
  Action last_action_;
  std::vector<Agent> agents_;
  Waypoints waypoints_;
  std::vector<bool> waypoint_paid_;
  std::vector<PedestrianEstimate> visible_;
  Outcome outcome_ = Outcome::Running;
  int step_index_ = 0;
  int wall_hits_ = 0;
  double return_ = 0.0;
  std::vector<StepRecord> records_;
  std::vector<Vec2> initial_peds_;
  std::vector<Vec2> initial_waypoints_;
};

}  // namespace socnav

#endif  // SOCNAV_EPISODE_HPP
