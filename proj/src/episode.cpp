/*
 * episode.cpp
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

#include "socnav/episode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "socnav/error.hpp"

namespace socnav {

const char *outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Running: return "running";
    case Outcome::Success: return "success";
    case Outcome::PedestrianCollision: return "ped_collision";
    case Outcome::Timeout: return "timeout";
  }
  return "running";
}

std::optional<Outcome> parse_outcome(const std::string &name) {
  for (Outcome o : {Outcome::Running, Outcome::Success, Outcome::PedestrianCollision, Outcome::Timeout}) {
    if (name == outcome_name(o)) return o;
  }
  return std::nullopt;
}

const char *global_planner_name(GlobalPlannerKind k) {
  switch (k) {
    case GlobalPlannerKind::PPP: return "ppp";
    case GlobalPlannerKind::AStar: return "astar";
    case GlobalPlannerKind::FixedAtStart: return "fixed";
  }
  return "ppp";
}

std::optional<GlobalPlannerKind> parse_global_planner(const std::string &name) {
  for (GlobalPlannerKind k : {GlobalPlannerKind::PPP, GlobalPlannerKind::AStar, GlobalPlannerKind::FixedAtStart}) {
    if (name == global_planner_name(k)) return k;
  }
  return std::nullopt;
}

const char *replan_event_name(ReplanEvent e) {
  switch (e) {
    case ReplanEvent::None: return "none";
    case ReplanEvent::NewPlan: return "new";
    case ReplanEvent::KeptInfeasible: return "kept_infeasible";
    case ReplanEvent::KeptTimeBudget: return "kept_budget";
  }
  return "none";
}

std::optional<ReplanEvent> parse_replan_event(const std::string &name) {
  for (ReplanEvent e : {ReplanEvent::None, ReplanEvent::NewPlan, ReplanEvent::KeptInfeasible, ReplanEvent::KeptTimeBudget}) {
    if (name == replan_event_name(e)) return e;
  }
  return std::nullopt;
}

void RewardConfig::validate() const {
  if (!(d_thresh > d_col && d_col > 0.0)) throw Error(ErrorCode::InvalidArgument, "reward requires d_thresh > d_col > 0");
  if (!(waypoint_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "reward waypoint_radius must be > 0");
}

double RewardBreakdown::sum() const {
  return goal + ped_collision + wall_collision + waypoint + timestep + wp_distance + ped_avoid + wp_orient;
}

RewardBreakdown compute_reward(const RewardInputs &in, const RewardConfig &cfg) {
  RewardBreakdown r;
  if (cfg.use_goal && in.outcome == Outcome::Success) r.goal = cfg.goal;
  if (cfg.use_ped_collision && in.outcome == Outcome::PedestrianCollision) r.ped_collision = cfg.ped_collision;
  if (cfg.use_wall_collision && in.wall_hit) r.wall_collision = cfg.wall_collision;
  if (cfg.use_waypoint) r.waypoint = cfg.waypoint * in.waypoints_reached;
  if (cfg.use_timestep) r.timestep = cfg.timestep;
  if (cfg.use_wp_distance) r.wp_distance = cfg.w1 * (in.wp_distance_before - in.wp_distance_after);
  if (cfg.use_wp_orient) r.wp_orient = cfg.w2 * (in.wp_bearing_before - in.wp_bearing_after);
  if (cfg.use_ped_avoid && in.nearest_visible_ped && *in.nearest_visible_ped <= cfg.d_thresh) {
    r.ped_avoid = -(cfg.d_thresh - *in.nearest_visible_ped) / (cfg.d_thresh - cfg.d_col);
  }
  r.total = r.sum();
  return r;
}

void EpisodeConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  if (max_steps <= 0) throw Error(ErrorCode::InvalidArgument, "max_steps must be > 0");
  if (!(goal_radius > 0.0 && ped_collision_dist > 0.0 && robot_radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "episode thresholds must be > 0");
  }
  if (!(planning_margin >= 0.0)) throw Error(ErrorCode::InvalidArgument, "planning_margin must be >= 0");
  if (!(v_max > 0.0 && omega_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "velocity caps must be > 0");
  if (wall_hits_for_random <= 0) throw Error(ErrorCode::InvalidArgument, "wall_hits_for_random must be > 0");
  if (!(d_norm > 0.0 && waypoint_spacing > 0.0 && waypoint_reach > 0.0 && replan_trigger >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "waypoint and normalization distances must be > 0");
  }
  reward.validate();
  sensor.validate();
  gaussian.validate();
  const PedestrianParams &p = pedestrians;
  if (!(p.radius > 0.0 && p.preferred_speed > 0.0 && p.preferred_speed <= p.max_speed)) {
    throw Error(ErrorCode::InvalidArgument, "pedestrians need radius > 0 and 0 < preferred_speed <= max_speed");
  }
  if (!(p.time_horizon_agents > 0.0 && p.time_horizon_obstacles > 0.0 && p.neighbor_distance > 0.0 &&
        p.goal_tolerance > 0.0 && p.route_spacing > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "pedestrian horizons and distances must be > 0");
  }
}

std::vector<double> Observation::flatten() const {
  std::vector<double> out;
  out.reserve(kLength);
  out.insert(out.end(), goal.begin(), goal.end());
  for (std::uint8_t c : ego_map.cells) out.push_back(c);
  for (std::uint8_t c : ped_map.cells) out.push_back(c);
  out.insert(out.end(), prev_action.begin(), prev_action.end());
  out.insert(out.end(), waypoints.begin(), waypoints.end());
  out.insert(out.end(), pedestrians.begin(), pedestrians.end());
  out.insert(out.end(), ped_mask.begin(), ped_mask.end());
  return out;
}

std::shared_ptr<const World> World::build(OccupancyGrid grid, std::string map_ref, double robot_radius,
                                          double ped_radius, double planning_margin) {
  if (planning_margin < 0.0) throw Error(ErrorCode::InvalidArgument, "planning margin must be nonnegative");
  auto w = std::make_shared<World>();
  w->robot_costmap = base_costmap(grid, robot_radius + planning_margin);
  w->ped_costmap = base_costmap(grid, ped_radius);
  w->walls = WallIndex(grid);
  w->clearance = DistanceField(grid);
  w->grid = std::move(grid);
  w->map_ref = std::move(map_ref);
  w->robot_radius = robot_radius;
  w->ped_radius = ped_radius;
  w->planning_margin = planning_margin;
  return w;
}

std::shared_ptr<const World> World::build(OccupancyGrid grid, std::string map_ref, const EpisodeConfig &config) {
  return build(std::move(grid), std::move(map_ref), config.robot_radius, config.pedestrians.radius,
               config.planning_margin);
}

Episode::Episode(std::shared_ptr<const World> world, EpisodeConfig config)
    : world_(std::move(world)), config_(std::move(config)) {
  if (!world_) throw Error(ErrorCode::InvalidArgument, "episode needs a world");
  config_.validate();
  if (world_->robot_radius != config_.robot_radius || world_->ped_radius != config_.pedestrians.radius ||
      world_->planning_margin != config_.planning_margin) {
    throw Error(ErrorCode::InvalidArgument, "world was built with radii or margin different from the episode config");
  }
}

namespace {

constexpr std::uint64_t kEpisodeStream = 0x65706973u;

double nearest_distance(const Vec2 &p, const std::vector<Agent> &agents) {
  double best = std::numeric_limits<double>::infinity();
  for (const Agent &a : agents) best = std::min(best, distance(p, a.position));
  return best;
}

double norm_distance(double d, double scale) { return std::clamp(d / scale, 0.0, 1.0); }

Costmap planning_costmap(const World &w, const EpisodeConfig &cfg, const std::vector<PedestrianEstimate> &visible) {
  if (cfg.planner == GlobalPlannerKind::PPP) return inflate_pedestrians(w.robot_costmap, visible, cfg.gaussian);
  return stamp_static_pedestrians(w.robot_costmap, visible, cfg.pedestrians.radius + cfg.robot_radius);
}

}  // namespace

void Episode::set_waypoints(Waypoints wp) {
  advance_cursor(wp, pose_.position(), config_.waypoint_reach);
  waypoint_paid_.assign(wp.points.size(), false);
  // Waypoints already underfoot earn nothing.
  for (std::size_t i = 0; i < wp.points.size(); ++i) {
    if (distance(wp.points[i], pose_.position()) <= config_.reward.waypoint_radius) waypoint_paid_[i] = true;
  }
  waypoints_ = std::move(wp);
}

std::optional<Observation> Episode::reset(const Scenario &scenario) {
  const World &w = *world_;
  if (scenario.ped_goals.size() != scenario.ped_starts.size()) {
    throw Error(ErrorCode::InvalidScenario, "pedestrian starts and goals differ in count");
  }
  const Vec2 start = scenario.robot_start.position();
  const auto start_cell = w.grid.world_to_cell(start);
  const auto goal_cell = w.grid.world_to_cell(scenario.robot_goal);
  if (!start_cell || !goal_cell || w.robot_costmap.lethal(*start_cell) || w.robot_costmap.lethal(*goal_cell) ||
      disc_hits_occupied(w.grid, start, config_.robot_radius)) {
    throw Error(ErrorCode::InvalidEndpoint, "robot start or goal is blocked or outside the map");
  }
  PlanResult plan = plan_astar(w.robot_costmap, *start_cell, *goal_cell);
  if (plan.status != PlanStatus::Ok) throw Error(ErrorCode::InvalidScenario, "robot goal is unreachable");

  scenario_ = scenario;
  rng_ = Rng(mix_seed(scenario.seed, kEpisodeStream));
  pose_ = Pose{start.x, start.y, wrap_angle(scenario.robot_start.theta)};
  last_action_ = {};
  outcome_ = Outcome::Running;
  step_index_ = 0;
  wall_hits_ = 0;
  return_ = 0.0;
  records_.clear();

  agents_.clear();
  for (std::size_t i = 0; i < scenario.ped_starts.size(); ++i) {
    Agent a = Agent::with_params(static_cast<int>(i), scenario.ped_starts[i], scenario.ped_goals[i], config_.pedestrians);
    a.route = plan_route(w.ped_costmap, a.position, a.goal, config_.pedestrians.route_spacing);
    agents_.push_back(std::move(a));
  }
  initial_peds_.clear();
  for (const Agent &a : agents_) initial_peds_.push_back(a.position);

  visible_ = visible_pedestrians(pose_, agents_, w.grid, config_.sensor);
  if (config_.planner != GlobalPlannerKind::FixedAtStart && !visible_.empty()) {
    PlanResult aware = plan_astar(planning_costmap(w, config_, visible_), *start_cell, *goal_cell);
    if (aware.status == PlanStatus::Ok) plan = std::move(aware);
  }
  set_waypoints(extract_waypoints(w.grid.geometry(), plan.path.cells, config_.waypoint_spacing));
  initial_waypoints_ = waypoints_.points;
  started_ = true;
  if (!config_.build_observations) return std::nullopt;
  return observe();
}

StepResult Episode::step(const Action &commanded) {
  if (!started_) throw Error(ErrorCode::ContractViolation, "step before reset");
  if (outcome_ != Outcome::Running) throw Error(ErrorCode::ContractViolation, "episode is over");
  const World &w = *world_;
  StepResult res;
  StepInfo &info = res.info;
  info.commanded = commanded;
  Action applied{std::isfinite(commanded.v) ? std::clamp(commanded.v, -config_.v_max, config_.v_max) : 0.0,
                 std::isfinite(commanded.omega) ? std::clamp(commanded.omega, -config_.omega_max, config_.omega_max) : 0.0};

  const Pose before = pose_;
  const Vec2 target = waypoints_.empty() ? scenario_.robot_goal : waypoints_.current();

  Pose next = integrate_unicycle(before, applied.v, applied.omega, config_.dt);
  if (disc_hits_occupied(w.grid, next.position(), config_.robot_radius)) {
    info.wall_hit = true;
    next.x = before.x;
    next.y = before.y;
    if (++wall_hits_ >= config_.wall_hits_for_random) {
      wall_hits_ = 0;
      info.random_action = true;
      applied = {rng_.uniform(-config_.v_max, config_.v_max), rng_.uniform(-config_.omega_max, config_.omega_max)};
      next = integrate_unicycle(before, applied.v, applied.omega, config_.dt);
      if (disc_hits_occupied(w.grid, next.position(), config_.robot_radius)) {
        next.x = before.x;
        next.y = before.y;
      }
    }
  } else {
    wall_hits_ = 0;
  }
  info.applied = applied;
  const Vec2 robot_velocity = (next.position() - before.position()) / config_.dt;
  pose_ = next;
  last_action_ = applied;

  agents_ = step_crowd(agents_, RobotBody{pose_.position(), robot_velocity, config_.robot_radius}, w.walls,
                       scenario_.mode, config_.dt);
  for (Agent &a : agents_) {
    if (a.goal_reached) a = reassign_goal(a, w.ped_costmap, rng_, config_.pedestrians.route_spacing);
  }
  ++step_index_;

  visible_ = visible_pedestrians(pose_, agents_, w.grid, config_.sensor);

  int reached = 0;
  for (std::size_t i = 0; i < waypoints_.points.size(); ++i) {
    if (!waypoint_paid_[i] && distance(waypoints_.points[i], pose_.position()) <= config_.reward.waypoint_radius) {
      waypoint_paid_[i] = true;
      ++reached;
    }
  }
  advance_cursor(waypoints_, pose_.position(), config_.waypoint_reach);

  std::optional<std::vector<Vec2>> new_waypoints;
  if (config_.planner != GlobalPlannerKind::FixedAtStart &&
      should_replan(waypoints_, visible_, config_.replan_trigger)) {
    PlanOutcome plan = replan_or_keep(waypoints_, planning_costmap(w, config_, visible_), pose_, scenario_.robot_goal,
                                      config_.max_steps - step_index_, config_.dt, config_.v_max,
                                      config_.waypoint_spacing);
    if (plan.kind == PlanOutcome::Kind::NewPlan) {
      info.replan = ReplanEvent::NewPlan;
      set_waypoints(std::move(plan.waypoints));
      new_waypoints = waypoints_.points;
    } else {
      info.replan = plan.reason == KeepReason::Infeasible ? ReplanEvent::KeptInfeasible : ReplanEvent::KeptTimeBudget;
    }
  }

  info.nearest_ped_distance = nearest_distance(pose_.position(), agents_);
  Outcome outcome = Outcome::Running;
  if (info.nearest_ped_distance < config_.ped_collision_dist) {
    outcome = Outcome::PedestrianCollision;
  } else if (distance(pose_.position(), scenario_.robot_goal) <= config_.goal_radius) {
    outcome = Outcome::Success;
  } else if (step_index_ >= config_.max_steps) {
    outcome = Outcome::Timeout;
  }

  RewardInputs in;
  in.wp_distance_before = distance(before.position(), target);
  in.wp_distance_after = distance(pose_.position(), target);
  in.wp_bearing_before = std::fabs(bearing_to(before, target));
  in.wp_bearing_after = std::fabs(bearing_to(pose_, target));
  if (!visible_.empty()) in.nearest_visible_ped = visible_.front().distance;
  in.waypoints_reached = reached;
  in.wall_hit = info.wall_hit;
  in.outcome = outcome;
  res.reward = compute_reward(in, config_.reward);

  outcome_ = outcome;
  return_ += res.reward.total;
  res.step_index = step_index_;
  res.outcome = outcome;

  StepRecord rec;
  rec.result = res;
  rec.pose = pose_;
  rec.ped_positions.reserve(agents_.size());
  for (const Agent &a : agents_) rec.ped_positions.push_back(a.position);
  rec.new_waypoints = std::move(new_waypoints);
  records_.push_back(std::move(rec));

  if (config_.build_observations) res.observation = observe();
  return res;
}

Observation Episode::observe() const {
  const World &w = *world_;
  Observation o;
  const Vec2 p = pose_.position();
  o.goal = {norm_distance(distance(p, scenario_.robot_goal), config_.d_norm),
            bearing_to(pose_, scenario_.robot_goal) / kPi};
  o.ego_map = ego_local_map(w.grid, pose_);
  o.ped_map = pedestrian_map(visible_, pose_);
  o.prev_action = {last_action_.v / config_.v_max, last_action_.omega / config_.omega_max};
  if (!waypoints_.empty()) {
    for (std::size_t k = 0; k < Observation::kWaypointSlots; ++k) {
      const std::size_t i = std::min(waypoints_.cursor + k, waypoints_.points.size() - 1);
      const Vec2 &q = waypoints_.points[i];
      o.waypoints[2 * k] = norm_distance(distance(p, q), config_.d_norm);
      o.waypoints[2 * k + 1] = bearing_to(pose_, q) / kPi;
    }
  }
  for (std::size_t k = 0; k < Observation::kPedestrianSlots && k < visible_.size(); ++k) {
    const PedestrianEstimate &e = visible_[k];
    o.pedestrians[3 * k] = norm_distance(e.distance, config_.sensor.range);
    o.pedestrians[3 * k + 1] = e.bearing / kPi;
    o.pedestrians[3 * k + 2] = e.relative_heading / kPi;
    o.ped_mask[k] = 1.0;
  }
  return o;
}

}  // namespace socnav
