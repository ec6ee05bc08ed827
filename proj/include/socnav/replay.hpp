/*
 * replay.hpp
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

#ifndef SOCNAV_REPLAY_HPP
#define SOCNAV_REPLAY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "socnav/config.hpp"
#include "socnav/episode.hpp"
#include "socnav/scenario.hpp"

namespace socnav {

inline constexpr int kReplayVersion = 1;

struct ReplayStep {
  int index = 0;
  Action commanded;
  Action applied;
  Pose pose;
  bool wall_hit = false;
  bool random_action = false;
  ReplanEvent replan = ReplanEvent::None;
  RewardBreakdown reward;
  Outcome outcome = Outcome::Running;
  double nearest_ped_distance = 0.0;
  std::vector<Vec2> peds;
  std::optional<std::vector<Vec2>> new_waypoints;
};

struct ReplayLog {
  std::string map_ref;
  GridGeometry geometry;
  std::uint64_t fingerprint = 0;
  EpisodeConfig config;
  MapGenParams mapgen;
  Scenario scenario;
  Pose initial_pose;
  std::vector<Vec2> initial_peds;
  std::vector<Vec2> initial_waypoints;
  std::vector<ReplayStep> steps;
  Outcome outcome = Outcome::Running;
  double total_return = 0.0;
};

/// Serializes the episode so far. `mapgen` is recorded so generated maps can be rebuilt.
std::string write_replay(const Episode &episode, const MapGenParams &mapgen);

/// Throws Error(Parse) naming the line for malformed or truncated input.
ReplayLog parse_replay(const std::string &text);

struct ReplayVerdict {
  bool ok = false;
  /// First step whose record differs from the re-simulation; 0 for header problems.
  std::optional<int> divergent_step;
  std::string message;
};

/**
 * Re-simulates the log from its commanded actions and compares the rewritten
 * log text with the input line by line. `map_override` replaces the map named
 * in the log when set.
 */
ReplayVerdict verify_replay(const std::string &text, const std::optional<OccupancyGrid> &map_override = {});

/// The map named in the log, rebuilt from its reference and recorded generator settings.
OccupancyGrid replay_map(const ReplayLog &log);

/**
 * Re-simulates the log through `step` (0 = after reset) and dumps the
 * pedestrian-inflated costmap seen at that point, with the visible
 * pedestrians and the remaining waypoints as the path.
 */
std::string costmap_dump_at(const ReplayLog &log, const OccupancyGrid &grid, int step);

}  // namespace socnav

#endif  // SOCNAV_REPLAY_HPP
