/*
 * dwa.hpp
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

#ifndef SOCNAV_DWA_HPP
#define SOCNAV_DWA_HPP

#include <optional>
#include <span>
#include <vector>

#include "socnav/geometry.hpp"
#include "socnav/gridmap.hpp"
#include "socnav/sensing.hpp"

namespace socnav {

struct DwaConfig {
  double alpha = 0.4;  // heading weight
  double beta = 1.0;   // speed weight
  double gamma = 0.1;  // clearance weight
  double linear_accel = 1.0;
  double angular_accel = kPi;
  double horizon = 1.5;
  int v_samples = 11;
  int omega_samples = 21;
  double v_max = 0.5;
  double omega_max = kPi / 2.0;
  double robot_radius = 0.15;
  double ped_collision_dist = 0.3;
  /// Clearance at or beyond this distance costs nothing.
  double clearance_range = 5.0;
  /// Predict pedestrians at constant velocity over the rollout instead of
  /// treating them as static.
  bool predict_pedestrians = false;

  void validate(double dt) const;
  bool operator==(const DwaConfig &) const = default;
};

struct VelocityWindow {
  double v_min = 0.0;
  double v_max = 0.0;
  double omega_min = 0.0;
  double omega_max = 0.0;
};

VelocityWindow dynamic_window(double v, double omega, const DwaConfig &cfg, double dt);

/// ceil(horizon / dt) poses after `start`, integrated at constant (v, omega).
std::vector<Pose> rollout(const Pose &start, double v, double omega, double horizon, double dt);

/// Euclidean distance from each cell center to the nearest Occupied cell center, meters.
class DistanceField {
 public:
  DistanceField() = default;
  explicit DistanceField(const OccupancyGrid &grid);

  /// Distance at the cell containing `p`; 0 outside the grid.
  double at(const Vec2 &p) const;
  double at(const Cell &c) const { return dist_[geometry_.index(c)]; }

 private:
  GridGeometry geometry_;
  std::vector<double> dist_;
};

/// What DWA perceives: the static map and the currently visible pedestrians.
struct DwaWorld {
  const OccupancyGrid *grid = nullptr;
  const DistanceField *clearance = nullptr;
  std::span<const PedestrianEstimate> pedestrians;
};

/// Cost of a rollout at linear speed `v`, or nullopt when inadmissible.
std::optional<double> score_trajectory(std::span<const Pose> traj, double v, const Vec2 &local_goal,
                                       const DwaWorld &world, const DwaConfig &cfg, double dt);

struct DwaChoice {
  double v = 0.0;
  double omega = 0.0;
  double cost = 0.0;
  /// No admissible sample; rotating in place toward the goal.
  bool fallback = false;
};

/// Evaluates the v_samples x omega_samples grid over the dynamic window and
/// returns the cheapest admissible pair (ties: lowest v index, then lowest
/// omega index).
DwaChoice dwa_step(const Pose &pose, double v, double omega, const Vec2 &local_goal,
                   const DwaWorld &world, const DwaConfig &cfg, double dt);

}  // namespace socnav

#endif  // SOCNAV_DWA_HPP
