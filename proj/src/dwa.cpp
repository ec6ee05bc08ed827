/*
 * dwa.cpp
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

#include "socnav/dwa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "socnav/error.hpp"

namespace socnav {

void DwaConfig::validate(double dt) const {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0) throw Error(ErrorCode::InvalidArgument, "dwa weights must be >= 0");
  if (v_samples < 2 || omega_samples < 2) throw Error(ErrorCode::InvalidArgument, "dwa needs at least 2 samples per axis");
  if (!(horizon > dt)) throw Error(ErrorCode::InvalidArgument, "dwa horizon must exceed dt");
  if (!(linear_accel > 0.0 && angular_accel > 0.0)) throw Error(ErrorCode::InvalidArgument, "dwa accelerations must be > 0");
  if (!(v_max > 0.0 && omega_max > 0.0 && clearance_range > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "dwa limits must be > 0");
  }
}

VelocityWindow dynamic_window(double v, double omega, const DwaConfig &cfg, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  VelocityWindow w;
  w.v_min = std::max(-cfg.v_max, v - cfg.linear_accel * dt);
  w.v_max = std::min(cfg.v_max, v + cfg.linear_accel * dt);
  w.omega_min = std::max(-cfg.omega_max, omega - cfg.angular_accel * dt);
  w.omega_max = std::min(cfg.omega_max, omega + cfg.angular_accel * dt);
  // A current velocity outside the caps would invert the window.
  if (w.v_min > w.v_max) w.v_min = w.v_max = std::clamp(v, -cfg.v_max, cfg.v_max);
  if (w.omega_min > w.omega_max) w.omega_min = w.omega_max = std::clamp(omega, -cfg.omega_max, cfg.omega_max);
  return w;
}

std::vector<Pose> rollout(const Pose &start, double v, double omega, double horizon, double dt) {
  if (!(dt > 0.0) || horizon < dt) throw Error(ErrorCode::InvalidArgument, "rollout needs horizon >= dt > 0");
  const int n = static_cast<int>(std::ceil(horizon / dt - 1e-9));
  std::vector<Pose> out;
  out.reserve(static_cast<std::size_t>(n));
  Pose p = start;
  for (int i = 0; i < n; ++i) {
    p = integrate_unicycle(p, v, omega, dt);
    out.push_back(p);
  }
  return out;
}

namespace {

// Stand-in for "no obstacle" that keeps the parabola intersections finite.
constexpr double kFar = 1e20;

// 1D squared Euclidean distance transform (Felzenszwalb and Huttenlocher).
void edt_1d(const std::vector<double> &f, std::vector<double> &d, std::vector<int> &v, std::vector<double> &z) {
  const int n = static_cast<int>(f.size());
  auto F = [&](int i) { return f[static_cast<std::size_t>(i)]; };
  int k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  for (int q = 1; q < n; ++q) {
    double s = 0.0;
    while (true) {
      const int vk = v[static_cast<std::size_t>(k)];
      s = ((F(q) + static_cast<double>(q) * q) - (F(vk) + static_cast<double>(vk) * vk)) / (2.0 * (q - vk));
      if (s > z[static_cast<std::size_t>(k)]) break;
      --k;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
    const int vk = v[static_cast<std::size_t>(k)];
    d[static_cast<std::size_t>(q)] = static_cast<double>(q - vk) * (q - vk) + F(vk);
  }
}

}  // namespace

DistanceField::DistanceField(const OccupancyGrid &grid) : geometry_(grid.geometry()) {
  const int w = geometry_.width;
  const int h = geometry_.height;
  std::vector<double> sq(geometry_.size(), kFar);
  for (std::size_t i = 0; i < sq.size(); ++i) {
    if (grid.cells()[i] == CellState::Occupied) sq[i] = 0.0;
  }
  const int n = std::max(w, h);
  std::vector<double> f, d;
  std::vector<int> v(static_cast<std::size_t>(n));
  std::vector<double> z(static_cast<std::size_t>(n) + 1);
  f.resize(static_cast<std::size_t>(h));
  d.resize(static_cast<std::size_t>(h));
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[static_cast<std::size_t>(y)] = sq[geometry_.index({x, y})];
    edt_1d(f, d, v, z);
    for (int y = 0; y < h; ++y) sq[geometry_.index({x, y})] = d[static_cast<std::size_t>(y)];
  }
  f.resize(static_cast<std::size_t>(w));
  d.resize(static_cast<std::size_t>(w));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[static_cast<std::size_t>(x)] = sq[geometry_.index({x, y})];
    edt_1d(f, d, v, z);
    for (int x = 0; x < w; ++x) sq[geometry_.index({x, y})] = d[static_cast<std::size_t>(x)];
  }
  dist_.resize(sq.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    dist_[i] = sq[i] >= kFar / 2.0 ? std::numeric_limits<double>::infinity() : std::sqrt(sq[i]) * geometry_.resolution;
  }
}

double DistanceField::at(const Vec2 &p) const {
  const auto c = geometry_.world_to_cell(p);
  return c ? dist_[geometry_.index(*c)] : 0.0;
}

std::optional<double> score_trajectory(std::span<const Pose> traj, double v, const Vec2 &local_goal,
                                       const DwaWorld &world, const DwaConfig &cfg, double dt) {
  if (traj.empty()) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  double clearance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Vec2 p = traj[k].position();
    if (world.grid && disc_hits_occupied(*world.grid, p, cfg.robot_radius)) return std::nullopt;
    if (world.clearance) clearance = std::min(clearance, world.clearance->at(p));
    const double t = dt * static_cast<double>(k + 1);
    for (const PedestrianEstimate &ped : world.pedestrians) {
      const Vec2 q = cfg.predict_pedestrians ? ped.world_position + ped.world_velocity * t : ped.world_position;
      const double d = distance(p, q);
      if (d < cfg.ped_collision_dist) return std::nullopt;
      clearance = std::min(clearance, d);
    }
  }
  const Pose &end = traj.back();
  const double heading_error = std::fabs(bearing_to(end, local_goal));
  const double heading_term = heading_error / kPi;
  const double speed_term = (cfg.v_max - v) / (2.0 * cfg.v_max);
  const double clearance_term = 1.0 - std::clamp(clearance / cfg.clearance_range, 0.0, 1.0);
  return cfg.alpha * heading_term + cfg.beta * speed_term + cfg.gamma * clearance_term;
}

DwaChoice dwa_step(const Pose &pose, double v, double omega, const Vec2 &local_goal,
                   const DwaWorld &world, const DwaConfig &cfg, double dt) {
  cfg.validate(dt);
  const VelocityWindow win = dynamic_window(v, omega, cfg, dt);
  DwaChoice best;
  bool found = false;
  for (int i = 0; i < cfg.v_samples; ++i) {
    const double vs = win.v_min + (win.v_max - win.v_min) * i / (cfg.v_samples - 1);
    for (int j = 0; j < cfg.omega_samples; ++j) {
      const double ws = win.omega_min + (win.omega_max - win.omega_min) * j / (cfg.omega_samples - 1);
      const auto traj = rollout(pose, vs, ws, cfg.horizon, dt);
      const auto cost = score_trajectory(traj, vs, local_goal, world, cfg, dt);
      if (cost && (!found || *cost < best.cost)) {
        found = true;
        best = {vs, ws, *cost, false};
      }
    }
  }
  if (found) return best;
  const double turn = bearing_to(pose, local_goal) >= 0.0 ? cfg.omega_max : -cfg.omega_max;
  return {0.0, turn, 0.0, true};
}

}  // namespace socnav
