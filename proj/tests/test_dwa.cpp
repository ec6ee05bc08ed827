/*
 * test_dwa.cpp
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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "socnav/dwa.hpp"

using namespace socnav;

namespace {

struct Scene {
  OccupancyGrid grid;
  DistanceField field;
  std::vector<PedestrianEstimate> peds;

  explicit Scene(OccupancyGrid g) : grid(std::move(g)), field(grid) {}
  DwaWorld world() const { return {&grid, &field, peds}; }
};

OccupancyGrid open_room() { return OccupancyGrid::filled(200, 200, 0.1, {-10, -10}); }

// Exhaustive re-evaluation of the sample grid.
double min_cost(const Pose &pose, double v, double w, const Vec2 &goal, const DwaWorld &world,
                const DwaConfig &cfg, double dt) {
  const VelocityWindow win = dynamic_window(v, w, cfg, dt);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.v_samples; ++i) {
    for (int j = 0; j < cfg.omega_samples; ++j) {
      const double vs = win.v_min + (win.v_max - win.v_min) * i / (cfg.v_samples - 1);
      const double ws = win.omega_min + (win.omega_max - win.omega_min) * j / (cfg.omega_samples - 1);
      const auto traj = rollout(pose, vs, ws, cfg.horizon, dt);
      if (auto c = score_trajectory(traj, vs, goal, world, cfg, dt)) best = std::min(best, *c);
    }
  }
  return best;
}

}  // namespace

TEST(Dwa, WindowArithmetic) {
  DwaConfig cfg;
  VelocityWindow w = dynamic_window(0.0, 0.0, cfg, 0.1);
  EXPECT_NEAR(w.v_min, -0.1, 1e-12);
  EXPECT_NEAR(w.v_max, 0.1, 1e-12);
  EXPECT_NEAR(w.omega_min, -0.1 * kPi, 1e-12);
  EXPECT_NEAR(w.omega_max, 0.1 * kPi, 1e-12);
  EXPECT_DOUBLE_EQ(dynamic_window(0.5, 0.0, cfg, 0.1).v_max, 0.5);
  EXPECT_DOUBLE_EQ(dynamic_window(0.0, kPi / 2, cfg, 0.1).omega_max, kPi / 2);
}

TEST(Dwa, RolloutStraightAndArc) {
  auto straight = rollout(Pose{0, 0, 0}, 0.5, 0.0, 1.0, 0.1);
  ASSERT_EQ(straight.size(), 10u);
  EXPECT_NEAR(straight.back().x, 0.5, 1e-12);
  EXPECT_NEAR(straight.back().y, 0.0, 1e-12);

  auto spin = rollout(Pose{1, 2, 0}, 0.0, 1.0, 1.5, 0.1);
  ASSERT_EQ(spin.size(), 15u);
  for (const Pose &p : spin) EXPECT_EQ(p.position(), (Vec2{1, 2}));
  EXPECT_NEAR(spin.back().theta, 1.5, 1e-12);

  // Arc of radius v / omega: Euler points lie close to the closed-form circle.
  const double v = 0.5, w = kPi / 2, R = v / w;
  auto arc = rollout(Pose{0, 0, 0}, v, w, 1.0, 0.01);
  const Pose end = arc.back();
  EXPECT_NEAR(end.x, R * std::sin(w * 1.0), 5e-3);
  EXPECT_NEAR(end.y, R * (1.0 - std::cos(w * 1.0)), 5e-3);
  EXPECT_NEAR(distance(end.position(), Vec2{0, R}), R, 5e-3);
}

TEST(Dwa, DistanceFieldMatchesBruteForce) {
  std::mt19937 rng(9);
  OccupancyGrid g = OccupancyGrid::filled(37, 23, 0.1, {0, 0});
  std::vector<Cell> occ;
  for (int i = 0; i < 25; ++i) {
    Cell c{static_cast<int>(rng() % 37), static_cast<int>(rng() % 23)};
    g = g.with_cell(c, CellState::Occupied);
    occ.push_back(c);
  }
  DistanceField f(g);
  for (int y = 0; y < 23; ++y) {
    for (int x = 0; x < 37; ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (const Cell &c : occ) best = std::min(best, std::hypot(c.x - x, c.y - y) * 0.1);
      EXPECT_NEAR(f.at(Cell{x, y}), best, 1e-12) << x << "," << y;
    }
  }
  EXPECT_TRUE(std::isinf(DistanceField(OccupancyGrid::filled(4, 4, 0.1, {})).at(Cell{1, 1})));
}

TEST(Dwa, CostTermIsolation) {
  Scene s(open_room());
  DwaConfig cfg;
  std::vector<Pose> aligned{{0, 0, 0}, {1, 0, 0}};
  EXPECT_NEAR(*score_trajectory(aligned, 0.5, {3, 0}, s.world(), cfg, 0.1), 0.0, 1e-12);
  std::vector<Pose> away{{0, 0, 0}, {1, 0, kPi}};
  EXPECT_NEAR(*score_trajectory(away, 0.5, {3, 0}, s.world(), cfg, 0.1), 0.4, 1e-12);
  EXPECT_NEAR(*score_trajectory(aligned, -0.5, {3, 0}, s.world(), cfg, 0.1), 1.0, 1e-12);
}

TEST(Dwa, WallIsInadmissible) {
  OccupancyGrid g = open_room();
  for (int y = 0; y < 200; ++y) g = g.with_cell({105, y}, CellState::Occupied);
  Scene s(g);
  DwaConfig cfg;
  auto through = rollout(Pose{0, 0, 0}, 0.5, 0.0, 1.5, 0.1);
  EXPECT_FALSE(score_trajectory(through, 0.5, {3, 0}, s.world(), cfg, 0.1));
  auto along = rollout(Pose{0, 0, kPi / 2}, 0.5, 0.0, 1.5, 0.1);
  auto c = score_trajectory(along, 0.5, {0, 3}, s.world(), cfg, 0.1);
  ASSERT_TRUE(c);
  // Clearance is measured between cell centers: 0.05 to 0.55.
  EXPECT_NEAR(*c, 0.1 * (1.0 - 0.5 / 5.0), 1e-9);
}

TEST(Dwa, PedestrianInadmissibleStaticAndPredicted) {
  Scene s(open_room());
  PedestrianEstimate p;
  p.world_position = {1.0, 0.0};
  p.world_velocity = {0.0, 0.5};
  s.peds.push_back(p);
  DwaConfig cfg;
  auto traj = rollout(Pose{0, 0, 0}, 0.5, 0.0, 1.5, 0.1);
  EXPECT_FALSE(score_trajectory(traj, 0.5, {3, 0}, s.world(), cfg, 0.1));
  cfg.predict_pedestrians = true;
  EXPECT_TRUE(score_trajectory(traj, 0.5, {3, 0}, s.world(), cfg, 0.1));
}

TEST(Dwa, OpenCorridorGoesStraightFast) {
  Scene s(open_room());
  DwaConfig cfg;
  const Pose pose{0, 0, 0};
  auto choice = dwa_step(pose, 0.45, 0.0, {4, 0}, s.world(), cfg, 0.1);
  EXPECT_FALSE(choice.fallback);
  EXPECT_NEAR(choice.v, 0.5, 1e-12);
  EXPECT_NEAR(choice.omega, 0.0, 1e-12);
  EXPECT_NEAR(choice.cost, min_cost(pose, 0.45, 0.0, {4, 0}, s.world(), cfg, 0.1), 1e-15);
}

TEST(Dwa, GoalToTheLeftTurnsLeft) {
  Scene s(open_room());
  DwaConfig cfg;
  auto choice = dwa_step(Pose{0, 0, 0}, 0.2, 0.0, {0, 3}, s.world(), cfg, 0.1);
  EXPECT_GT(choice.omega, 0.0);
}

TEST(Dwa, BoxedInFallsBackToRotation) {
  // Driving at full speed toward a wall 0.3 m ahead: the window keeps v >= 0.4,
  // so every sample hits the wall.
  OccupancyGrid g = open_room();
  for (int y = 0; y < 200; ++y) g = g.with_cell({103, y}, CellState::Occupied);
  Scene s(g);
  DwaConfig cfg;
  auto left = dwa_step(Pose{0, 0, 0}, 0.5, 0.0, {0.0, 2.0}, s.world(), cfg, 0.1);
  EXPECT_TRUE(left.fallback);
  EXPECT_EQ(left.v, 0.0);
  EXPECT_DOUBLE_EQ(left.omega, kPi / 2);
  auto right = dwa_step(Pose{0, 0, 0}, 0.5, 0.0, {0.0, -2.0}, s.world(), cfg, 0.1);
  EXPECT_DOUBLE_EQ(right.omega, -kPi / 2);

  // A pedestrian already inside the collision distance rules out every sample.
  Scene open(open_room());
  PedestrianEstimate p;
  p.world_position = {0.2, 0.0};
  open.peds.push_back(p);
  EXPECT_TRUE(dwa_step(Pose{0, 0, 0}, 0.0, 0.0, {2.0, 0.0}, open.world(), cfg, 0.1).fallback);
}

TEST(Dwa, ExhaustiveArgminWindowAndSafety) {
  std::mt19937 rng(31);
  OccupancyGrid g = OccupancyGrid::filled(80, 80, 0.1, {0, 0});
  for (int i = 0; i < 60; ++i) {
    const int x0 = static_cast<int>(rng() % 76), y0 = static_cast<int>(rng() % 76);
    for (int dy = 0; dy < 3; ++dy) {
      for (int dx = 0; dx < 3; ++dx) g = g.with_cell({x0 + dx, y0 + dy}, CellState::Occupied);
    }
  }
  Scene s(g);
  DwaConfig cfg;
  std::uniform_real_distribution<double> pos(1, 7), ang(-kPi, kPi), vel(-0.5, 0.5), om(-kPi / 2, kPi / 2);
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    const Pose pose{pos(rng), pos(rng), ang(rng)};
    if (disc_hits_occupied(g, pose.position(), cfg.robot_radius)) continue;
    const double v = vel(rng), w = om(rng);
    const Vec2 goal{pos(rng), pos(rng)};
    auto choice = dwa_step(pose, v, w, goal, s.world(), cfg, 0.1);
    if (choice.fallback) {
      EXPECT_TRUE(std::isinf(min_cost(pose, v, w, goal, s.world(), cfg, 0.1)));
      continue;
    }
    ++checked;
    const VelocityWindow win = dynamic_window(v, w, cfg, 0.1);
    EXPECT_GE(choice.v, win.v_min - 1e-12);
    EXPECT_LE(choice.v, win.v_max + 1e-12);
    EXPECT_GE(choice.omega, win.omega_min - 1e-12);
    EXPECT_LE(choice.omega, win.omega_max + 1e-12);
    EXPECT_EQ(choice.cost, min_cost(pose, v, w, goal, s.world(), cfg, 0.1));
    for (const Pose &p : rollout(pose, choice.v, choice.omega, cfg.horizon, 0.1)) {
      EXPECT_FALSE(disc_hits_occupied(g, p.position(), cfg.robot_radius));
    }
    DwaConfig scaled = cfg;
    scaled.alpha *= 3.0;
    scaled.beta *= 3.0;
    scaled.gamma *= 3.0;
    auto again = dwa_step(pose, v, w, goal, s.world(), scaled, 0.1);
    EXPECT_EQ(again.v, choice.v);
    EXPECT_EQ(again.omega, choice.omega);
  }
  EXPECT_GT(checked, 20);
}
