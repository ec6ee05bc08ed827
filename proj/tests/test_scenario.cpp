/*
 * test_scenario.cpp
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

#include "oracles.hpp"
#include "socnav/config.hpp"
#include "socnav/error.hpp"
#include "socnav/scenario.hpp"

namespace socnav {
namespace {

int free_components(const OccupancyGrid &g) {
  std::vector<bool> seen(g.geometry().size(), false);
  int n = 0;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      if (g.occupied({x, y}) || seen[g.geometry().index({x, y})]) continue;
      ++n;
      const auto fill = oracle::flood_fill(g, {x, y});
      for (std::size_t i = 0; i < fill.size(); ++i) seen[i] = seen[i] || fill[i];
    }
  }
  return n;
}

TEST(MapGen, SingleComponentForManySeeds) {
  MapGenParams p;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const OccupancyGrid g = generate_indoor_map(seed, p);
    EXPECT_EQ(g.width(), 200);
    EXPECT_EQ(g.height(), 160);
    EXPECT_EQ(free_components(g), 1) << seed;
    for (int x = 0; x < g.width(); ++x) EXPECT_TRUE(g.occupied({x, 0}) && g.occupied({x, g.height() - 1}));
    for (int y = 0; y < g.height(); ++y) EXPECT_TRUE(g.occupied({0, y}) && g.occupied({g.width() - 1, y}));
  }
}

TEST(MapGen, Deterministic) {
  MapGenParams p;
  EXPECT_EQ(generate_indoor_map(7, p), generate_indoor_map(7, p));
  EXPECT_NE(generate_indoor_map(7, p).fingerprint(), generate_indoor_map(8, p).fingerprint());
}

TEST(MapGen, ClutterAddsOccupancyOnly) {
  MapGenParams bare;
  bare.clutter_density = 0.0;
  MapGenParams busy;
  busy.clutter_density = 0.08;
  const OccupancyGrid a = generate_indoor_map(3, bare);
  const OccupancyGrid b = generate_indoor_map(3, busy);
  EXPECT_EQ(free_components(a), 1);
  EXPECT_EQ(free_components(b), 1);
  EXPECT_GT(b.occupied_count(), a.occupied_count());
}

TEST(MapGen, CorridorsAtLeastOneMeterWide) {
  // Every free cell of a clutter-free map belongs to some free 1 m x 1 m square.
  MapGenParams p;
  p.clutter_density = 0.0;
  const OccupancyGrid g = generate_indoor_map(5, p);
  const int k = 10;
  std::vector<bool> covered(g.geometry().size(), false);
  for (int y = 0; y + k <= g.height(); ++y) {
    for (int x = 0; x + k <= g.width(); ++x) {
      bool free = true;
      for (int j = 0; j < k && free; ++j) {
        for (int i = 0; i < k && free; ++i) free = !g.occupied({x + i, y + j});
      }
      if (!free) continue;
      for (int j = 0; j < k; ++j) {
        for (int i = 0; i < k; ++i) covered[g.geometry().index({x + i, y + j})] = true;
      }
    }
  }
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      if (!g.occupied({x, y})) EXPECT_TRUE(covered[g.geometry().index({x, y})]) << x << "," << y;
    }
  }
}

TEST(MapGen, Validation) {
  MapGenParams p;
  p.corridor_width = 0.5;
  EXPECT_THROW(generate_indoor_map(1, p), Error);
  p = {};
  p.clutter_min = 2.0;
  EXPECT_THROW(generate_indoor_map(1, p), Error);
}

TEST(Scenario, GeodesicRangeOracle) {
  // Geodesic = 8-connected shortest path over traversable cells, checked by Dijkstra.
  const auto world = World::build(generate_indoor_map(11, {}), "gen:11");
  Rng rng(5);
  const GridGeometry &g = world->grid.geometry();
  for (int i = 0; i < 1000; ++i) {
    const Scenario s = sample_scenario(*world, rng, 0, CrowdMode::Cooperative);
    const Cell a = *g.world_to_cell(s.robot_start.position());
    const Cell b = *g.world_to_cell(s.robot_goal);
    const double d = oracle::dijkstra_cost(world->robot_costmap, a, b) * g.resolution;
    ASSERT_GE(d, 5.0 - 1e-9) << i;
    ASSERT_LE(d, 15.0 + 1e-9) << i;
  }
}

TEST(Scenario, PedestrianPlacement) {
  const auto world = World::build(generate_indoor_map(4, {}), "gen:4");
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const Scenario s = sample_scenario(*world, rng, 10, CrowdMode::Uncooperative);
    ASSERT_EQ(s.ped_starts.size(), 10u);
    ASSERT_EQ(s.ped_goals.size(), 10u);
    EXPECT_EQ(s.mode, CrowdMode::Uncooperative);
    for (std::size_t k = 0; k < 10; ++k) {
      EXPECT_GE(distance(s.ped_starts[k], s.robot_start.position()), 1.0);
      EXPECT_GE(distance(s.ped_starts[k], s.ped_goals[k]), 1.0);
      EXPECT_FALSE(world->ped_costmap.lethal(*world->grid.world_to_cell(s.ped_starts[k])));
      EXPECT_FALSE(world->ped_costmap.lethal(*world->grid.world_to_cell(s.ped_goals[k])));
      for (std::size_t j = 0; j < k; ++j) EXPECT_GE(distance(s.ped_starts[k], s.ped_starts[j]), 0.5);
    }
  }
}

TEST(Scenario, DeterministicAndEpisodeReady) {
  const auto world = World::build(generate_indoor_map(2, {}), "gen:2");
  Rng a(42), b(42);
  const Scenario sa = sample_scenario(*world, a, 5, CrowdMode::Cooperative);
  const Scenario sb = sample_scenario(*world, b, 5, CrowdMode::Cooperative);
  EXPECT_EQ(sa, sb);
  Episode ep(world, {});
  EXPECT_NO_THROW(ep.reset(sa));
}

TEST(Scenario, TinyMapRejected) {
  std::vector<std::string> rows(30, std::string(30, '.'));
  rows.front() = rows.back() = std::string(30, '#');
  for (auto &r : rows) r.front() = r.back() = '#';
  const auto world = World::build(oracle::grid_from_rows(rows), "test:tiny");
  Rng rng(1);
  ScenarioParams p;
  p.max_attempts = 500;
  try {
    sample_scenario(*world, rng, 0, CrowdMode::Cooperative, p);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidScenario);
  }
}

TEST(MapRefTest, ParseAndFormat) {
  EXPECT_EQ(MapRef::parse("gen:17").seed, 17u);
  EXPECT_EQ(MapRef::parse("gen:17").str(), "gen:17");
  EXPECT_EQ(MapRef::parse("file:maps/a.pgm").path, "maps/a.pgm");
  EXPECT_EQ(MapRef::parse("file:maps/a.pgm").str(), "file:maps/a.pgm");
  EXPECT_THROW(MapRef::parse("gen:x"), Error);
  EXPECT_THROW(MapRef::parse("maps/a.pgm"), Error);
}

TEST(Config, EpisodeRoundTrip) {
  EpisodeConfig c;
  c.dt = 0.05;
  c.planner = GlobalPlannerKind::AStar;
  c.reward.use_wp_orient = false;
  c.gaussian.proximity = ProximityMode::AsWritten;
  c.pedestrians.max_neighbors = 4;
  const KeyValues items = episode_registry().items(c);
  EpisodeConfig d;
  episode_registry().apply(d, parse_key_values(format_key_values(items)));
  EXPECT_EQ(c, d);
}

TEST(Config, DoublesRoundTripExactly) {
  EpisodeConfig c;
  c.omega_max = kPi / 3.0;
  c.reward.timestep = -1.0 / 3.0;
  EpisodeConfig d;
  episode_registry().apply(d, episode_registry().items(c));
  EXPECT_EQ(c.omega_max, d.omega_max);
  EXPECT_EQ(c.reward.timestep, d.reward.timestep);
}

TEST(Config, Errors) {
  EpisodeConfig c;
  EXPECT_THROW(episode_registry().set(c, "no_such_key", "1"), Error);
  EXPECT_THROW(episode_registry().set(c, "dt", "fast"), Error);
  EXPECT_THROW(episode_registry().set(c, "dt", "nan"), Error);
  EXPECT_THROW(episode_registry().set(c, "global_planner", "rrt"), Error);
  EXPECT_THROW(episode_registry().set(c, "ped.max_neighbors", "-1"), Error);
  EXPECT_THROW(episode_registry().set(c, "observations", "maybe"), Error);
  try {
    parse_key_values("dt = 0.1\n# fine\n\nbroken line\n");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(Config, KeyValueSyntax) {
  const KeyValues kv = parse_key_values("  a = 1  # note\nb=two words\n\n");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv[0], (std::pair<std::string, std::string>{"a", "1"}));
  EXPECT_EQ(kv[1], (std::pair<std::string, std::string>{"b", "two words"}));
  EXPECT_EQ(split_list("3, 4,,5"), (std::vector<std::string>{"3", "4", "5"}));
}

TEST(Config, RegistriesCoverEveryField) {
  EXPECT_EQ(episode_registry().keys().size(), 53u);
  EXPECT_EQ(mapgen_registry().keys().size(), 10u);
  EXPECT_EQ(scenario_registry().keys().size(), 6u);
  EXPECT_EQ(dwa_registry().keys().size(), 10u);
}

}  // namespace
}  // namespace socnav
