/*
 * test_gridmap.cpp
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
#include <png.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "socnav/error.hpp"
#include "socnav/gridmap.hpp"

using namespace socnav;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("socnav_gridmap_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_pgm(const fs::path &path, int w, int h, const std::vector<unsigned char> &pixels) {
  std::ofstream out(path, std::ios::binary);
  out << "P5\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char *>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

void write_meta(const fs::path &path, const std::string &body) {
  std::ofstream out(path);
  out << body;
}

}  // namespace

TEST(GridMap, WorldToCellExamples) {
  GridGeometry g{10, 10, 0.1, {0.0, 0.0}};
  auto c = g.world_to_cell({0.25, 0.05});
  ASSERT_TRUE(c);
  EXPECT_EQ(*c, (Cell{2, 0}));
  EXPECT_EQ(*g.world_to_cell({0.0, 0.0}), (Cell{0, 0}));
  EXPECT_FALSE(g.world_to_cell({-0.01, 0.0}));
  EXPECT_FALSE(g.world_to_cell({1.0, 0.5}));
}

TEST(GridMap, CellRoundTrip) {
  GridGeometry g{37, 23, 0.05, {-1.3, 2.7}};
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      auto c = g.world_to_cell(g.cell_to_world({x, y}));
      ASSERT_TRUE(c);
      EXPECT_EQ(*c, (Cell{x, y}));
    }
  }
}

TEST(GridMap, RejectsBadGeometry) {
  EXPECT_THROW(OccupancyGrid::filled(0, 3, 0.1, {}), Error);
  EXPECT_THROW(OccupancyGrid::filled(3, 3, 0.0, {}), Error);
  EXPECT_THROW(OccupancyGrid(GridGeometry{2, 2, 0.1, {}}, std::vector<CellState>(3)), Error);
}

TEST(GridMap, LoadPgmWhiteBlackAndSinglePixel) {
  const fs::path dir = temp_dir("pgm");
  write_meta(dir / "white.meta", "resolution: 0.1\norigin_x: 0\norigin_y: 0\n");
  write_pgm(dir / "white.pgm", 2, 2, {255, 255, 255, 255});
  OccupancyGrid white = load_map((dir / "white.pgm").string());
  EXPECT_EQ(white.width(), 2);
  EXPECT_EQ(white.occupied_count(), 0u);

  write_meta(dir / "black.meta", "resolution = 0.1\norigin_x = 0\norigin_y = 0\n");
  write_pgm(dir / "black.pgm", 2, 2, {0, 0, 0, 0});
  EXPECT_EQ(load_map((dir / "black.pgm").string()).occupied_count(), 4u);

  // One dark pixel at column 1, row 0.
  write_meta(dir / "one.meta", "# comment\nresolution: 0.05\norigin_x: -1\norigin_y: 2\n");
  write_pgm(dir / "one.pgm", 3, 2, {255, 10, 255, 200, 200, 200});
  OccupancyGrid one = load_map((dir / "one.pgm").string());
  EXPECT_DOUBLE_EQ(one.resolution(), 0.05);
  EXPECT_EQ(one.origin(), (Vec2{-1.0, 2.0}));
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 3; ++x) {
      EXPECT_EQ(one.at({x, y}) == CellState::Occupied, x == 1 && y == 0) << x << "," << y;
    }
  }
}

TEST(GridMap, ThresholdIsConfigurable) {
  const fs::path dir = temp_dir("threshold");
  write_meta(dir / "m.meta", "resolution: 0.1\norigin_x: 0\norigin_y: 0\noccupied_threshold: 201\n");
  write_pgm(dir / "m.pgm", 2, 1, {200, 201});
  OccupancyGrid g = load_map((dir / "m.pgm").string());
  EXPECT_EQ(g.at({0, 0}), CellState::Occupied);
  EXPECT_EQ(g.at({1, 0}), CellState::Free);
  OccupancyGrid g2 = load_map((dir / "m.pgm").string(), MapLoadOptions{100});
  EXPECT_EQ(g2.occupied_count(), 0u);
}

TEST(GridMap, LoadPng) {
  const fs::path dir = temp_dir("png");
  write_meta(dir / "p.meta", "resolution: 0.1\norigin_x: 0.5\norigin_y: 0\n");
  std::vector<png_byte> pixels = {255, 0, 255, 255, 255, 0};
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = 3;
  image.height = 2;
  image.format = PNG_FORMAT_GRAY;
  ASSERT_TRUE(png_image_write_to_file(&image, (dir / "p.png").c_str(), 0, pixels.data(), 0, nullptr));
  OccupancyGrid g = load_map((dir / "p.png").string());
  EXPECT_EQ(g.occupied_count(), 2u);
  EXPECT_EQ(g.at({1, 0}), CellState::Occupied);
  EXPECT_EQ(g.at({2, 1}), CellState::Occupied);
}

TEST(GridMap, LoadErrors) {
  const fs::path dir = temp_dir("errors");
  EXPECT_THROW(load_map((dir / "missing.pgm").string()), Error);
  write_pgm(dir / "nometa.pgm", 1, 1, {0});
  EXPECT_THROW(load_map((dir / "nometa.pgm").string()), Error);
  write_pgm(dir / "bad.pgm", 1, 1, {0});
  write_meta(dir / "bad.meta", "resolution: 0.1\norigin_x: 0\n");
  EXPECT_THROW(load_map((dir / "bad.pgm").string()), Error);
  write_meta(dir / "bad.meta", "resolution: abc\norigin_x: 0\norigin_y: 0\n");
  EXPECT_THROW(load_map((dir / "bad.pgm").string()), Error);
  {
    std::ofstream out(dir / "trunc.pgm", std::ios::binary);
    out << "P5\n4 4\n255\nab";
  }
  write_meta(dir / "trunc.meta", "resolution: 0.1\norigin_x: 0\norigin_y: 0\n");
  EXPECT_THROW(load_map((dir / "trunc.pgm").string()), Error);
}

TEST(GridMap, SaveLoadRoundTrip) {
  const fs::path dir = temp_dir("roundtrip");
  std::mt19937 rng(7);
  std::vector<CellState> cells(31 * 17);
  for (auto &c : cells) c = (rng() % 3 == 0) ? CellState::Occupied : CellState::Free;
  OccupancyGrid g(GridGeometry{31, 17, 0.05, {1.25, -3.5}}, cells);
  save_map(g, (dir / "saved").string());
  OccupancyGrid back = load_map((dir / "saved.pgm").string());
  EXPECT_EQ(back, g);
  EXPECT_EQ(back.fingerprint(), g.fingerprint());
}

TEST(GridMap, FingerprintDistinguishesCells) {
  OccupancyGrid a = OccupancyGrid::filled(5, 5, 0.1, {});
  OccupancyGrid b = a.with_cell({2, 3}, CellState::Occupied);
  EXPECT_NE(a.fingerprint(), b.fingerprint());
}

TEST(Costmap, EmptyGridAllOnes) {
  Costmap c = base_costmap(OccupancyGrid::filled(6, 4, 0.1, {}), 0.5);
  for (double v : c.costs()) EXPECT_EQ(v, 1.0);
}

TEST(Costmap, SingleCellRadiusZero) {
  OccupancyGrid g = OccupancyGrid::filled(7, 7, 0.1, {}).with_cell({3, 3}, CellState::Occupied);
  Costmap c = base_costmap(g, 0.0);
  int lethal = 0;
  for (double v : c.costs()) lethal += v == Costmap::kLethal;
  EXPECT_EQ(lethal, 1);
  EXPECT_TRUE(c.lethal({3, 3}));
}

TEST(Costmap, DiscMatchesBruteForce) {
  OccupancyGrid g = OccupancyGrid::filled(11, 11, 0.1, {}).with_cell({5, 5}, CellState::Occupied);
  Costmap c = base_costmap(g, 0.2);
  for (int y = 0; y < 11; ++y) {
    for (int x = 0; x < 11; ++x) {
      const double d = std::hypot(x - 5, y - 5);
      EXPECT_EQ(c.lethal({x, y}), d <= 2.0 + 1e-9) << x << "," << y;
      if (!c.lethal({x, y})) EXPECT_EQ(c.at({x, y}), 1.0);
    }
  }
}

TEST(Costmap, MonotoneInRadius) {
  std::mt19937 rng(3);
  std::vector<CellState> cells(20 * 20, CellState::Free);
  for (int i = 0; i < 15; ++i) cells[rng() % cells.size()] = CellState::Occupied;
  OccupancyGrid g(GridGeometry{20, 20, 0.1, {}}, cells);
  Costmap prev = base_costmap(g, 0.0);
  for (double r : {0.05, 0.1, 0.15, 0.22, 0.3, 0.45}) {
    Costmap next = base_costmap(g, r);
    for (int y = 0; y < 20; ++y) {
      for (int x = 0; x < 20; ++x) {
        if (prev.lethal({x, y})) EXPECT_TRUE(next.lethal({x, y}));
      }
    }
    prev = next;
  }
}

TEST(GridMap, DiscHitsOccupied) {
  OccupancyGrid g = oracle::grid_from_rows({"....", "..#.", "....", "...."});
  // Occupied cell spans [0.2, 0.3] x [0.1, 0.2].
  EXPECT_TRUE(disc_hits_occupied(g, {0.25, 0.25}, 0.06));
  EXPECT_FALSE(disc_hits_occupied(g, {0.25, 0.3}, 0.09));
  EXPECT_TRUE(disc_hits_occupied(g, {0.05, 0.05}, 0.06));  // grid edge
  EXPECT_FALSE(disc_hits_occupied(g, {0.1, 0.3}, 0.09));
}
