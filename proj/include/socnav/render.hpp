/*
 * render.hpp
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

#ifndef SOCNAV_RENDER_HPP
#define SOCNAV_RENDER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "socnav/gridmap.hpp"
#include "socnav/planner.hpp"
#include "socnav/replay.hpp"

namespace socnav {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  bool operator==(const Rgb &) const = default;
};

/// 8-bit RGB raster, row 0 at the top (largest world y).
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  RgbImage() = default;
  RgbImage(int w, int h, Rgb fill);
  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  bool operator==(const RgbImage &) const = default;
};

struct RenderOptions {
  /// Pixels per grid cell.
  int scale = 4;
};

/// Map in grayscale, robot path, pedestrian paths, waypoints, start and goal.
RgbImage render_replay(const ReplayLog &log, const OccupancyGrid &grid, const RenderOptions &options = {});

/// Costmap with the pedestrian cost as red alpha shading, pedestrian markers and the path.
RgbImage render_costmap(const CostmapDump &dump, const RenderOptions &options = {});

/// Pixel center of a world point.
std::pair<int, int> world_to_pixel(const GridGeometry &geometry, const Vec2 &p, int scale);

std::vector<std::uint8_t> encode_png(const RgbImage &image);
RgbImage decode_png(const std::vector<std::uint8_t> &bytes);
void write_png(const RgbImage &image, const std::string &path);

}  // namespace socnav

#endif  // SOCNAV_RENDER_HPP
