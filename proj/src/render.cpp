/*
 * render.cpp
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

#include "socnav/render.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "socnav/error.hpp"

namespace socnav {

RgbImage::RgbImage(int w, int h, Rgb fill) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h * 3) {
  for (std::size_t i = 0; i < pixels.size(); i += 3) {
    pixels[i] = fill.r;
    pixels[i + 1] = fill.g;
    pixels[i + 2] = fill.b;
  }
}

Rgb RgbImage::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  return {pixels[i], pixels[i + 1], pixels[i + 2]};
}

void RgbImage::set(int x, int y, Rgb c) {
  if (x < 0 || y < 0 || x >= width || y >= height) return;
  const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
  pixels[i] = c.r;
  pixels[i + 1] = c.g;
  pixels[i + 2] = c.b;
}

std::pair<int, int> world_to_pixel(const GridGeometry &g, const Vec2 &p, int scale) {
  const double fx = (p.x - g.origin.x) / g.resolution * scale;
  const double fy = (p.y - g.origin.y) / g.resolution * scale;
  return {static_cast<int>(std::floor(fx)), g.height * scale - 1 - static_cast<int>(std::floor(fy))};
}

namespace {

constexpr Rgb kWhite{255, 255, 255};
constexpr Rgb kBlack{0, 0, 0};
constexpr Rgb kRobot{31, 119, 180};
constexpr Rgb kGoal{44, 160, 44};
constexpr Rgb kWaypoint{230, 171, 2};
constexpr Rgb kPathOnCostmap{31, 119, 180};
constexpr Rgb kShade{214, 39, 40};
constexpr std::array<Rgb, 8> kPedPalette{{{255, 127, 14},
                                          {148, 103, 189},
                                          {140, 86, 75},
                                          {227, 119, 194},
                                          {127, 127, 127},
                                          {188, 189, 34},
                                          {23, 190, 207},
                                          {214, 39, 40}}};

void disc(RgbImage &img, int cx, int cy, int r, Rgb c) {
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy <= r * r) img.set(cx + dx, cy + dy, c);
    }
  }
}

void ring(RgbImage &img, int cx, int cy, int r, Rgb c) {
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const int d2 = dx * dx + dy * dy;
      if (d2 <= r * r && d2 > (r - 1) * (r - 1)) img.set(cx + dx, cy + dy, c);
    }
  }
}

void square(RgbImage &img, int cx, int cy, int r, Rgb c) {
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) img.set(cx + dx, cy + dy, c);
  }
}

void line(RgbImage &img, std::pair<int, int> a, std::pair<int, int> b, Rgb c) {
  auto [x0, y0] = a;
  const auto [x1, y1] = b;
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  while (true) {
    img.set(x0, y0, c);
    if (x0 == x1 && y0 == y1) return;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

void polyline(RgbImage &img, const GridGeometry &g, const std::vector<Vec2> &pts, int scale, Rgb c) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    line(img, world_to_pixel(g, pts[i - 1], scale), world_to_pixel(g, pts[i], scale), c);
  }
}

void fill_cell(RgbImage &img, int cx, int cy, int height, int scale, Rgb c) {
  const int top = (height - 1 - cy) * scale;
  for (int y = 0; y < scale; ++y) {
    for (int x = 0; x < scale; ++x) img.set(cx * scale + x, top + y, c);
  }
}

int marker_radius(int scale) { return std::max(2, scale * 3 / 2); }

void heading_tick(RgbImage &img, const GridGeometry &g, const Vec2 &p, double heading, int scale, Rgb c) {
  const Vec2 tip = p + unit_from_angle(heading) * (g.resolution * 3.0);
  line(img, world_to_pixel(g, p, scale), world_to_pixel(g, tip, scale), c);
}

}  // namespace

RgbImage render_replay(const ReplayLog &log, const OccupancyGrid &grid, const RenderOptions &options) {
  const int s = options.scale;
  if (s <= 0) throw Error(ErrorCode::InvalidArgument, "render scale must be > 0");
  const GridGeometry &g = grid.geometry();
  RgbImage img(g.width * s, g.height * s, kWhite);
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (grid.at({x, y}) == CellState::Occupied) fill_cell(img, x, y, g.height, s, {64, 64, 64});
    }
  }
  const int r = marker_radius(s);

  std::vector<Vec2> waypoints = log.initial_waypoints;
  for (const ReplayStep &st : log.steps) {
    if (st.new_waypoints) waypoints.insert(waypoints.end(), st.new_waypoints->begin(), st.new_waypoints->end());
  }
  for (const Vec2 &w : waypoints) {
    const auto [x, y] = world_to_pixel(g, w, s);
    square(img, x, y, std::max(1, s / 2), kWaypoint);
  }

  for (std::size_t i = 0; i < log.initial_peds.size(); ++i) {
    std::vector<Vec2> path{log.initial_peds[i]};
    for (const ReplayStep &st : log.steps) {
      if (i < st.peds.size()) path.push_back(st.peds[i]);
    }
    const Rgb c = kPedPalette[i % kPedPalette.size()];
    polyline(img, g, path, s, c);
    const auto [x, y] = world_to_pixel(g, path.back(), s);
    disc(img, x, y, r, c);
  }

  std::vector<Vec2> robot{log.initial_pose.position()};
  for (const ReplayStep &st : log.steps) robot.push_back(st.pose.position());
  polyline(img, g, robot, s, kRobot);

  {
    const auto [x, y] = world_to_pixel(g, log.scenario.robot_goal, s);
    square(img, x, y, r, kGoal);
  }
  const Pose last = log.steps.empty() ? log.initial_pose : log.steps.back().pose;
  const auto [x, y] = world_to_pixel(g, last.position(), s);
  disc(img, x, y, r, kRobot);
  heading_tick(img, g, last.position(), last.theta, s, kBlack);
  return img;
}

RgbImage render_costmap(const CostmapDump &dump, const RenderOptions &options) {
  const int s = options.scale;
  if (s <= 0) throw Error(ErrorCode::InvalidArgument, "render scale must be > 0");
  const Costmap &cm = dump.costmap;
  const GridGeometry &g = cm.geometry();
  RgbImage img(g.width * s, g.height * s, kWhite);
  const double weight = dump.weight > 0.0 ? dump.weight : 1.0;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      const double c = cm.at({x, y});
      if (c == Costmap::kLethal) {
        fill_cell(img, x, y, g.height, s, kBlack);
        continue;
      }
      const double a = std::clamp((c - 1.0) / weight, 0.0, 1.0);
      if (a <= 0.0) continue;
      auto mix = [a](std::uint8_t fg) {
        return static_cast<std::uint8_t>(std::lround(255.0 + (fg - 255.0) * a));
      };
      fill_cell(img, x, y, g.height, s, {mix(kShade.r), mix(kShade.g), mix(kShade.b)});
    }
  }
  polyline(img, g, dump.path, s, kPathOnCostmap);
  for (std::size_t i = 0; i < dump.peds.size(); ++i) {
    const PedestrianEstimate &p = dump.peds[i];
    const auto [x, y] = world_to_pixel(g, p.world_position, s);
    const int r = std::max(2, static_cast<int>(std::lround(p.radius / g.resolution * s)));
    ring(img, x, y, r, kBlack);
    heading_tick(img, g, p.world_position, p.world_heading, s, kBlack);
  }
  return img;
}

std::vector<std::uint8_t> encode_png(const RgbImage &image) {
  if (image.width <= 0 || image.height <= 0) throw Error(ErrorCode::InvalidArgument, "cannot encode an empty image");
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, image.pixels.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::Io, "png: " + msg);
  }
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0, image.pixels.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::Io, "png: " + msg);
  }
  out.resize(size);
  return out;
}

RgbImage decode_png(const std::vector<std::uint8_t> &bytes) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::Parse, "png: " + msg);
  }
  png.format = PNG_FORMAT_RGB;
  RgbImage img(static_cast<int>(png.width), static_cast<int>(png.height), kBlack);
  if (!png_image_finish_read(&png, nullptr, img.pixels.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::Parse, "png: " + msg);
  }
  return img;
}

void write_png(const RgbImage &image, const std::string &path) {
  const std::vector<std::uint8_t> bytes = encode_png(image);
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
}

}  // namespace socnav
