/*
 * gridmap.cpp
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

#include "socnav/gridmap.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "socnav/error.hpp"

namespace socnav {

std::optional<Cell> GridGeometry::world_to_cell(const Vec2 &p) const {
  const double fx = std::floor((p.x - origin.x) / resolution);
  const double fy = std::floor((p.y - origin.y) / resolution);
  if (!(fx >= 0.0 && fy >= 0.0 && fx < width && fy < height)) return std::nullopt;
  return Cell{static_cast<int>(fx), static_cast<int>(fy)};
}

OccupancyGrid::OccupancyGrid(GridGeometry geometry, std::vector<CellState> cells)
    : geometry_(geometry), cells_(std::move(cells)) {
  if (geometry_.width <= 0 || geometry_.height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  }
  if (!(geometry_.resolution > 0.0) || !std::isfinite(geometry_.resolution)) {
    throw Error(ErrorCode::InvalidArgument, "grid resolution must be positive");
  }
  if (cells_.size() != geometry_.size()) {
    throw Error(ErrorCode::InvalidArgument, "cell count does not match grid dimensions");
  }
}

OccupancyGrid OccupancyGrid::filled(int width, int height, double resolution, Vec2 origin,
                                    CellState state) {
  GridGeometry g{width, height, resolution, origin};
  if (width <= 0 || height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "grid dimensions must be positive");
  }
  return OccupancyGrid(g, std::vector<CellState>(g.size(), state));
}

bool OccupancyGrid::occupied_at(const Vec2 &p) const {
  const auto c = world_to_cell(p);
  return !c || cells_[geometry_.index(*c)] == CellState::Occupied;
}

std::size_t OccupancyGrid::occupied_count() const {
  return static_cast<std::size_t>(
      std::count(cells_.begin(), cells_.end(), CellState::Occupied));
}

OccupancyGrid OccupancyGrid::with_cell(const Cell &c, CellState state) const {
  if (!in_bounds(c)) throw Error(ErrorCode::OutOfBounds, "cell outside grid");
  OccupancyGrid copy = *this;
  copy.cells_[geometry_.index(c)] = state;
  return copy;
}

namespace {

void fnv_bytes(std::uint64_t &h, const void *data, std::size_t n) {
  const auto *p = static_cast<const unsigned char *>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
}

}  // namespace

std::uint64_t OccupancyGrid::fingerprint() const {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  fnv_bytes(h, &geometry_.width, sizeof geometry_.width);
  fnv_bytes(h, &geometry_.height, sizeof geometry_.height);
  fnv_bytes(h, &geometry_.resolution, sizeof geometry_.resolution);
  fnv_bytes(h, &geometry_.origin.x, sizeof geometry_.origin.x);
  fnv_bytes(h, &geometry_.origin.y, sizeof geometry_.origin.y);
  fnv_bytes(h, cells_.data(), cells_.size());
  return h;
}

bool disc_hits_occupied(const OccupancyGrid &grid, const Vec2 &center, double radius) {
  const GridGeometry &g = grid.geometry();
  const double res = g.resolution;
  const int x0 = static_cast<int>(std::floor((center.x - radius - g.origin.x) / res));
  const int x1 = static_cast<int>(std::floor((center.x + radius - g.origin.x) / res));
  const int y0 = static_cast<int>(std::floor((center.y - radius - g.origin.y) / res));
  const int y1 = static_cast<int>(std::floor((center.y + radius - g.origin.y) / res));
  const double inner = std::max(0.0, radius - kContactTolerance);
  const double r2 = inner * inner;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (!grid.occupied({x, y})) continue;
      const double lo_x = g.origin.x + x * res;
      const double lo_y = g.origin.y + y * res;
      const double dx = std::max({lo_x - center.x, 0.0, center.x - (lo_x + res)});
      const double dy = std::max({lo_y - center.y, 0.0, center.y - (lo_y + res)});
      if (dx * dx + dy * dy < r2) return true;
    }
  }
  return false;
}

Costmap::Costmap(GridGeometry geometry, std::vector<double> cost)
    : geometry_(geometry), cost_(std::move(cost)) {
  if (cost_.size() != geometry_.size()) {
    throw Error(ErrorCode::InvalidArgument, "cost count does not match grid dimensions");
  }
}

Costmap base_costmap(const OccupancyGrid &grid, double robot_radius) {
  if (robot_radius < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "robot radius must be nonnegative");
  }
  const GridGeometry &g = grid.geometry();
  std::vector<double> cost(g.size(), 1.0);

  const double r_cells = robot_radius / g.resolution;
  const int reach = static_cast<int>(std::floor(r_cells + 1e-9));
  const double r2 = r_cells * r_cells + 1e-9;
  std::vector<Cell> offsets;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (dx * dx + dy * dy <= r2) offsets.push_back({dx, dy});
    }
  }

  // Only occupied cells bordering free space can be the nearest obstacle of a
  // free cell, so stamping from those alone is exact.
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (grid.at({x, y}) != CellState::Occupied) continue;
      cost[g.index({x, y})] = Costmap::kLethal;
      const bool border = (x > 0 && grid.at({x - 1, y}) == CellState::Free) ||
                          (x + 1 < g.width && grid.at({x + 1, y}) == CellState::Free) ||
                          (y > 0 && grid.at({x, y - 1}) == CellState::Free) ||
                          (y + 1 < g.height && grid.at({x, y + 1}) == CellState::Free);
      if (!border) continue;
      for (const Cell &o : offsets) {
        const Cell c{x + o.x, y + o.y};
        if (g.in_bounds(c)) cost[g.index(c)] = Costmap::kLethal;
      }
    }
  }
  return Costmap(g, std::move(cost));
}

// ---------------------------------------------------------------------------
// Map files

std::string sidecar_path(const std::string &image_path) {
  std::filesystem::path p(image_path);
  p.replace_extension(".meta");
  return p.string();
}

namespace {

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> luminance;
};

std::string trim(const std::string &s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::map<std::string, std::string> read_sidecar(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open map metadata '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto sep = line.find_first_of(":=");
    if (sep == std::string::npos) {
      throw Error(ErrorCode::Parse,
                  path + ":" + std::to_string(line_no) + ": expected 'key: value'");
    }
    kv[trim(line.substr(0, sep))] = trim(line.substr(sep + 1));
  }
  return kv;
}

double parse_number(const std::map<std::string, std::string> &kv, const std::string &key,
                    const std::string &path) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    throw Error(ErrorCode::Parse, "map metadata '" + path + "' is missing '" + key + "'");
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != it->second.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::Parse,
                "map metadata '" + path + "': invalid value for '" + key + "'");
  }
  return v;
}

Image read_pgm(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open map image '" + path + "'");
  std::string magic;
  in >> magic;
  if (magic != "P5" && magic != "P2") {
    throw Error(ErrorCode::Parse, "'" + path + "' is not a grayscale PGM");
  }
  auto next_int = [&]() {
    for (;;) {
      in >> std::ws;
      if (in.peek() == '#') {
        std::string comment;
        std::getline(in, comment);
        continue;
      }
      int v = -1;
      if (!(in >> v)) throw Error(ErrorCode::Parse, "truncated PGM header in '" + path + "'");
      return v;
    }
  };
  Image img;
  img.width = next_int();
  img.height = next_int();
  const int maxval = next_int();
  if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 65535) {
    throw Error(ErrorCode::Parse, "invalid PGM header in '" + path + "'");
  }
  const std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  img.luminance.resize(n);
  auto scale = [maxval](int v) {
    return static_cast<std::uint8_t>(maxval == 255 ? v : (v * 255 + maxval / 2) / maxval);
  };
  if (magic == "P2") {
    for (std::size_t i = 0; i < n; ++i) {
      int v = -1;
      if (!(in >> v) || v < 0 || v > maxval) {
        throw Error(ErrorCode::Parse, "invalid PGM pixel data in '" + path + "'");
      }
      img.luminance[i] = scale(v);
    }
    return img;
  }
  in.get();  // single whitespace after maxval
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  std::vector<unsigned char> raw(n * bytes_per);
  in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw Error(ErrorCode::Parse, "truncated PGM pixel data in '" + path + "'");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const int v = bytes_per == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
    if (v > maxval) throw Error(ErrorCode::Parse, "PGM pixel exceeds maxval in '" + path + "'");
    img.luminance[i] = scale(v);
  }
  return img;
}

Image read_png(const std::string &path) {
  png_image png{};
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::Parse, "cannot read PNG '" + path + "': " + msg);
  }
  png.format = PNG_FORMAT_GRAY;
  Image img;
  img.width = static_cast<int>(png.width);
  img.height = static_cast<int>(png.height);
  img.luminance.resize(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, img.luminance.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::Parse, "cannot decode PNG '" + path + "': " + msg);
  }
  return img;
}

std::string lower_extension(const std::string &path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

OccupancyGrid load_map(const std::string &path, std::optional<MapLoadOptions> options) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::Io, "map image '" + path + "' does not exist");
  }
  const std::string meta_path = sidecar_path(path);
  const auto kv = read_sidecar(meta_path);
  const double resolution = parse_number(kv, "resolution", meta_path);
  const double origin_x = parse_number(kv, "origin_x", meta_path);
  const double origin_y = parse_number(kv, "origin_y", meta_path);
  if (!(resolution > 0.0)) {
    throw Error(ErrorCode::Parse, "map metadata '" + meta_path + "': resolution must be > 0");
  }
  int threshold = 128;
  if (kv.count("occupied_threshold")) {
    threshold = static_cast<int>(parse_number(kv, "occupied_threshold", meta_path));
  }
  if (options) threshold = options->occupied_threshold;

  const std::string ext = lower_extension(path);
  Image img;
  if (ext == ".png") {
    img = read_png(path);
  } else if (ext == ".pgm") {
    img = read_pgm(path);
  } else {
    throw Error(ErrorCode::Parse, "unsupported map image type '" + ext + "'");
  }

  GridGeometry g{img.width, img.height, resolution, {origin_x, origin_y}};
  std::vector<CellState> cells(g.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i] = img.luminance[i] < threshold ? CellState::Occupied : CellState::Free;
  }
  return OccupancyGrid(g, std::move(cells));
}

void save_map(const OccupancyGrid &grid, const std::string &stem) {
  const std::string image_path = stem + ".pgm";
  {
    std::ofstream out(image_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + image_path + "'");
    out << "P5\n" << grid.width() << ' ' << grid.height() << "\n255\n";
    std::vector<char> row(static_cast<std::size_t>(grid.width()));
    for (int y = 0; y < grid.height(); ++y) {
      for (int x = 0; x < grid.width(); ++x) {
        row[static_cast<std::size_t>(x)] =
            grid.at({x, y}) == CellState::Occupied ? char(0) : char(254);
      }
      out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw Error(ErrorCode::Io, "write failed for '" + image_path + "'");
  }
  const std::string meta_path = sidecar_path(image_path);
  std::ofstream meta(meta_path);
  if (!meta) throw Error(ErrorCode::Io, "cannot write '" + meta_path + "'");
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "image: %s\nresolution: %.17g\norigin_x: %.17g\norigin_y: %.17g\n"
                "occupied_threshold: 128\n",
                std::filesystem::path(image_path).filename().string().c_str(),
                grid.resolution(), grid.origin().x, grid.origin().y);
  meta << buf;
  if (!meta) throw Error(ErrorCode::Io, "write failed for '" + meta_path + "'");
}

}  // namespace socnav
