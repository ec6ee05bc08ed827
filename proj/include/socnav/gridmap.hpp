/*
 * gridmap.hpp
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

#ifndef SOCNAV_GRIDMAP_HPP
#define SOCNAV_GRIDMAP_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "socnav/geometry.hpp"

namespace socnav {

struct Cell {
  int x = 0;
  int y = 0;

  constexpr bool operator==(const Cell &) const = default;
};

enum class CellState : std::uint8_t { Free = 0, Occupied = 1 };

/// Dimensions and placement shared by grids and costmaps.
struct GridGeometry {
  int width = 0;
  int height = 0;
  double resolution = 0.1;
  Vec2 origin;

  bool in_bounds(const Cell &c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
  }
  std::size_t index(const Cell &c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(c.x);
  }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(width)),
            static_cast<int>(index / static_cast<std::size_t>(width))};
  }
  std::size_t size() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  /// floor((p - origin) / resolution); nullopt outside the grid extent.
  std::optional<Cell> world_to_cell(const Vec2 &p) const;

  /// Center of the cell in world coordinates.
  Vec2 cell_to_world(const Cell &c) const {
    return {origin.x + (c.x + 0.5) * resolution, origin.y + (c.y + 0.5) * resolution};
  }

  bool operator==(const GridGeometry &) const = default;
};

/// Static world layout. Immutable once built; copy to modify.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(GridGeometry geometry, std::vector<CellState> cells);

  static OccupancyGrid filled(int width, int height, double resolution, Vec2 origin,
                              CellState state = CellState::Free);

  const GridGeometry &geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  double resolution() const { return geometry_.resolution; }
  Vec2 origin() const { return geometry_.origin; }

  bool in_bounds(const Cell &c) const { return geometry_.in_bounds(c); }
  std::optional<Cell> world_to_cell(const Vec2 &p) const { return geometry_.world_to_cell(p); }
  Vec2 cell_to_world(const Cell &c) const { return geometry_.cell_to_world(c); }

  CellState at(const Cell &c) const { return cells_[geometry_.index(c)]; }

  /// Out-of-bounds cells count as occupied.
  bool occupied(const Cell &c) const {
    return !in_bounds(c) || cells_[geometry_.index(c)] == CellState::Occupied;
  }
  bool occupied_at(const Vec2 &p) const;

  std::span<const CellState> cells() const { return cells_; }
  std::size_t occupied_count() const;

  OccupancyGrid with_cell(const Cell &c, CellState state) const;

  /// FNV-1a digest over geometry and cells; identifies a map in replay logs.
  std::uint64_t fingerprint() const;

  bool operator==(const OccupancyGrid &) const = default;

 private:
  GridGeometry geometry_;
  std::vector<CellState> cells_;
};

/// Overlap shallower than this counts as touching, not colliding.
inline constexpr double kContactTolerance = 1e-9;

/// True if a disc overlaps any Occupied (or out-of-grid) cell by more than kContactTolerance.
bool disc_hits_occupied(const OccupancyGrid &grid, const Vec2 &center, double radius);

/// Traversal-cost field. Free cells cost at least 1; lethal cells are never expanded.
class Costmap {
 public:
  static constexpr double kLethal = std::numeric_limits<double>::infinity();

  Costmap() = default;
  Costmap(GridGeometry geometry, std::vector<double> cost);

  const GridGeometry &geometry() const { return geometry_; }
  int width() const { return geometry_.width; }
  int height() const { return geometry_.height; }
  double resolution() const { return geometry_.resolution; }

  double at(const Cell &c) const { return cost_[geometry_.index(c)]; }
  bool lethal(const Cell &c) const {
    return !geometry_.in_bounds(c) || cost_[geometry_.index(c)] == kLethal;
  }
  std::span<const double> costs() const { return cost_; }

  bool operator==(const Costmap &) const = default;

 private:
  GridGeometry geometry_;
  std::vector<double> cost_;
};

/// Occupied cells and every cell whose center lies within `robot_radius` of an
/// Occupied cell center become lethal; all other cells cost 1.
Costmap base_costmap(const OccupancyGrid &grid, double robot_radius);

struct MapLoadOptions {
  int occupied_threshold = 128;
};

/// Loads a grayscale PGM (P2/P5) or PNG image with its `.meta` sidecar.
///
/// Pixel column x, row y maps to cell (x, y). Luminance below the threshold is
/// Occupied. The sidecar lives next to the image with the extension replaced by
/// `.meta` and holds `key: value` lines for `resolution`, `origin_x`,
/// `origin_y` and optionally `occupied_threshold`.
OccupancyGrid load_map(const std::string &path, std::optional<MapLoadOptions> options = {});

/// Writes `<stem>.pgm` (P5, Occupied = 0, Free = 254) and `<stem>.meta`.
void save_map(const OccupancyGrid &grid, const std::string &stem);

std::string sidecar_path(const std::string &image_path);

}  // namespace socnav

#endif  // SOCNAV_GRIDMAP_HPP
