/*
 * scenario.cpp
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

#include "socnav/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "socnav/error.hpp"

namespace socnav {

void MapGenParams::validate() const {
  if (!(width > 0.0 && height > 0.0 && resolution > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "mapgen width, height and resolution must be > 0");
  }
  if (!(min_room > 0.0 && wall_thickness > 0.0 && corridor_width >= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "mapgen needs min_room > 0, wall_thickness > 0, corridor_width >= 1");
  }
  if (!(clutter_density >= 0.0 && clutter_density < 1.0 && clutter_min > 0.0 && clutter_min <= clutter_max &&
        clutter_gap >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "mapgen clutter parameters out of range");
  }
  if (min_room + wall_thickness > std::min(width, height)) {
    throw Error(ErrorCode::InvalidArgument, "mapgen min_room does not fit the map");
  }
}

void ScenarioParams::validate() const {
  if (!(min_geodesic >= 0.0 && min_geodesic <= max_geodesic)) {
    throw Error(ErrorCode::InvalidArgument, "scenario geodesic range is empty");
  }
  if (max_attempts <= 0) throw Error(ErrorCode::InvalidArgument, "scenario max_attempts must be > 0");
  if (!(ped_robot_clearance >= 0.0 && ped_separation >= 0.0 && ped_goal_min_distance >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "scenario distances must be >= 0");
  }
}

namespace {

struct Rect {
  int x0, y0, x1, y1;  // half-open
  int w() const { return x1 - x0; }
  int h() const { return y1 - y0; }
};

class Canvas {
 public:
  Canvas(int w, int h) : w_(w), h_(h), cells_(static_cast<std::size_t>(w * h), CellState::Occupied) {}

  bool inside(int x, int y) const { return x >= 0 && y >= 0 && x < w_ && y < h_; }
  CellState &at(int x, int y) { return cells_[static_cast<std::size_t>(y * w_ + x)]; }
  CellState at(int x, int y) const { return cells_[static_cast<std::size_t>(y * w_ + x)]; }

  void fill(const Rect &r, CellState s) {
    for (int y = std::max(r.y0, 0); y < std::min(r.y1, h_); ++y) {
      for (int x = std::max(r.x0, 0); x < std::min(r.x1, w_); ++x) at(x, y) = s;
    }
  }

  bool all_free(const Rect &r) const {
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        if (!inside(x, y) || at(x, y) != CellState::Free) return false;
      }
    }
    return true;
  }

  /// Component labels over Free cells (4-connected); returns the number of components.
  int label(std::vector<int> &labels) const {
    labels.assign(cells_.size(), -1);
    int next = 0;
    std::vector<int> stack;
    for (int i = 0; i < static_cast<int>(cells_.size()); ++i) {
      if (cells_[static_cast<std::size_t>(i)] != CellState::Free || labels[static_cast<std::size_t>(i)] >= 0) continue;
      labels[static_cast<std::size_t>(i)] = next;
      stack.push_back(i);
      while (!stack.empty()) {
        const int c = stack.back();
        stack.pop_back();
        const int x = c % w_;
        const int y = c / w_;
        const int nb[4][2] = {{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}};
        for (const auto &n : nb) {
          if (!inside(n[0], n[1])) continue;
          const int j = n[1] * w_ + n[0];
          if (cells_[static_cast<std::size_t>(j)] == CellState::Free && labels[static_cast<std::size_t>(j)] < 0) {
            labels[static_cast<std::size_t>(j)] = next;
            stack.push_back(j);
          }
        }
      }
      ++next;
    }
    return next;
  }

  std::vector<CellState> take() { return std::move(cells_); }

 private:
  int w_, h_;
  std::vector<CellState> cells_;
};

int cells_of(double meters, double res) { return std::max(1, static_cast<int>(std::lround(meters / res))); }

struct BspNode {
  Rect leaf{};
  int left = -1;
  int right = -1;
  std::vector<int> rooms;  // indices into the room list, whole subtree
};

int build_bsp(std::vector<BspNode> &nodes, std::vector<Rect> &leaves, const Rect &r, int min_side, Rng &rng) {
  const int id = static_cast<int>(nodes.size());
  nodes.push_back({r, -1, -1, {}});
  const bool can_x = r.w() >= 2 * min_side;
  const bool can_y = r.h() >= 2 * min_side;
  if (!can_x && !can_y) {
    nodes[static_cast<std::size_t>(id)].rooms.push_back(static_cast<int>(leaves.size()));
    leaves.push_back(r);
    return id;
  }
  const bool split_x = can_x && (!can_y || r.w() > r.h() || (r.w() == r.h() && rng.below(2) == 0));
  const int span = split_x ? r.w() : r.h();
  const int cut = min_side + static_cast<int>(rng.below(static_cast<std::uint64_t>(span - 2 * min_side + 1)));
  Rect a = r, b = r;
  if (split_x) {
    a.x1 = r.x0 + cut;
    b.x0 = a.x1;
  } else {
    a.y1 = r.y0 + cut;
    b.y0 = a.y1;
  }
  const int left = build_bsp(nodes, leaves, a, min_side, rng);
  const int right = build_bsp(nodes, leaves, b, min_side, rng);
  BspNode &n = nodes[static_cast<std::size_t>(id)];
  n.left = left;
  n.right = right;
  n.rooms = nodes[static_cast<std::size_t>(left)].rooms;
  const auto &rr = nodes[static_cast<std::size_t>(right)].rooms;
  n.rooms.insert(n.rooms.end(), rr.begin(), rr.end());
  return id;
}

Cell random_point_in(const Rect &r, int margin, Rng &rng) {
  const int lo_x = r.x0 + margin, hi_x = std::max(lo_x, r.x1 - margin - 1);
  const int lo_y = r.y0 + margin, hi_y = std::max(lo_y, r.y1 - margin - 1);
  return {lo_x + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi_x - lo_x + 1))),
          lo_y + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi_y - lo_y + 1)))};
}

}  // namespace

OccupancyGrid generate_indoor_map(std::uint64_t seed, const MapGenParams &p) {
  p.validate();
  Rng rng(mix_seed(seed, 0x6d6170u));
  const int w = cells_of(p.width, p.resolution);
  const int h = cells_of(p.height, p.resolution);
  const int wall = cells_of(p.wall_thickness, p.resolution);
  const int corridor = cells_of(p.corridor_width, p.resolution);
  const int min_side = cells_of(p.min_room, p.resolution);
  Canvas canvas(w, h);

  // Leaves tile the interior; each room is its leaf minus a shared wall band.
  std::vector<BspNode> nodes;
  std::vector<Rect> leaves;
  build_bsp(nodes, leaves, {0, 0, w, h}, min_side, rng);
  const int lo = wall - wall / 2;
  const int hi = wall / 2;
  std::vector<Rect> rooms;
  for (const Rect &leaf : leaves) {
    Rect room{leaf.x0 + lo, leaf.y0 + lo, leaf.x1 - hi, leaf.y1 - hi};
    if (leaf.x0 == 0) room.x0 = wall;
    if (leaf.y0 == 0) room.y0 = wall;
    if (leaf.x1 == w) room.x1 = w - wall;
    if (leaf.y1 == h) room.y1 = h - wall;
    rooms.push_back(room);
    canvas.fill(room, CellState::Free);
  }

  // One L-shaped corridor per BSP split joins a room on each side.
  const int half = corridor / 2;
  const Rect interior{wall, wall, w - wall, h - wall};
  auto carve = [&](Rect r) {
    r.x0 = std::max(r.x0, interior.x0);
    r.y0 = std::max(r.y0, interior.y0);
    r.x1 = std::min(r.x1, interior.x1);
    r.y1 = std::min(r.y1, interior.y1);
    if (r.x0 < r.x1 && r.y0 < r.y1) canvas.fill(r, CellState::Free);
  };
  for (const BspNode &n : nodes) {
    if (n.left < 0) continue;
    const auto &lr = nodes[static_cast<std::size_t>(n.left)].rooms;
    const auto &rr = nodes[static_cast<std::size_t>(n.right)].rooms;
    const Rect &ra = rooms[static_cast<std::size_t>(lr[rng.below(lr.size())])];
    const Rect &rb = rooms[static_cast<std::size_t>(rr[rng.below(rr.size())])];
    const Cell a = random_point_in(ra, half + 1, rng);
    const Cell b = random_point_in(rb, half + 1, rng);
    const Cell corner = rng.below(2) == 0 ? Cell{b.x, a.y} : Cell{a.x, b.y};
    carve({std::min(a.x, corner.x) - half, std::min(a.y, corner.y) - half,
           std::max(a.x, corner.x) - half + corridor, std::max(a.y, corner.y) - half + corridor});
    carve({std::min(b.x, corner.x) - half, std::min(b.y, corner.y) - half,
           std::max(b.x, corner.x) - half + corridor, std::max(b.y, corner.y) - half + corridor});
  }

  std::vector<int> labels;
  if (p.clutter_density > 0.0) {
    const int cmin = cells_of(p.clutter_min, p.resolution);
    const int cmax = std::max(cmin, cells_of(p.clutter_max, p.resolution));
    const int gap = static_cast<int>(std::ceil(p.clutter_gap / p.resolution - 1e-9));
    for (const Rect &room : rooms) {
      const double target = p.clutter_density * room.w() * room.h();
      double placed = 0.0;
      for (int attempt = 0; attempt < 50 && placed < target; ++attempt) {
        const int bw = cmin + static_cast<int>(rng.below(static_cast<std::uint64_t>(cmax - cmin + 1)));
        const int bh = cmin + static_cast<int>(rng.below(static_cast<std::uint64_t>(cmax - cmin + 1)));
        if (bw + 2 * gap > room.w() || bh + 2 * gap > room.h()) continue;
        const int x = room.x0 + gap + static_cast<int>(rng.below(static_cast<std::uint64_t>(room.w() - bw - 2 * gap + 1)));
        const int y = room.y0 + gap + static_cast<int>(rng.below(static_cast<std::uint64_t>(room.h() - bh - 2 * gap + 1)));
        const Rect box{x, y, x + bw, y + bh};
        if (!canvas.all_free({box.x0 - gap, box.y0 - gap, box.x1 + gap, box.y1 + gap})) continue;
        canvas.fill(box, CellState::Occupied);
        if (canvas.label(labels) != 1) {
          canvas.fill(box, CellState::Free);
          continue;
        }
        placed += bw * bh;
      }
    }
  }

  // Keep only the largest Free component.
  const int n = canvas.label(labels);
  if (n > 1) {
    std::vector<int> sizes(static_cast<std::size_t>(n), 0);
    for (int l : labels) {
      if (l >= 0) ++sizes[static_cast<std::size_t>(l)];
    }
    const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const int l = labels[static_cast<std::size_t>(y * w + x)];
        if (l >= 0 && l != keep) canvas.at(x, y) = CellState::Occupied;
      }
    }
  }
  return OccupancyGrid(GridGeometry{w, h, p.resolution, {0.0, 0.0}}, canvas.take());
}

std::vector<int> bfs_steps(const Costmap &costmap, const Cell &start) {
  const GridGeometry &g = costmap.geometry();
  std::vector<int> dist(g.size(), -1);
  if (!g.in_bounds(start) || costmap.lethal(start)) return dist;
  std::deque<Cell> queue{start};
  dist[g.index(start)] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    const int d = dist[g.index(c)];
    for (const Cell n : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1}, Cell{c.x, c.y - 1}}) {
      if (!g.in_bounds(n) || costmap.lethal(n) || dist[g.index(n)] >= 0) continue;
      dist[g.index(n)] = d + 1;
      queue.push_back(n);
    }
  }
  return dist;
}

namespace {

std::vector<Cell> traversable_cells(const Costmap &costmap) {
  const GridGeometry &g = costmap.geometry();
  std::vector<Cell> out;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (!costmap.lethal({x, y})) out.push_back({x, y});
    }
  }
  return out;
}

}  // namespace

std::optional<double> geodesic_distance(const World &world, const Cell &a, const Cell &b) {
  const PlanResult path = plan_astar(world.robot_costmap, a, b);
  if (path.status != PlanStatus::Ok) return std::nullopt;
  return path.path.cost * world.grid.resolution();
}

Scenario sample_scenario(const World &world, Rng &rng, std::size_t n_pedestrians, CrowdMode mode,
                         const ScenarioParams &params) {
  params.validate();
  const GridGeometry &g = world.grid.geometry();
  const std::vector<Cell> free = traversable_cells(world.robot_costmap);
  if (free.size() < 2) throw Error(ErrorCode::InvalidScenario, "map has fewer than two traversable cells");

  Scenario s;
  s.mode = mode;
  int attempts = 0;
  bool found = false;
  Cell start{}, goal{};
  while (attempts < params.max_attempts) {
    ++attempts;
    start = free[rng.below(free.size())];
    goal = free[rng.below(free.size())];
    const auto d = geodesic_distance(world, start, goal);
    if (d && *d >= params.min_geodesic && *d <= params.max_geodesic) {
      found = true;
      break;
    }
  }
  if (!found) {
    throw Error(ErrorCode::InvalidScenario,
                "no robot start/goal pair within the geodesic range after " + std::to_string(params.max_attempts) +
                    " attempts");
  }
  const Vec2 start_p = g.cell_to_world(start);
  s.robot_start = {start_p.x, start_p.y, rng.uniform(-kPi, kPi)};
  s.robot_goal = g.cell_to_world(goal);

  if (n_pedestrians == 0) return s;
  const std::vector<int> reach = bfs_steps(world.ped_costmap, start);
  std::vector<Cell> ped_cells;
  for (const Cell &c : traversable_cells(world.ped_costmap)) {
    if (reach[g.index(c)] >= 0) ped_cells.push_back(c);
  }
  if (ped_cells.empty()) throw Error(ErrorCode::InvalidScenario, "no cells reachable by pedestrians");

  while (s.ped_starts.size() < n_pedestrians) {
    if (attempts++ >= params.max_attempts) {
      throw Error(ErrorCode::InvalidScenario, "could not place " + std::to_string(n_pedestrians) + " pedestrians");
    }
    const Vec2 p = g.cell_to_world(ped_cells[rng.below(ped_cells.size())]);
    if (distance(p, start_p) < params.ped_robot_clearance) continue;
    bool ok = true;
    for (const Vec2 &q : s.ped_starts) ok = ok && distance(p, q) >= params.ped_separation;
    if (ok) s.ped_starts.push_back(p);
  }
  for (const Vec2 &p : s.ped_starts) {
    while (true) {
      if (attempts++ >= params.max_attempts) throw Error(ErrorCode::InvalidScenario, "could not place pedestrian goals");
      const Vec2 q = g.cell_to_world(ped_cells[rng.below(ped_cells.size())]);
      if (distance(p, q) >= params.ped_goal_min_distance) {
        s.ped_goals.push_back(q);
        break;
      }
    }
  }
  return s;
}

Scenario scenario_for_seed(const World &world, std::uint64_t seed, std::size_t n_pedestrians, CrowdMode mode,
                           const ScenarioParams &params) {
  Rng rng(mix_seed(seed, 0x7363656eu));
  Scenario s = sample_scenario(world, rng, n_pedestrians, mode, params);
  s.seed = seed;
  return s;
}

MapRef MapRef::parse(const std::string &text) {
  MapRef r;
  if (text.rfind("file:", 0) == 0 && text.size() > 5) {
    r.kind = Kind::File;
    r.path = text.substr(5);
    return r;
  }
  if (text.rfind("gen:", 0) == 0 && text.size() > 4) {
    const std::string digits = text.substr(4);
    if (digits.find_first_not_of("0123456789") == std::string::npos && digits.size() <= 19) {
      r.kind = Kind::Generated;
      r.seed = std::stoull(digits);
      return r;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "map reference must be file:<path> or gen:<seed>, got '" + text + "'");
}

std::string MapRef::str() const {
  return kind == Kind::File ? "file:" + path : "gen:" + std::to_string(seed);
}

OccupancyGrid resolve_map(const MapRef &ref, const MapGenParams &params) {
  if (ref.kind == MapRef::Kind::File) return load_map(ref.path);
  return generate_indoor_map(ref.seed, params);
}

}  // namespace socnav
