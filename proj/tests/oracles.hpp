/*
 * oracles.hpp
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

// Independent reference implementations used by the unit and acceptance tests.
// Nothing here calls into the code under test beyond plain data types.

#ifndef SOCNAV_TESTS_ORACLES_HPP
#define SOCNAV_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "socnav/crowd.hpp"
#include "socnav/gridmap.hpp"

namespace socnav::oracle {

/// Grid from text rows; '#' is Occupied, anything else Free. Row i is y = i.
inline OccupancyGrid grid_from_rows(const std::vector<std::string> &rows, double resolution = 0.1,
                                    Vec2 origin = {}) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  std::vector<CellState> cells(static_cast<std::size_t>(w * h), CellState::Free);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] == '#') {
        cells[static_cast<std::size_t>(y * w + x)] = CellState::Occupied;
      }
    }
  }
  return OccupancyGrid(GridGeometry{w, h, resolution, origin}, std::move(cells));
}

/// Dijkstra over the same edge model as the planner: 8 neighbors, no diagonal
/// move past a lethal orthogonal neighbor, edge weight = step length * entered cost.
/// Returns +inf when unreachable.
inline double dijkstra_cost(const Costmap &map, const Cell &start, const Cell &goal) {
  const GridGeometry &g = map.geometry();
  const double inf = std::numeric_limits<double>::infinity();
  if (map.lethal(start) || map.lethal(goal)) return inf;
  std::vector<double> dist(g.size(), inf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[g.index(start)] = 0.0;
  open.push({0.0, g.index(start)});
  while (!open.empty()) {
    const auto [d, i] = open.top();
    open.pop();
    if (d > dist[i]) continue;
    const Cell c = g.cell_at(i);
    if (c == goal) return d;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const Cell n{c.x + dx, c.y + dy};
        if (map.lethal(n)) continue;
        if (dx != 0 && dy != 0 && (map.lethal({c.x + dx, c.y}) || map.lethal({c.x, c.y + dy}))) continue;
        const double step = (dx != 0 && dy != 0) ? std::sqrt(2.0) : 1.0;
        const double nd = d + step * map.at(n);
        if (nd < dist[g.index(n)]) {
          dist[g.index(n)] = nd;
          open.push({nd, g.index(n)});
        }
      }
    }
  }
  return inf;
}

/// Cells reachable from `from` through Free cells (4-connected flood fill).
inline std::vector<bool> flood_fill(const OccupancyGrid &grid, const Cell &from) {
  const GridGeometry &g = grid.geometry();
  std::vector<bool> seen(g.size(), false);
  if (grid.occupied(from)) return seen;
  std::vector<Cell> stack{from};
  seen[g.index(from)] = true;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    const Cell next[4] = {{c.x + 1, c.y}, {c.x - 1, c.y}, {c.x, c.y + 1}, {c.x, c.y - 1}};
    for (const Cell &n : next) {
      if (grid.occupied(n) || seen[g.index(n)]) continue;
      seen[g.index(n)] = true;
      stack.push_back(n);
    }
  }
  return seen;
}

/// Amount by which `v` lies on the forbidden (right) side of a half-plane; <= 0 if permitted.
inline double violation(const HalfPlane &h, const Vec2 &v) {
  return h.direction.x * (h.point.y - v.y) - h.direction.y * (h.point.x - v.x);
}

inline double max_violation(const std::vector<HalfPlane> &lines, const Vec2 &v) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const HalfPlane &h : lines) worst = std::max(worst, violation(h, v));
  return worst;
}

struct BruteForceLp {
  Vec2 velocity;
  bool feasible = false;
  /// Distance to preferred when feasible, maximum violation otherwise.
  double objective = 0.0;
};

/**
 * Sampling search over the speed disc: about `samples` grid points inside the
 * disc plus dense samples along the disc boundary and along every constraint
 * line (where constrained optima live). Feasible instances minimize the
 * distance to `preferred`; infeasible ones minimize the maximum violation,
 * refined by a local pattern search.
 */
inline BruteForceLp brute_force_lp(const std::vector<HalfPlane> &lines, const Vec2 &preferred,
                                   double max_speed, int samples = 1000000) {
  const double r = max_speed;
  const double pi = 3.14159265358979323846;
  const int n = static_cast<int>(std::ceil(std::sqrt(samples * 4.0 / pi)));
  const double step = 2.0 * r / (n - 1);
  const int boundary_samples = 20 * n;
  BruteForceLp best;
  best.objective = std::numeric_limits<double>::infinity();
  double best_infeasible = std::numeric_limits<double>::infinity();
  Vec2 best_infeasible_v;

  auto consider = [&](const Vec2 &v) {
    if (v.x * v.x + v.y * v.y > r * r * (1.0 + 1e-12)) return;
    const double viol = max_violation(lines, v);
    if (viol <= 1e-12) {
      const double d = std::hypot(v.x - preferred.x, v.y - preferred.y);
      if (!best.feasible || d < best.objective) {
        best.feasible = true;
        best.objective = d;
        best.velocity = v;
      }
    } else if (viol < best_infeasible) {
      best_infeasible = viol;
      best_infeasible_v = v;
    }
  };

  consider(preferred);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) consider({-r + i * step, -r + j * step});
  }
  for (int k = 0; k < boundary_samples; ++k) {
    const double a = 2.0 * pi * k / boundary_samples;
    consider({r * std::cos(a), r * std::sin(a)});
  }
  for (const HalfPlane &h : lines) {
    // Chord of the line inside the disc.
    const double t0 = -(h.point.x * h.direction.x + h.point.y * h.direction.y);
    const double disc = t0 * t0 + r * r - (h.point.x * h.point.x + h.point.y * h.point.y);
    if (disc < 0.0) continue;
    const double half = std::sqrt(disc);
    for (int k = 0; k <= boundary_samples; ++k) {
      const double t = t0 - half + 2.0 * half * k / boundary_samples;
      consider({h.point.x + t * h.direction.x, h.point.y + t * h.direction.y});
    }
  }

  if (!best.feasible) {
    double window = 4.0 * step;
    for (int stage = 0; stage < 400 && window > 1e-9; ++stage) {
      const Vec2 c = best_infeasible_v;
      const int m = 40;
      for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
          Vec2 v{c.x - window + 2.0 * window * i / m, c.y - window + 2.0 * window * j / m};
          const double len = std::hypot(v.x, v.y);
          if (len > r) v = {v.x * r / len, v.y * r / len};
          consider(v);
        }
      }
      const Vec2 moved = best_infeasible_v;
      if (std::hypot(moved.x - c.x, moved.y - c.y) < window / 4.0) window /= 2.0;
    }
    best.velocity = best_infeasible_v;
    best.objective = best_infeasible;
  }
  return best;
}

/// Distance from point p to segment [a, b].
inline double segment_distance(const Vec2 &p, const Vec2 &a, const Vec2 &b) {
  const Vec2 ab = b - a;
  const double len_sq = ab.x * ab.x + ab.y * ab.y;
  double t = len_sq > 0.0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len_sq : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * ab.x), p.y - (a.y + t * ab.y));
}

}  // namespace socnav::oracle

#endif  // SOCNAV_TESTS_ORACLES_HPP
