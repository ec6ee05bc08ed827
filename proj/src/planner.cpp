/*
 * planner.cpp
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

#include "socnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>

#include "socnav/error.hpp"

namespace socnav {

const char *proximity_mode_name(ProximityMode mode) {
  return mode == ProximityMode::AsWritten ? "as_written" : "inverse";
}

std::optional<ProximityMode> parse_proximity_mode(const std::string &name) {
  if (name == "as_written") return ProximityMode::AsWritten;
  if (name == "inverse") return ProximityMode::Inverse;
  return std::nullopt;
}

void GaussianParams::validate() const {
  if (!(w_x > w_y && w_y > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "gaussian widths must satisfy w_x > w_y > 0");
  }
  if (forward_shift < 0) throw Error(ErrorCode::InvalidArgument, "forward_shift must be >= 0");
  if (!(max_distance > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_distance must be > 0");
  if (!(weight >= 0.0)) throw Error(ErrorCode::InvalidArgument, "pedestrian cost weight must be >= 0");
  if (!(cell_size > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell_size must be > 0");
}

GaussianShape gaussian_shape(const PedestrianEstimate &ped, const GaussianParams &params) {
  GaussianShape s;
  s.heading = unit_from_angle(ped.world_heading);
  s.center = ped.world_position + s.heading * (params.forward_shift * params.cell_size);
  double r = 0.0;
  if (params.proximity == ProximityMode::AsWritten) {
    // Floor only guards the degenerate zero-distance case; any pedestrian that
    // close has already collided with the robot.
    r = std::max(ped.distance / params.max_distance, 0.01);
  } else {
    r = std::clamp(1.0 - ped.distance / params.max_distance, 0.1, 1.0);
  }
  s.sigma_x = r * params.w_x;
  s.sigma_y = r * params.w_y;
  return s;
}

namespace {

double evaluate(const GaussianShape &s, double amplitude, const Vec2 &query) {
  const Vec2 d = query - s.center;
  const double along = dot(d, s.heading) / s.sigma_x;
  const double lateral = det(s.heading, d) / s.sigma_y;
  return amplitude * std::exp(-0.5 * (along * along + lateral * lateral));
}

}  // namespace

double gaussian_cost(const Vec2 &query, const PedestrianEstimate &ped, const GaussianParams &params) {
  return evaluate(gaussian_shape(ped, params), params.amplitude, query);
}

Costmap inflate_pedestrians(const Costmap &base, std::span<const PedestrianEstimate> peds,
                            const GaussianParams &params) {
  if (peds.empty()) return base;
  const GridGeometry &g = base.geometry();
  std::vector<double> cost(base.costs().begin(), base.costs().end());
  for (const PedestrianEstimate &ped : peds) {
    const GaussianShape s = gaussian_shape(ped, params);
    const double cutoff = 3.0 * s.sigma_x;
    const double cutoff_sq = cutoff * cutoff;
    const int x0 = std::max(0, static_cast<int>(std::floor((s.center.x - cutoff - g.origin.x) / g.resolution)));
    const int x1 = std::min(g.width - 1, static_cast<int>(std::floor((s.center.x + cutoff - g.origin.x) / g.resolution)));
    const int y0 = std::max(0, static_cast<int>(std::floor((s.center.y - cutoff - g.origin.y) / g.resolution)));
    const int y1 = std::min(g.height - 1, static_cast<int>(std::floor((s.center.y + cutoff - g.origin.y) / g.resolution)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        double &c = cost[g.index({x, y})];
        if (c == Costmap::kLethal) continue;
        const Vec2 q = g.cell_to_world({x, y});
        if (abs_sq(q - s.center) > cutoff_sq) continue;
        c += params.weight * evaluate(s, params.amplitude, q);
      }
    }
  }
  return Costmap(g, std::move(cost));
}

Costmap stamp_static_pedestrians(const Costmap &base, std::span<const PedestrianEstimate> peds,
                                 double radius) {
  if (peds.empty()) return base;
  const GridGeometry &g = base.geometry();
  std::vector<double> cost(base.costs().begin(), base.costs().end());
  const double r2 = radius * radius;
  for (const PedestrianEstimate &ped : peds) {
    const Vec2 p = ped.world_position;
    const int x0 = std::max(0, static_cast<int>(std::floor((p.x - radius - g.origin.x) / g.resolution)));
    const int x1 = std::min(g.width - 1, static_cast<int>(std::floor((p.x + radius - g.origin.x) / g.resolution)));
    const int y0 = std::max(0, static_cast<int>(std::floor((p.y - radius - g.origin.y) / g.resolution)));
    const int y1 = std::min(g.height - 1, static_cast<int>(std::floor((p.y + radius - g.origin.y) / g.resolution)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (abs_sq(g.cell_to_world({x, y}) - p) <= r2) cost[g.index({x, y})] = Costmap::kLethal;
      }
    }
  }
  return Costmap(g, std::move(cost));
}

// ---------------------------------------------------------------------------
// A*

namespace {

constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
constexpr double kSqrt2 = 1.4142135623730951;

struct OpenEntry {
  double f;
  double g;
  std::uint32_t index;
};

struct OpenOrder {
  bool operator()(const OpenEntry &a, const OpenEntry &b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.index > b.index;
  }
};

}  // namespace

PlanResult plan_astar(const Costmap &costmap, const Cell &start, const Cell &goal) {
  PlanResult result;
  if (costmap.lethal(start) || costmap.lethal(goal)) {
    result.status = PlanStatus::InvalidEndpoint;
    return result;
  }
  if (start == goal) {
    result.status = PlanStatus::Ok;
    result.path.cells = {start};
    return result;
  }

  const GridGeometry &geo = costmap.geometry();
  const std::size_t n = geo.size();
  std::vector<double> g(n, std::numeric_limits<double>::infinity());
  std::vector<std::int32_t> parent(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  auto heuristic = [&](const Cell &c) {
    const double dx = c.x - goal.x;
    const double dy = c.y - goal.y;
    return std::sqrt(dx * dx + dy * dy);
  };

  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  const auto start_index = static_cast<std::uint32_t>(geo.index(start));
  const auto goal_index = static_cast<std::uint32_t>(geo.index(goal));
  g[start_index] = 0.0;
  open.push({heuristic(start), 0.0, start_index});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.index]) continue;
    closed[top.index] = 1;
    if (top.index == goal_index) break;
    const Cell c = geo.cell_at(top.index);
    for (int k = 0; k < 8; ++k) {
      const Cell nb{c.x + kDx[k], c.y + kDy[k]};
      if (costmap.lethal(nb)) continue;
      const bool diagonal = k >= 4;
      if (diagonal && (costmap.lethal({c.x + kDx[k], c.y}) || costmap.lethal({c.x, c.y + kDy[k]}))) {
        continue;
      }
      const auto ni = static_cast<std::uint32_t>(geo.index(nb));
      if (closed[ni]) continue;
      const double step = diagonal ? kSqrt2 : 1.0;
      const double tentative = top.g + step * costmap.at(nb);
      if (tentative < g[ni]) {
        g[ni] = tentative;
        parent[ni] = static_cast<std::int32_t>(top.index);
        open.push({tentative + heuristic(nb), tentative, ni});
      }
    }
  }

  if (!closed[goal_index]) {
    result.status = PlanStatus::NoPath;
    return result;
  }
  std::vector<Cell> cells;
  for (std::int32_t i = static_cast<std::int32_t>(goal_index); i >= 0; i = parent[static_cast<std::size_t>(i)]) {
    cells.push_back(geo.cell_at(static_cast<std::size_t>(i)));
  }
  std::reverse(cells.begin(), cells.end());
  result.status = PlanStatus::Ok;
  result.path.cells = std::move(cells);
  result.path.cost = g[goal_index];
  return result;
}

PlanResult plan_astar(const Costmap &costmap, const Vec2 &start, const Vec2 &goal) {
  const auto s = costmap.geometry().world_to_cell(start);
  const auto t = costmap.geometry().world_to_cell(goal);
  if (!s || !t) {
    PlanResult r;
    r.status = PlanStatus::InvalidEndpoint;
    return r;
  }
  return plan_astar(costmap, *s, *t);
}

double path_length(const GridGeometry &geometry, std::span<const Cell> cells) {
  double cells_len = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    const bool diagonal = cells[i].x != cells[i - 1].x && cells[i].y != cells[i - 1].y;
    cells_len += diagonal ? kSqrt2 : 1.0;
  }
  return cells_len * geometry.resolution;
}

// ---------------------------------------------------------------------------
// Waypoints

Waypoints extract_waypoints(const GridGeometry &geometry, std::span<const Cell> path, double spacing) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, "cannot extract waypoints from an empty path");
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "waypoint spacing must be > 0");
  Waypoints wp;
  wp.spacing = spacing;
  std::vector<Vec2> pts;
  pts.reserve(path.size());
  for (const Cell &c : path) pts.push_back(geometry.cell_to_world(c));
  std::vector<double> arc(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) arc[i] = arc[i - 1] + distance(pts[i - 1], pts[i]);
  const double total = arc.back();

  if (total + 1e-9 >= spacing) {
    std::size_t seg = 0;
    for (int k = 0;; ++k) {
      const double s = k * spacing;
      if (s >= total - 1e-6) break;
      while (seg + 1 < pts.size() && arc[seg + 1] < s) ++seg;
      if (seg + 1 >= pts.size()) break;
      const double len = arc[seg + 1] - arc[seg];
      const double t = len > 0.0 ? (s - arc[seg]) / len : 0.0;
      wp.points.push_back(pts[seg] + (pts[seg + 1] - pts[seg]) * t);
    }
  }
  wp.points.push_back(pts.back());
  return wp;
}

void advance_cursor(Waypoints &wp, const Vec2 &robot, double reach_radius) {
  while (wp.cursor + 1 < wp.points.size()) {
    const Vec2 &cur = wp.points[wp.cursor];
    const Vec2 &next = wp.points[wp.cursor + 1];
    const bool reached = distance(robot, cur) < reach_radius;
    const bool passed = dot(robot - cur, next - cur) > 0.0;
    if (!reached && !passed) break;
    ++wp.cursor;
  }
}

bool should_replan(const Waypoints &wp, std::span<const PedestrianEstimate> visible,
                   double trigger_distance) {
  const double limit_sq = trigger_distance * trigger_distance;
  for (const PedestrianEstimate &ped : visible) {
    for (std::size_t i = wp.cursor; i < wp.points.size(); ++i) {
      if (abs_sq(wp.points[i] - ped.world_position) <= limit_sq) return true;
    }
  }
  return false;
}

PlanOutcome replan_or_keep(const Waypoints &old, const Costmap &costmap, const Pose &robot,
                           const Vec2 &goal, int steps_remaining, double dt, double v_max,
                           double spacing) {
  PlanOutcome out;
  const PlanResult plan = plan_astar(costmap, robot.position(), goal);
  if (plan.status != PlanStatus::Ok) {
    out.kind = PlanOutcome::Kind::KeptOldPlan;
    out.reason = KeepReason::Infeasible;
    out.waypoints = old;
    return out;
  }
  out.path_length = path_length(costmap.geometry(), plan.path.cells);
  if (out.path_length / v_max > steps_remaining * dt) {
    out.kind = PlanOutcome::Kind::KeptOldPlan;
    out.reason = KeepReason::TimeBudgetExceeded;
    out.waypoints = old;
    return out;
  }
  out.kind = PlanOutcome::Kind::NewPlan;
  out.waypoints = extract_waypoints(costmap.geometry(), plan.path.cells, spacing);
  return out;
}

// ---------------------------------------------------------------------------
// Costmap dump

std::string dump_costmap(const Costmap &costmap, std::span<const PedestrianEstimate> peds,
                         std::span<const Vec2> path, double weight) {
  const GridGeometry &g = costmap.geometry();
  std::string out;
  char buf[160];
  out += "socnav-costmap 1\n";
  std::snprintf(buf, sizeof buf, "geometry %d %d %.17g %.17g %.17g\n", g.width, g.height,
                g.resolution, g.origin.x, g.origin.y);
  out += buf;
  std::snprintf(buf, sizeof buf, "weight %.17g\n", weight);
  out += buf;
  out += "pedestrians " + std::to_string(peds.size()) + "\n";
  for (const PedestrianEstimate &p : peds) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", p.world_position.x,
                  p.world_position.y, p.world_heading, p.radius);
    out += buf;
  }
  out += "path " + std::to_string(path.size()) + "\n";
  for (const Vec2 &p : path) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    out += buf;
  }
  out += "costs\n";
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      if (x) out += ' ';
      const double c = costmap.at({x, y});
      if (c == Costmap::kLethal) {
        out += 'L';
      } else {
        std::snprintf(buf, sizeof buf, "%.9g", c);
        out += buf;
      }
    }
    out += '\n';
  }
  return out;
}

CostmapDump parse_costmap_dump(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string &what) {
    throw Error(ErrorCode::Parse, "costmap dump line " + std::to_string(line_no) + ": " + what);
  };
  auto next = [&]() -> std::istringstream {
    if (!std::getline(in, line)) {
      ++line_no;
      fail("unexpected end of input");
    }
    ++line_no;
    return std::istringstream(line);
  };
  auto expect = [&](std::istringstream &ls, const std::string &keyword) {
    std::string k;
    if (!(ls >> k) || k != keyword) fail("expected '" + keyword + "'");
  };

  auto header = next();
  std::string magic;
  int version = 0;
  if (!(header >> magic >> version) || magic != "socnav-costmap" || version != 1) {
    fail("not a socnav-costmap v1 dump");
  }
  GridGeometry g;
  auto geo = next();
  expect(geo, "geometry");
  if (!(geo >> g.width >> g.height >> g.resolution >> g.origin.x >> g.origin.y) || g.width <= 0 ||
      g.height <= 0 || !(g.resolution > 0.0)) {
    fail("invalid geometry");
  }
  CostmapDump dump;
  auto w = next();
  expect(w, "weight");
  if (!(w >> dump.weight)) fail("invalid weight");
  auto pl = next();
  expect(pl, "pedestrians");
  std::size_t n = 0;
  if (!(pl >> n)) fail("invalid pedestrian count");
  for (std::size_t i = 0; i < n; ++i) {
    auto ls = next();
    PedestrianEstimate p;
    if (!(ls >> p.world_position.x >> p.world_position.y >> p.world_heading >> p.radius)) {
      fail("invalid pedestrian record");
    }
    p.id = static_cast<int>(i);
    dump.peds.push_back(p);
  }
  auto pa = next();
  expect(pa, "path");
  if (!(pa >> n)) fail("invalid path length");
  for (std::size_t i = 0; i < n; ++i) {
    auto ls = next();
    Vec2 p;
    if (!(ls >> p.x >> p.y)) fail("invalid path point");
    dump.path.push_back(p);
  }
  auto cl = next();
  expect(cl, "costs");
  std::vector<double> cost(g.size());
  for (int y = 0; y < g.height; ++y) {
    auto ls = next();
    for (int x = 0; x < g.width; ++x) {
      std::string tok;
      if (!(ls >> tok)) fail("row too short");
      if (tok == "L") {
        cost[g.index({x, y})] = Costmap::kLethal;
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != tok.size() || !(v >= 0.0)) fail("invalid cost '" + tok + "'");
      cost[g.index({x, y})] = v;
    }
  }
  dump.costmap = Costmap(g, std::move(cost));
  return dump;
}

}  // namespace socnav
