/*
 * crowd.cpp
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

#include "socnav/crowd.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "socnav/error.hpp"
#include "socnav/planner.hpp"

namespace socnav {

const char *crowd_mode_name(CrowdMode mode) {
  return mode == CrowdMode::Cooperative ? "cooperative" : "uncooperative";
}

std::optional<CrowdMode> parse_crowd_mode(const std::string &name) {
  if (name == "cooperative" || name == "coop") return CrowdMode::Cooperative;
  if (name == "uncooperative" || name == "uncoop") return CrowdMode::Uncooperative;
  return std::nullopt;
}

Agent Agent::with_params(int id, Vec2 position, Vec2 goal, const PedestrianParams &p) {
  Agent a;
  a.id = id;
  a.position = position;
  a.goal = goal;
  a.radius = p.radius;
  a.preferred_speed = p.preferred_speed;
  a.max_speed = p.max_speed;
  a.neighbor_distance = p.neighbor_distance;
  a.max_neighbors = p.max_neighbors;
  a.time_horizon_agents = p.time_horizon_agents;
  a.time_horizon_obstacles = p.time_horizon_obstacles;
  a.goal_tolerance = p.goal_tolerance;
  const Vec2 d = goal - position;
  a.heading = abs_sq(d) > 0.0 ? std::atan2(d.y, d.x) : 0.0;
  return a;
}

// ---------------------------------------------------------------------------
// Wall extraction

WallIndex::WallIndex(const OccupancyGrid &grid, double bucket_size)
    : origin_(grid.origin()), bucket_size_(bucket_size) {
  const double res = grid.resolution();
  const Vec2 o = grid.origin();
  const int w = grid.width();
  const int h = grid.height();

  // Horizontal edges: boundary between rows y-1 and y.
  for (int y = 0; y <= h; ++y) {
    int run_start = -1;
    int run_kind = 0;
    for (int x = 0; x <= w; ++x) {
      int kind = 0;
      if (x < w) {
        const bool below = grid.occupied({x, y - 1});
        const bool above = grid.occupied({x, y});
        kind = below == above ? 0 : (below ? 1 : 2);
      }
      if (kind != run_kind) {
        if (run_kind != 0) {
          segments_.push_back({{o.x + run_start * res, o.y + y * res}, {o.x + x * res, o.y + y * res}});
        }
        run_start = x;
        run_kind = kind;
      }
    }
  }
  // Vertical edges: boundary between columns x-1 and x.
  for (int x = 0; x <= w; ++x) {
    int run_start = -1;
    int run_kind = 0;
    for (int y = 0; y <= h; ++y) {
      int kind = 0;
      if (y < h) {
        const bool left = grid.occupied({x - 1, y});
        const bool right = grid.occupied({x, y});
        kind = left == right ? 0 : (left ? 1 : 2);
      }
      if (kind != run_kind) {
        if (run_kind != 0) {
          segments_.push_back({{o.x + x * res, o.y + run_start * res}, {o.x + x * res, o.y + y * res}});
        }
        run_start = y;
        run_kind = kind;
      }
    }
  }

  bx_ = std::max(1, static_cast<int>(std::ceil(w * res / bucket_size_)) + 1);
  by_ = std::max(1, static_cast<int>(std::ceil(h * res / bucket_size_)) + 1);
  buckets_.assign(static_cast<std::size_t>(bx_ * by_), {});
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const WallSegment &s = segments_[i];
    const int x0 = std::clamp(static_cast<int>(std::floor((std::min(s.a.x, s.b.x) - origin_.x) / bucket_size_)), 0, bx_ - 1);
    const int x1 = std::clamp(static_cast<int>(std::floor((std::max(s.a.x, s.b.x) - origin_.x) / bucket_size_)), 0, bx_ - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor((std::min(s.a.y, s.b.y) - origin_.y) / bucket_size_)), 0, by_ - 1);
    const int y1 = std::clamp(static_cast<int>(std::floor((std::max(s.a.y, s.b.y) - origin_.y) / bucket_size_)), 0, by_ - 1);
    for (int by = y0; by <= y1; ++by) {
      for (int bx = x0; bx <= x1; ++bx) buckets_[static_cast<std::size_t>(by * bx_ + bx)].push_back(i);
    }
  }
}

namespace {

double dist_sq_to_segment(const Vec2 &p, const Vec2 &a, const Vec2 &b) {
  const Vec2 ab = b - a;
  const double len_sq = abs_sq(ab);
  const double t = len_sq > 0.0 ? std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0) : 0.0;
  return abs_sq(p - (a + ab * t));
}

}  // namespace

std::vector<WallSegment> WallIndex::near(const Vec2 &p, double range) const {
  std::vector<std::size_t> ids;
  if (!buckets_.empty()) {
    const int x0 = std::clamp(static_cast<int>(std::floor((p.x - range - origin_.x) / bucket_size_)), 0, bx_ - 1);
    const int x1 = std::clamp(static_cast<int>(std::floor((p.x + range - origin_.x) / bucket_size_)), 0, bx_ - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor((p.y - range - origin_.y) / bucket_size_)), 0, by_ - 1);
    const int y1 = std::clamp(static_cast<int>(std::floor((p.y + range - origin_.y) / bucket_size_)), 0, by_ - 1);
    for (int by = y0; by <= y1; ++by) {
      for (int bx = x0; bx <= x1; ++bx) {
        const auto &b = buckets_[static_cast<std::size_t>(by * bx_ + bx)];
        ids.insert(ids.end(), b.begin(), b.end());
      }
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<WallSegment> out;
  const double range_sq = range * range;
  for (std::size_t i : ids) {
    if (dist_sq_to_segment(p, segments_[i].a, segments_[i].b) < range_sq) out.push_back(segments_[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ORCA constraints

namespace {

constexpr double kEpsilon = 1e-9;

struct ObstacleVertex {
  Vec2 point;
  Vec2 direction;
  const ObstacleVertex *next = nullptr;
  const ObstacleVertex *previous = nullptr;
};

// One wall segment seen from the agent: a two-vertex convex obstacle oriented
// so the agent lies on its right.
void add_wall_line(const Agent &agent, const WallSegment &wall, double inv_horizon,
                   std::vector<HalfPlane> &lines) {
  Vec2 p1 = wall.a;
  Vec2 p2 = wall.b;
  const double side = det(p2 - p1, agent.position - p1);
  if (side == 0.0) return;
  if (side > 0.0) std::swap(p1, p2);

  ObstacleVertex v1{p1, normalized(p2 - p1)};
  ObstacleVertex v2{p2, normalized(p1 - p2)};
  v1.next = v1.previous = &v2;
  v2.next = v2.previous = &v1;

  const ObstacleVertex *obstacle1 = &v1;
  const ObstacleVertex *obstacle2 = &v2;
  const Vec2 position = agent.position;
  const double radius = agent.radius;

  const Vec2 rel1 = obstacle1->point - position;
  const Vec2 rel2 = obstacle2->point - position;

  for (const HalfPlane &line : lines) {
    if (det(inv_horizon * rel1 - line.point, line.direction) - inv_horizon * radius >= -kEpsilon &&
        det(inv_horizon * rel2 - line.point, line.direction) - inv_horizon * radius >= -kEpsilon) {
      return;  // already covered by an earlier wall line
    }
  }

  const double dist_sq1 = abs_sq(rel1);
  const double dist_sq2 = abs_sq(rel2);
  const double radius_sq = radius * radius;
  const Vec2 obstacle_vector = obstacle2->point - obstacle1->point;
  const double s = dot(-rel1, obstacle_vector) / abs_sq(obstacle_vector);
  const double dist_sq_line = abs_sq(-rel1 - s * obstacle_vector);

  HalfPlane line;
  if (s < 0.0 && dist_sq1 <= radius_sq) {
    // Colliding with the left vertex.
    line.point = {};
    line.direction = normalized(Vec2{-rel1.y, rel1.x});
    lines.push_back(line);
    return;
  }
  if (s > 1.0 && dist_sq2 <= radius_sq) {
    // Colliding with the right vertex, unless the neighboring edge handles it.
    if (det(rel2, obstacle2->direction) >= 0.0) {
      line.point = {};
      line.direction = normalized(Vec2{-rel2.y, rel2.x});
      lines.push_back(line);
    }
    return;
  }
  if (s >= 0.0 && s <= 1.0 && dist_sq_line <= radius_sq) {
    // Colliding with the segment itself.
    line.point = {};
    line.direction = -obstacle1->direction;
    lines.push_back(line);
    return;
  }

  Vec2 left_leg;
  Vec2 right_leg;
  if (s < 0.0 && dist_sq_line <= radius_sq) {
    // Seen obliquely: the left vertex defines the velocity obstacle.
    obstacle2 = obstacle1;
    const double leg1 = std::sqrt(dist_sq1 - radius_sq);
    left_leg = Vec2{rel1.x * leg1 - rel1.y * radius, rel1.x * radius + rel1.y * leg1} / dist_sq1;
    right_leg = Vec2{rel1.x * leg1 + rel1.y * radius, -rel1.x * radius + rel1.y * leg1} / dist_sq1;
  } else if (s > 1.0 && dist_sq_line <= radius_sq) {
    // Seen obliquely: the right vertex defines the velocity obstacle.
    obstacle1 = obstacle2;
    const double leg2 = std::sqrt(dist_sq2 - radius_sq);
    left_leg = Vec2{rel2.x * leg2 - rel2.y * radius, rel2.x * radius + rel2.y * leg2} / dist_sq2;
    right_leg = Vec2{rel2.x * leg2 + rel2.y * radius, -rel2.x * radius + rel2.y * leg2} / dist_sq2;
  } else {
    const double leg1 = std::sqrt(dist_sq1 - radius_sq);
    left_leg = Vec2{rel1.x * leg1 - rel1.y * radius, rel1.x * radius + rel1.y * leg1} / dist_sq1;
    const double leg2 = std::sqrt(dist_sq2 - radius_sq);
    right_leg = Vec2{rel2.x * leg2 + rel2.y * radius, -rel2.x * radius + rel2.y * leg2} / dist_sq2;
  }

  // A leg pointing into the neighboring edge is replaced by that edge; a
  // velocity projected onto such a foreign leg adds no constraint.
  const ObstacleVertex *left_neighbor = obstacle1->previous;
  bool left_foreign = false;
  bool right_foreign = false;
  if (det(left_leg, -left_neighbor->direction) >= 0.0) {
    left_leg = -left_neighbor->direction;
    left_foreign = true;
  }
  if (det(right_leg, obstacle2->direction) <= 0.0) {
    right_leg = obstacle2->direction;
    right_foreign = true;
  }

  const Vec2 left_cutoff = inv_horizon * (obstacle1->point - position);
  const Vec2 right_cutoff = inv_horizon * (obstacle2->point - position);
  const Vec2 cutoff_vector = right_cutoff - left_cutoff;
  const Vec2 velocity = agent.velocity;
  const bool same_vertex = obstacle1 == obstacle2;

  const double t = same_vertex ? 0.5 : dot(velocity - left_cutoff, cutoff_vector) / abs_sq(cutoff_vector);
  const double t_left = dot(velocity - left_cutoff, left_leg);
  const double t_right = dot(velocity - right_cutoff, right_leg);

  if ((t < 0.0 && t_left < 0.0) || (same_vertex && t_left < 0.0 && t_right < 0.0)) {
    const Vec2 unit_w = normalized(velocity - left_cutoff);
    line.direction = {unit_w.y, -unit_w.x};
    line.point = left_cutoff + radius * inv_horizon * unit_w;
    lines.push_back(line);
    return;
  }
  if (t > 1.0 && t_right < 0.0) {
    const Vec2 unit_w = normalized(velocity - right_cutoff);
    line.direction = {unit_w.y, -unit_w.x};
    line.point = right_cutoff + radius * inv_horizon * unit_w;
    lines.push_back(line);
    return;
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  const double dist_sq_cutoff = (t < 0.0 || t > 1.0 || same_vertex)
                                    ? inf
                                    : abs_sq(velocity - (left_cutoff + t * cutoff_vector));
  const double dist_sq_left = t_left < 0.0 ? inf : abs_sq(velocity - (left_cutoff + t_left * left_leg));
  const double dist_sq_right =
      t_right < 0.0 ? inf : abs_sq(velocity - (right_cutoff + t_right * right_leg));

  if (dist_sq_cutoff <= dist_sq_left && dist_sq_cutoff <= dist_sq_right) {
    line.direction = -obstacle1->direction;
    line.point = left_cutoff + radius * inv_horizon * Vec2{-line.direction.y, line.direction.x};
    lines.push_back(line);
    return;
  }
  if (dist_sq_left <= dist_sq_right) {
    if (left_foreign) return;
    line.direction = left_leg;
    line.point = left_cutoff + radius * inv_horizon * Vec2{-line.direction.y, line.direction.x};
    lines.push_back(line);
    return;
  }
  if (right_foreign) return;
  line.direction = -right_leg;
  line.point = right_cutoff + radius * inv_horizon * Vec2{-line.direction.y, line.direction.x};
  lines.push_back(line);
}

HalfPlane agent_line(const Agent &agent, const Agent &other, double dt) {
  const double inv_horizon = 1.0 / agent.time_horizon_agents;
  const Vec2 rel_pos = other.position - agent.position;
  const Vec2 rel_vel = agent.velocity - other.velocity;
  const double dist_sq = abs_sq(rel_pos);
  const double combined = agent.radius + other.radius;
  const double combined_sq = combined * combined;

  HalfPlane line;
  Vec2 u;
  if (dist_sq > combined_sq) {
    const Vec2 w = rel_vel - inv_horizon * rel_pos;
    const double w_len_sq = abs_sq(w);
    const double dp = dot(w, rel_pos);
    if (dp < 0.0 && dp * dp > combined_sq * w_len_sq) {
      // Project on the cut-off circle.
      const double w_len = std::sqrt(w_len_sq);
      const Vec2 unit_w = w / w_len;
      line.direction = {unit_w.y, -unit_w.x};
      u = (combined * inv_horizon - w_len) * unit_w;
    } else {
      // Project on the nearer leg.
      const double leg = std::sqrt(dist_sq - combined_sq);
      if (det(rel_pos, w) > 0.0) {
        line.direction = Vec2{rel_pos.x * leg - rel_pos.y * combined, rel_pos.x * combined + rel_pos.y * leg} / dist_sq;
      } else {
        line.direction = -Vec2{rel_pos.x * leg + rel_pos.y * combined, -rel_pos.x * combined + rel_pos.y * leg} / dist_sq;
      }
      u = dot(rel_vel, line.direction) * line.direction - rel_vel;
    }
  } else {
    // Already overlapping: resolve within one time step.
    const double inv_dt = 1.0 / dt;
    const Vec2 w = rel_vel - inv_dt * rel_pos;
    const double w_len = norm(w);
    const Vec2 unit_w = w_len > 0.0 ? w / w_len : Vec2{1.0, 0.0};
    line.direction = {unit_w.y, -unit_w.x};
    u = (combined * inv_dt - w_len) * unit_w;
  }
  line.point = agent.velocity + 0.5 * u;
  return line;
}

}  // namespace

OrcaConstraints orca_halfplanes(const Agent &agent, std::span<const Agent> neighbors,
                                std::span<const WallSegment> walls, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  OrcaConstraints out;

  const double wall_range = agent.time_horizon_obstacles * agent.max_speed + agent.radius;
  std::vector<std::pair<double, std::size_t>> wall_order;
  for (std::size_t i = 0; i < walls.size(); ++i) {
    const double d = dist_sq_to_segment(agent.position, walls[i].a, walls[i].b);
    if (d < wall_range * wall_range) wall_order.emplace_back(d, i);
  }
  std::stable_sort(wall_order.begin(), wall_order.end(),
                   [](const auto &a, const auto &b) { return a.first < b.first; });
  const double inv_horizon_obst = 1.0 / agent.time_horizon_obstacles;
  for (const auto &entry : wall_order) add_wall_line(agent, walls[entry.second], inv_horizon_obst, out.lines);
  out.wall_lines = out.lines.size();

  std::vector<std::pair<double, std::size_t>> near;
  const double range_sq = agent.neighbor_distance * agent.neighbor_distance;
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    const double d = abs_sq(neighbors[i].position - agent.position);
    if (d < range_sq) near.emplace_back(d, i);
  }
  std::stable_sort(near.begin(), near.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
  if (near.size() > agent.max_neighbors) near.resize(agent.max_neighbors);
  for (const auto &entry : near) out.lines.push_back(agent_line(agent, neighbors[entry.second], dt));
  return out;
}

// ---------------------------------------------------------------------------
// Velocity linear program

namespace {

bool lp1(std::span<const HalfPlane> lines, std::size_t line_no, double radius, const Vec2 &opt,
         bool direction_opt, Vec2 &result) {
  const HalfPlane &line = lines[line_no];
  const double dp = dot(line.point, line.direction);
  const double discriminant = dp * dp + radius * radius - abs_sq(line.point);
  if (discriminant < 0.0) return false;  // speed disc misses the line entirely

  const double sqrt_disc = std::sqrt(discriminant);
  double t_left = -dp - sqrt_disc;
  double t_right = -dp + sqrt_disc;

  for (std::size_t i = 0; i < line_no; ++i) {
    const double denominator = det(line.direction, lines[i].direction);
    const double numerator = det(lines[i].direction, line.point - lines[i].point);
    if (std::fabs(denominator) <= kEpsilon) {
      if (numerator < 0.0) return false;  // parallel and infeasible
      continue;
    }
    const double t = numerator / denominator;
    if (denominator >= 0.0) {
      t_right = std::min(t_right, t);
    } else {
      t_left = std::max(t_left, t);
    }
    if (t_left > t_right) return false;
  }

  if (direction_opt) {
    result = dot(opt, line.direction) > 0.0 ? line.point + t_right * line.direction
                                             : line.point + t_left * line.direction;
  } else {
    const double t = dot(line.direction, opt - line.point);
    result = line.point + std::clamp(t, t_left, t_right) * line.direction;
  }
  return true;
}

std::size_t lp2(std::span<const HalfPlane> lines, double radius, const Vec2 &opt, bool direction_opt,
                Vec2 &result) {
  if (direction_opt) {
    result = opt * radius;
  } else if (abs_sq(opt) > radius * radius) {
    result = normalized(opt) * radius;
  } else {
    result = opt;
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (det(lines[i].direction, lines[i].point - result) > 0.0) {
      const Vec2 previous = result;
      if (!lp1(lines, i, radius, opt, direction_opt, result)) {
        result = previous;
        return i;
      }
    }
  }
  return lines.size();
}

void lp3(std::span<const HalfPlane> lines, std::size_t hard_lines, std::size_t begin_line, double radius,
         Vec2 &result) {
  double dist = 0.0;
  for (std::size_t i = begin_line; i < lines.size(); ++i) {
    if (det(lines[i].direction, lines[i].point - result) <= dist) continue;
    std::vector<HalfPlane> proj(lines.begin(), lines.begin() + static_cast<std::ptrdiff_t>(hard_lines));
    for (std::size_t j = hard_lines; j < i; ++j) {
      HalfPlane line;
      const double determinant = det(lines[i].direction, lines[j].direction);
      if (std::fabs(determinant) <= kEpsilon) {
        if (dot(lines[i].direction, lines[j].direction) > 0.0) continue;  // same direction
        line.point = 0.5 * (lines[i].point + lines[j].point);
      } else {
        line.point = lines[i].point +
                     (det(lines[j].direction, lines[i].point - lines[j].point) / determinant) * lines[i].direction;
      }
      line.direction = normalized(lines[j].direction - lines[i].direction);
      proj.push_back(line);
    }
    const Vec2 previous = result;
    if (lp2(proj, radius, Vec2{-lines[i].direction.y, lines[i].direction.x}, true, result) < proj.size()) {
      // Only reachable through round-off; the previous result is already feasible.
      result = previous;
    }
    dist = det(lines[i].direction, lines[i].point - result);
  }
}

}  // namespace

Vec2 solve_velocity_lp(std::span<const HalfPlane> lines, const Vec2 &preferred, double max_speed,
                       std::size_t hard_lines) {
  if (!(max_speed > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_speed must be > 0");
  hard_lines = std::min(hard_lines, lines.size());
  Vec2 result;
  const std::size_t fail = lp2(lines, max_speed, preferred, false, result);
  if (fail < lines.size()) lp3(lines, hard_lines, fail, max_speed, result);
  const double speed = norm(result);
  if (speed > max_speed) result = result * (max_speed / speed);
  return result;
}

// ---------------------------------------------------------------------------
// Crowd stepping

Vec2 preferred_velocity(const Agent &agent, double dt) {
  if (agent.goal_reached) return {};
  const bool on_route = !agent.route.empty() && agent.route_cursor + 1 < agent.route.size();
  if (on_route) {
    const Vec2 to = agent.route[agent.route_cursor] - agent.position;
    const double d = norm(to);
    if (d > 1e-9) return to * (agent.preferred_speed / d);
  }
  const Vec2 to_goal = agent.goal - agent.position;
  const double d = norm(to_goal);
  if (d <= 0.0) return {};
  if (d < agent.preferred_speed * dt) return to_goal / dt;
  return to_goal * (agent.preferred_speed / d);
}

namespace {

Agent robot_as_agent(const RobotBody &robot) {
  Agent a;
  a.id = -1;
  a.position = robot.position;
  a.velocity = robot.velocity;
  a.radius = robot.radius;
  return a;
}

void advance_route(Agent &a) {
  while (a.route_cursor + 1 < a.route.size()) {
    const Vec2 &cur = a.route[a.route_cursor];
    const Vec2 &next = a.route[a.route_cursor + 1];
    if (distance(a.position, cur) >= a.goal_tolerance && dot(a.position - cur, next - cur) <= 0.0) break;
    ++a.route_cursor;
  }
}

}  // namespace

std::vector<OrcaConstraints> crowd_constraints(std::span<const Agent> agents, const RobotBody &robot,
                                               const WallIndex &walls, CrowdMode mode, double dt) {
  std::vector<OrcaConstraints> out;
  out.reserve(agents.size());
  std::vector<Agent> neighbors;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    neighbors.clear();
    for (std::size_t j = 0; j < agents.size(); ++j) {
      if (j != i) neighbors.push_back(agents[j]);
    }
    if (mode == CrowdMode::Cooperative) neighbors.push_back(robot_as_agent(robot));
    const Agent &a = agents[i];
    const double wall_range = a.time_horizon_obstacles * a.max_speed + a.radius;
    const auto near_walls = walls.near(a.position, wall_range);
    out.push_back(orca_halfplanes(a, neighbors, near_walls, dt));
  }
  return out;
}

std::vector<Agent> step_crowd(std::span<const Agent> agents, const RobotBody &robot,
                              const WallIndex &walls, CrowdMode mode, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be > 0");
  const auto constraints = crowd_constraints(agents, robot, walls, mode, dt);
  std::vector<Agent> next(agents.begin(), agents.end());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const Vec2 pref = preferred_velocity(agents[i], dt);
    next[i].velocity = solve_velocity_lp(constraints[i].lines, pref, agents[i].max_speed,
                                         constraints[i].wall_lines);
  }
  for (Agent &a : next) {
    a.position += a.velocity * dt;
    if (norm(a.velocity) >= 1e-3) a.heading = std::atan2(a.velocity.y, a.velocity.x);
    advance_route(a);
    if (distance(a.position, a.goal) <= a.goal_tolerance) a.goal_reached = true;
  }
  return next;
}

// ---------------------------------------------------------------------------
// Goal reassignment

namespace {

constexpr int kNx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kNy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

std::optional<Cell> nearest_traversable(const Costmap &map, const Cell &from) {
  const GridGeometry &g = map.geometry();
  if (!g.in_bounds(from)) return std::nullopt;
  if (!map.lethal(from)) return from;
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::deque<Cell> queue{from};
  seen[g.index(from)] = 1;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (int k = 0; k < 4; ++k) {
      const Cell n{c.x + kNx[k], c.y + kNy[k]};
      if (!g.in_bounds(n) || seen[g.index(n)]) continue;
      if (!map.lethal(n)) return n;
      seen[g.index(n)] = 1;
      queue.push_back(n);
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<Vec2> plan_route(const Costmap &traversable, const Vec2 &from, const Vec2 &goal,
                             double spacing) {
  const GridGeometry &g = traversable.geometry();
  const auto start = g.world_to_cell(from);
  const auto end = g.world_to_cell(goal);
  if (start && end) {
    const auto s = nearest_traversable(traversable, *start);
    if (s && !traversable.lethal(*end)) {
      const PlanResult plan = plan_astar(traversable, *s, *end);
      if (plan.status == PlanStatus::Ok) {
        std::vector<Vec2> route = extract_waypoints(g, plan.path.cells, spacing).points;
        route.back() = goal;
        return route;
      }
    }
  }
  return {goal};
}

Agent reassign_goal(const Agent &agent, const Costmap &traversable, Rng &rng, double route_spacing) {
  const GridGeometry &g = traversable.geometry();
  const auto here = g.world_to_cell(agent.position);
  const auto seed = here ? nearest_traversable(traversable, *here) : std::nullopt;
  if (!seed) throw Error(ErrorCode::InvalidScenario, "agent has no traversable cell nearby");

  std::vector<std::uint8_t> seen(g.size(), 0);
  std::vector<Cell> reachable;
  std::deque<Cell> queue{*seed};
  seen[g.index(*seed)] = 1;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    reachable.push_back(c);
    for (int k = 0; k < 8; ++k) {
      const Cell n{c.x + kNx[k], c.y + kNy[k]};
      if (traversable.lethal(n) || seen[g.index(n)]) continue;
      if (k >= 4 && (traversable.lethal({c.x + kNx[k], c.y}) || traversable.lethal({c.x, c.y + kNy[k]}))) continue;
      seen[g.index(n)] = 1;
      queue.push_back(n);
    }
  }
  std::sort(reachable.begin(), reachable.end(),
            [&](const Cell &a, const Cell &b) { return g.index(a) < g.index(b); });
  std::erase_if(reachable, [&](const Cell &c) {
    return distance(g.cell_to_world(c), agent.position) <= agent.goal_tolerance;
  });
  if (reachable.empty()) throw Error(ErrorCode::InvalidScenario, "no reachable free cell for a new goal");

  Agent out = agent;
  out.goal = g.cell_to_world(reachable[rng.below(reachable.size())]);
  out.goal_reached = false;
  out.route = plan_route(traversable, agent.position, out.goal, route_spacing);
  out.route_cursor = 0;
  advance_route(out);
  return out;
}

}  // namespace socnav
