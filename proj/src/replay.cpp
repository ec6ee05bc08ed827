/*
 * replay.cpp
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

#include "socnav/replay.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "socnav/error.hpp"

namespace socnav {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv_update(std::uint64_t h, const std::string &s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
  return buf;
}

class Writer {
 public:
  void line(const std::string &s) {
    out_ += s;
    out_ += '\n';
    hash_ = fnv_update(hash_, s + "\n");
  }

  /// Appends " h <hash of everything before, plus this line's content>".
  void hashed_line(const std::string &s) {
    const std::uint64_t h = fnv_update(hash_, s);
    line(s + " h " + hex64(h));
  }

  std::string take() { return std::move(out_); }

 private:
  std::string out_;
  std::uint64_t hash_ = kFnvOffset;
};

std::string d(double v) { return format_double(v); }

void append_points(std::string &s, const std::vector<Vec2> &pts) {
  s += ' ' + std::to_string(pts.size());
  for (const Vec2 &p : pts) s += ' ' + d(p.x) + ' ' + d(p.y);
}

KeyValues recorded_config(const EpisodeConfig &cfg, const MapGenParams &mapgen) {
  KeyValues items;
  for (auto &kv : episode_registry().items(cfg)) {
    if (kv.first != "observations") items.push_back(std::move(kv));
  }
  for (auto &[k, v] : mapgen_registry().items(mapgen)) items.emplace_back("mapgen." + k, v);
  return items;
}

}  // namespace

std::string write_replay(const Episode &ep, const MapGenParams &mapgen) {
  if (!ep.started()) throw Error(ErrorCode::ContractViolation, "replay of an episode that was never reset");
  Writer w;
  const World &world = ep.world();
  const GridGeometry &g = world.grid.geometry();
  w.line("socnav-replay " + std::to_string(kReplayVersion));
  w.line("map " + world.map_ref);
  w.line("grid " + std::to_string(g.width) + ' ' + std::to_string(g.height) + ' ' + d(g.resolution) + ' ' +
         d(g.origin.x) + ' ' + d(g.origin.y) + ' ' + hex64(world.grid.fingerprint()));
  const KeyValues cfg = recorded_config(ep.config(), mapgen);
  w.line("config " + std::to_string(cfg.size()));
  for (const auto &[k, v] : cfg) w.line(k + " = " + v);

  const Scenario &s = ep.scenario();
  std::string sc = "scenario seed " + std::to_string(s.seed) + " mode " + crowd_mode_name(s.mode) + " start " +
                   d(s.robot_start.x) + ' ' + d(s.robot_start.y) + ' ' + d(s.robot_start.theta) + " goal " +
                   d(s.robot_goal.x) + ' ' + d(s.robot_goal.y) + " peds " + std::to_string(s.ped_starts.size());
  for (std::size_t i = 0; i < s.ped_starts.size(); ++i) {
    sc += ' ' + d(s.ped_starts[i].x) + ' ' + d(s.ped_starts[i].y) + ' ' + d(s.ped_goals[i].x) + ' ' +
          d(s.ped_goals[i].y);
  }
  w.line(sc);
  const Pose &p0 = s.robot_start;
  std::string init = "init pose " + d(p0.x) + ' ' + d(p0.y) + ' ' + d(wrap_angle(p0.theta)) + " peds";
  append_points(init, ep.initial_ped_positions());
  w.line(init);
  std::string wp0 = "waypoints 0";
  append_points(wp0, ep.initial_waypoints());
  w.line(wp0);

  double ret = 0.0;
  for (const StepRecord &rec : ep.records()) {
    const StepResult &r = rec.result;
    const StepInfo &info = r.info;
    const RewardBreakdown &rw = r.reward;
    std::string line = "step " + std::to_string(r.step_index) + " cmd " + d(info.commanded.v) + ' ' +
                       d(info.commanded.omega) + " act " + d(info.applied.v) + ' ' + d(info.applied.omega) +
                       " pose " + d(rec.pose.x) + ' ' + d(rec.pose.y) + ' ' + d(rec.pose.theta) + " wall " +
                       (info.wall_hit ? '1' : '0') + " rand " + (info.random_action ? '1' : '0') + " replan " +
                       replan_event_name(info.replan) + " reward " + d(rw.goal) + ' ' + d(rw.ped_collision) + ' ' +
                       d(rw.wall_collision) + ' ' + d(rw.waypoint) + ' ' + d(rw.timestep) + ' ' +
                       d(rw.wp_distance) + ' ' + d(rw.ped_avoid) + ' ' + d(rw.wp_orient) + ' ' + d(rw.total) +
                       " outcome " + outcome_name(r.outcome) + " near " + d(info.nearest_ped_distance) + " peds";
    append_points(line, rec.ped_positions);
    w.hashed_line(line);
    if (rec.new_waypoints) {
      std::string wl = "waypoints " + std::to_string(r.step_index);
      append_points(wl, *rec.new_waypoints);
      w.line(wl);
    }
    ret += rw.total;
  }
  w.hashed_line("end steps " + std::to_string(ep.records().size()) + " outcome " + outcome_name(ep.outcome()) +
                " return " + d(ret));
  return w.take();
}

namespace {

class Tokens {
 public:
  Tokens(const std::string &line, int line_no) : line_no_(line_no) {
    std::istringstream in(line);
    std::string t;
    while (in >> t) tokens_.push_back(t);
  }

  [[noreturn]] void fail(const std::string &what) const {
    throw Error(ErrorCode::Parse, "replay line " + std::to_string(line_no_) + ": " + what);
  }

  bool done() const { return pos_ >= tokens_.size(); }

  const std::string &word() {
    if (done()) fail("unexpected end of line");
    return tokens_[pos_++];
  }

  void expect(const std::string &w) {
    if (done() || tokens_[pos_] != w) fail("expected '" + w + "'");
    ++pos_;
  }

  double number() {
    const std::string &t = word();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail("bad number '" + t + "'");
    return v;
  }

  std::uint64_t integer(int base = 10) {
    const std::string &t = word();
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v, base);
    if (ec != std::errc() || ptr != t.data() + t.size()) fail("bad integer '" + t + "'");
    return v;
  }

  bool flag() {
    const std::uint64_t v = integer();
    if (v > 1) fail("flag must be 0 or 1");
    return v == 1;
  }

  std::vector<Vec2> points() {
    const std::uint64_t n = integer();
    if (n > 1000000) fail("point count too large");
    std::vector<Vec2> out;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x = number();
      out.push_back({x, number()});
    }
    return out;
  }

  void finish() {
    if (!done()) fail("trailing tokens");
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  int line_no_;
};

}  // namespace

ReplayLog parse_replay(const std::string &text) {
  std::vector<std::string> lines;
  {
    std::size_t pos = 0;
    while (pos < text.size()) {
      const std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) {
        throw Error(ErrorCode::Parse, "replay line " + std::to_string(lines.size() + 1) + ": truncated (no newline)");
      }
      lines.push_back(text.substr(pos, end - pos));
      pos = end + 1;
    }
  }
  std::size_t i = 0;
  auto next = [&](const char *what) {
    if (i >= lines.size()) {
      throw Error(ErrorCode::Parse,
                  "replay line " + std::to_string(lines.size() + 1) + ": truncated, expected " + what);
    }
    const int no = static_cast<int>(i + 1);
    return Tokens(lines[i++], no);
  };

  ReplayLog log;
  {
    Tokens t = next("header");
    t.expect("socnav-replay");
    if (t.integer() != static_cast<std::uint64_t>(kReplayVersion)) t.fail("unsupported replay version");
    t.finish();
  }
  {
    Tokens t = next("map");
    t.expect("map");
    log.map_ref = t.word();
    t.finish();
  }
  {
    Tokens t = next("grid");
    t.expect("grid");
    log.geometry.width = static_cast<int>(t.integer());
    log.geometry.height = static_cast<int>(t.integer());
    log.geometry.resolution = t.number();
    log.geometry.origin.x = t.number();
    log.geometry.origin.y = t.number();
    log.fingerprint = t.integer(16);
    t.finish();
  }
  {
    Tokens t = next("config");
    t.expect("config");
    const std::uint64_t n = t.integer();
    t.finish();
    for (std::uint64_t k = 0; k < n; ++k) {
      const int no = static_cast<int>(i + 1);
      if (i >= lines.size()) next("config entry");
      const std::string &line = lines[i++];
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) Tokens("", no).fail("expected key = value");
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 3);
      try {
        if (key.rfind("mapgen.", 0) == 0) {
          mapgen_registry().set(log.mapgen, key.substr(7), value);
        } else {
          episode_registry().set(log.config, key, value);
        }
      } catch (const Error &e) {
        Tokens("", no).fail(e.what());
      }
    }
  }
  {
    Tokens t = next("scenario");
    t.expect("scenario");
    t.expect("seed");
    log.scenario.seed = t.integer();
    t.expect("mode");
    const auto mode = parse_crowd_mode(t.word());
    if (!mode) t.fail("bad crowd mode");
    log.scenario.mode = *mode;
    t.expect("start");
    log.scenario.robot_start.x = t.number();
    log.scenario.robot_start.y = t.number();
    log.scenario.robot_start.theta = t.number();
    t.expect("goal");
    log.scenario.robot_goal.x = t.number();
    log.scenario.robot_goal.y = t.number();
    t.expect("peds");
    const std::uint64_t n = t.integer();
    for (std::uint64_t k = 0; k < n; ++k) {
      const double sx = t.number(), sy = t.number(), gx = t.number(), gy = t.number();
      log.scenario.ped_starts.push_back({sx, sy});
      log.scenario.ped_goals.push_back({gx, gy});
    }
    t.finish();
  }
  {
    Tokens t = next("init");
    t.expect("init");
    t.expect("pose");
    log.initial_pose.x = t.number();
    log.initial_pose.y = t.number();
    log.initial_pose.theta = t.number();
    t.expect("peds");
    log.initial_peds = t.points();
    t.finish();
  }
  {
    Tokens t = next("waypoints");
    t.expect("waypoints");
    if (t.integer() != 0) t.fail("initial waypoints must be numbered 0");
    log.initial_waypoints = t.points();
    t.finish();
  }
  while (true) {
    Tokens t = next("step or end");
    const std::string kind = t.word();
    if (kind == "end") {
      t.expect("steps");
      if (t.integer() != log.steps.size()) t.fail("step count does not match the records");
      t.expect("outcome");
      const auto o = parse_outcome(t.word());
      if (!o) t.fail("bad outcome");
      log.outcome = *o;
      t.expect("return");
      log.total_return = t.number();
      t.expect("h");
      t.word();
      t.finish();
      break;
    }
    if (kind == "waypoints") {
      if (log.steps.empty()) t.fail("waypoints update before any step");
      if (t.integer() != static_cast<std::uint64_t>(log.steps.back().index)) t.fail("waypoints index mismatch");
      log.steps.back().new_waypoints = t.points();
      t.finish();
      continue;
    }
    if (kind != "step") t.fail("expected 'step', 'waypoints' or 'end'");
    ReplayStep s;
    s.index = static_cast<int>(t.integer());
    if (s.index != static_cast<int>(log.steps.size()) + 1) t.fail("step index out of sequence");
    t.expect("cmd");
    s.commanded.v = t.number();
    s.commanded.omega = t.number();
    t.expect("act");
    s.applied.v = t.number();
    s.applied.omega = t.number();
    t.expect("pose");
    s.pose.x = t.number();
    s.pose.y = t.number();
    s.pose.theta = t.number();
    t.expect("wall");
    s.wall_hit = t.flag();
    t.expect("rand");
    s.random_action = t.flag();
    t.expect("replan");
    const auto ev = parse_replan_event(t.word());
    if (!ev) t.fail("bad replan event");
    s.replan = *ev;
    t.expect("reward");
    for (double *f : {&s.reward.goal, &s.reward.ped_collision, &s.reward.wall_collision, &s.reward.waypoint,
                      &s.reward.timestep, &s.reward.wp_distance, &s.reward.ped_avoid, &s.reward.wp_orient,
                      &s.reward.total}) {
      *f = t.number();
    }
    t.expect("outcome");
    const auto o = parse_outcome(t.word());
    if (!o) t.fail("bad outcome");
    s.outcome = *o;
    t.expect("near");
    s.nearest_ped_distance = t.number();
    t.expect("peds");
    s.peds = t.points();
    t.expect("h");
    t.word();
    t.finish();
    log.steps.push_back(std::move(s));
  }
  if (i != lines.size()) Tokens("", static_cast<int>(i + 1)).fail("content after end record");
  return log;
}

ReplayVerdict verify_replay(const std::string &text, const std::optional<OccupancyGrid> &map_override) {
  const ReplayLog log = parse_replay(text);
  ReplayVerdict v;
  OccupancyGrid grid = map_override ? *map_override : replay_map(log);
  if (!(grid.geometry() == log.geometry) || grid.fingerprint() != log.fingerprint) {
    v.divergent_step = 0;
    v.message = "map does not match the recorded grid fingerprint";
    return v;
  }
  EpisodeConfig cfg = log.config;
  cfg.build_observations = false;
  Episode ep(World::build(std::move(grid), log.map_ref, cfg), cfg);
  ep.reset(log.scenario);
  for (const ReplayStep &s : log.steps) {
    if (ep.outcome() != Outcome::Running) break;
    ep.step(s.commanded);
  }
  const std::string again = write_replay(ep, log.mapgen);

  // Locate the first differing line and attribute it to a step.
  std::size_t a = 0, b = 0;
  int step = 0;
  while (a < text.size() || b < again.size()) {
    const std::size_t ea = text.find('\n', a);
    const std::size_t eb = again.find('\n', b);
    const std::string la = a < text.size() ? text.substr(a, ea - a) : std::string();
    const std::string lb = b < again.size() ? again.substr(b, eb - b) : std::string();
    if (la.rfind("step ", 0) == 0) step = std::atoi(la.c_str() + 5);
    if (la != lb) {
      if (la.rfind("end ", 0) == 0 || la.empty()) step = static_cast<int>(log.steps.size()) + (la.empty() ? 0 : 1);
      if (lb.rfind("step ", 0) == 0 && la.rfind("step ", 0) != 0) step = std::atoi(lb.c_str() + 5);
      v.divergent_step = step;
      v.message = step == 0 ? "header differs from the re-simulation"
                            : "first divergence at step " + std::to_string(step);
      return v;
    }
    a = ea == std::string::npos ? text.size() : ea + 1;
    b = eb == std::string::npos ? again.size() : eb + 1;
  }
  v.ok = true;
  v.message = "replay matches (" + std::to_string(log.steps.size()) + " steps)";
  return v;
}

OccupancyGrid replay_map(const ReplayLog &log) { return resolve_map(MapRef::parse(log.map_ref), log.mapgen); }

std::string costmap_dump_at(const ReplayLog &log, const OccupancyGrid &grid, int step) {
  if (step < 0 || step > static_cast<int>(log.steps.size())) {
    throw Error(ErrorCode::InvalidArgument, "step " + std::to_string(step) + " is outside the log (0.." +
                                                std::to_string(log.steps.size()) + ")");
  }
  EpisodeConfig cfg = log.config;
  cfg.build_observations = false;
  const auto world = World::build(grid, log.map_ref, cfg);
  Episode ep(world, cfg);
  ep.reset(log.scenario);
  for (int i = 0; i < step; ++i) ep.step(log.steps[static_cast<std::size_t>(i)].commanded);
  const Costmap inflated = inflate_pedestrians(world->robot_costmap, ep.visible(), cfg.gaussian);
  std::vector<Vec2> path{ep.pose().position()};
  const Waypoints &wp = ep.waypoints();
  for (std::size_t i = wp.cursor; i < wp.points.size(); ++i) path.push_back(wp.points[i]);
  return dump_costmap(inflated, ep.visible(), path, cfg.gaussian.weight);
}

}  // namespace socnav
