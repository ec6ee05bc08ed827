/*
 * bench.cpp
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

#include "socnav/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <nlohmann/json.hpp>
#include <thread>

#include "net.hpp"
#include "socnav/error.hpp"
#include "socnav/protocol.hpp"
#include "socnav/replay.hpp"

namespace socnav {

const char *local_planner_name(LocalPlannerKind k) {
  switch (k) {
    case LocalPlannerKind::DWA: return "dwa";
    case LocalPlannerKind::ExternalPolicy: return "external";
    case LocalPlannerKind::ScriptedFollower: return "scripted";
  }
  return "dwa";
}

std::optional<LocalPlannerKind> parse_local_planner(const std::string &name) {
  for (LocalPlannerKind k : {LocalPlannerKind::DWA, LocalPlannerKind::ExternalPolicy, LocalPlannerKind::ScriptedFollower}) {
    if (name == local_planner_name(k)) return k;
  }
  return std::nullopt;
}

std::string PlannerCombo::name() const {
  return std::string(global_planner_name(global)) + "+" + local_planner_name(local);
}

std::optional<PlannerCombo> PlannerCombo::parse(const std::string &text) {
  const auto plus = text.find('+');
  if (plus == std::string::npos) return std::nullopt;
  const auto g = parse_global_planner(text.substr(0, plus));
  const auto l = parse_local_planner(text.substr(plus + 1));
  if (!g || !l) return std::nullopt;
  return PlannerCombo{*g, *l};
}

Action scripted_follower(const Pose &pose, const Vec2 &target, const FollowerConfig &cfg, double v_max,
                         double omega_max) {
  const double b = bearing_to(pose, target);
  return {std::fabs(b) < cfg.align_angle ? v_max : 0.0, std::clamp(cfg.heading_gain * b, -omega_max, omega_max)};
}

Vec2 pursuit_target(const Waypoints &wp, const Vec2 &robot, double lookahead) {
  const std::vector<Vec2> &pts = wp.points;
  Vec2 a = wp.cursor > 0 ? pts[wp.cursor - 1] : robot;
  const Vec2 ab = pts[wp.cursor] - a;
  const double len2 = abs_sq(ab);
  const double t = len2 > 0.0 ? std::clamp(dot(robot - a, ab) / len2, 0.0, 1.0) : 1.0;
  a = a + ab * t;
  double remaining = lookahead;
  for (std::size_t i = wp.cursor; i < pts.size(); ++i) {
    const double seg = distance(a, pts[i]);
    if (seg >= remaining) return a + (pts[i] - a) * (remaining / seg);
    remaining -= seg;
    a = pts[i];
  }
  return pts.back();
}

Vec2 lookahead_target(const Waypoints &wp, const Vec2 &robot, double lookahead) {
  for (std::size_t i = wp.cursor; i < wp.points.size(); ++i) {
    if (distance(wp.points[i], robot) >= lookahead) return wp.points[i];
  }
  return wp.points.back();
}

void BenchConfig::validate() const {
  if (maps.empty()) throw Error(ErrorCode::InvalidArgument, "bench needs at least one map");
  for (const std::string &m : maps) {
    const MapRef r = MapRef::parse(m);
    if (r.kind == MapRef::Kind::File && !std::filesystem::exists(r.path)) {
      throw Error(ErrorCode::InvalidArgument, "map file not found: " + r.path);
    }
  }
  if (episodes_per_map <= 0) throw Error(ErrorCode::InvalidArgument, "episodes_per_map must be > 0");
  if (ped_counts.empty() || modes.empty() || combos.empty()) {
    throw Error(ErrorCode::InvalidArgument, "ped_counts, modes and combos must be nonempty");
  }
  for (int n : ped_counts) {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "pedestrian counts must be >= 0");
  }
  if (!(psv_dist > 0.0)) throw Error(ErrorCode::InvalidArgument, "psv_dist must be > 0");
  if (!(dwa_lookahead >= 0.0)) throw Error(ErrorCode::InvalidArgument, "dwa_lookahead must be >= 0");
  if (threads < 0) throw Error(ErrorCode::InvalidArgument, "threads must be >= 0");
  episode.validate();
  effective_dwa(*this).validate(episode.dt);
  mapgen.validate();
  scenario.validate();
}

DwaConfig effective_dwa(const BenchConfig &cfg) {
  DwaConfig d = cfg.dwa;
  d.v_max = cfg.episode.v_max;
  d.omega_max = cfg.episode.omega_max;
  d.robot_radius = cfg.episode.robot_radius;
  d.ped_collision_dist = cfg.episode.ped_collision_dist;
  return d;
}

namespace {

std::string join(const std::vector<std::string> &items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
  return out;
}

[[noreturn]] void bad_list(const std::string &key, const std::string &item, const std::string &valid) {
  throw Error(ErrorCode::InvalidArgument, "config key '" + key + "': invalid entry '" + item + "' (valid: " + valid + ")");
}

std::string valid_combos() {
  std::vector<std::string> names;
  for (auto g : {GlobalPlannerKind::PPP, GlobalPlannerKind::AStar, GlobalPlannerKind::FixedAtStart}) {
    for (auto l : {LocalPlannerKind::DWA, LocalPlannerKind::ExternalPolicy, LocalPlannerKind::ScriptedFollower}) {
      names.push_back(PlannerCombo{g, l}.name());
    }
  }
  return join(names);
}

KeyRegistry<BenchConfig> make_bench_registry() {
  KeyRegistry<BenchConfig> r;
  r.add("seed", [](const BenchConfig &c) { return std::to_string(c.seed); },
        [](BenchConfig &c, const std::string &v) {
          const long long x = parse_int_value("seed", v);
          if (x < 0) throw Error(ErrorCode::InvalidArgument, "seed must be >= 0");
          c.seed = static_cast<std::uint64_t>(x);
        });
  r.add("maps", [](const BenchConfig &c) { return join(c.maps); },
        [](BenchConfig &c, const std::string &v) {
          std::vector<std::string> maps = split_list(v);
          for (const std::string &m : maps) MapRef::parse(m);
          c.maps = std::move(maps);
        });
  r.add("episodes_per_map", [](const BenchConfig &c) { return std::to_string(c.episodes_per_map); },
        [](BenchConfig &c, const std::string &v) {
          c.episodes_per_map = static_cast<int>(parse_int_value("episodes_per_map", v));
        });
  r.add("ped_counts",
        [](const BenchConfig &c) {
          std::vector<std::string> s;
          for (int n : c.ped_counts) s.push_back(std::to_string(n));
          return join(s);
        },
        [](BenchConfig &c, const std::string &v) {
          std::vector<int> counts;
          for (const std::string &s : split_list(v)) counts.push_back(static_cast<int>(parse_int_value("ped_counts", s)));
          c.ped_counts = std::move(counts);
        });
  r.add("modes",
        [](const BenchConfig &c) {
          std::vector<std::string> s;
          for (CrowdMode m : c.modes) s.push_back(crowd_mode_name(m));
          return join(s);
        },
        [](BenchConfig &c, const std::string &v) {
          std::vector<CrowdMode> modes;
          for (const std::string &s : split_list(v)) {
            const auto m = parse_crowd_mode(s);
            if (!m) bad_list("modes", s, "cooperative,uncooperative");
            modes.push_back(*m);
          }
          c.modes = std::move(modes);
        });
  r.add("combos",
        [](const BenchConfig &c) {
          std::vector<std::string> s;
          for (const PlannerCombo &p : c.combos) s.push_back(p.name());
          return join(s);
        },
        [](BenchConfig &c, const std::string &v) {
          std::vector<PlannerCombo> combos;
          for (const std::string &s : split_list(v)) {
            const auto p = PlannerCombo::parse(s);
            if (!p) bad_list("combos", s, valid_combos());
            combos.push_back(*p);
          }
          c.combos = std::move(combos);
        });
  r.add("psv_dist", [](const BenchConfig &c) { return format_double(c.psv_dist); },
        [](BenchConfig &c, const std::string &v) { c.psv_dist = parse_double_value("psv_dist", v); });
  r.add("dwa_lookahead", [](const BenchConfig &c) { return format_double(c.dwa_lookahead); },
        [](BenchConfig &c, const std::string &v) { c.dwa_lookahead = parse_double_value("dwa_lookahead", v); });
  r.add("ts_over", [](const BenchConfig &c) { return std::string(c.ts_over_all ? "all" : "successful"); },
        [](BenchConfig &c, const std::string &v) {
          if (v != "all" && v != "successful") bad_list("ts_over", v, "successful,all");
          c.ts_over_all = v == "all";
        });
  r.add("threads", [](const BenchConfig &c) { return std::to_string(c.threads); },
        [](BenchConfig &c, const std::string &v) { c.threads = static_cast<int>(parse_int_value("threads", v)); });
  r.add("output", [](const BenchConfig &c) { return c.output; },
        [](BenchConfig &c, const std::string &v) { c.output = v; });
  r.add("policy_endpoint", [](const BenchConfig &c) { return c.policy_endpoint; },
        [](BenchConfig &c, const std::string &v) {
          net::split_endpoint(v);
          c.policy_endpoint = v;
        });
  r.add("replays", [](const BenchConfig &c) { return std::string(c.write_replays ? "true" : "false"); },
        [](BenchConfig &c, const std::string &v) { c.write_replays = parse_bool_value("replays", v); });
  r.include(episode_registry(), [](auto &c) -> auto & { return c.episode; });
  r.include(dwa_registry(), [](auto &c) -> auto & { return c.dwa; }, "dwa.");
  r.include(mapgen_registry(), [](auto &c) -> auto & { return c.mapgen; }, "mapgen.");
  r.include(scenario_registry(), [](auto &c) -> auto & { return c.scenario; }, "scenario.");
  r.add("follower.heading_gain", [](const BenchConfig &c) { return format_double(c.follower.heading_gain); },
        [](BenchConfig &c, const std::string &v) {
          c.follower.heading_gain = parse_double_value("follower.heading_gain", v);
        });
  r.add("follower.align_angle", [](const BenchConfig &c) { return format_double(c.follower.align_angle); },
        [](BenchConfig &c, const std::string &v) {
          c.follower.align_angle = parse_double_value("follower.align_angle", v);
        });
  r.add("follower.lookahead", [](const BenchConfig &c) { return format_double(c.follower.lookahead); },
        [](BenchConfig &c, const std::string &v) {
          c.follower.lookahead = parse_double_value("follower.lookahead", v);
        });
  return r;
}

}  // namespace

const KeyRegistry<BenchConfig> &bench_registry() {
  static const KeyRegistry<BenchConfig> r = make_bench_registry();
  return r;
}

MetricsReport aggregate(const std::vector<EpisodeResult> &results, bool ts_over_all) {
  MetricsReport m;
  int success = 0, collision = 0, timeout = 0, ts_count = 0;
  double ts_sum = 0.0, psv_sum = 0.0;
  for (const EpisodeResult &r : results) {
    if (r.aborted) {
      ++m.aborted;
      continue;
    }
    ++m.episodes;
    psv_sum += r.psv_percent();
    if (r.outcome == Outcome::Success) ++success;
    if (r.outcome == Outcome::PedestrianCollision) ++collision;
    if (r.outcome == Outcome::Timeout) ++timeout;
    if (ts_over_all || r.outcome == Outcome::Success) {
      ts_sum += r.steps;
      ++ts_count;
    }
  }
  if (m.episodes == 0) throw Error(ErrorCode::InvalidArgument, "no completed episodes to aggregate");
  const double n = m.episodes;
  m.sr = 100.0 * success / n;
  m.co = 100.0 * collision / n;
  m.to = 100.0 * timeout / n;
  m.psv = psv_sum / n;
  m.ts = ts_count > 0 ? ts_sum / ts_count : std::numeric_limits<double>::quiet_NaN();
  return m;
}

namespace {

class TcpPolicy : public PolicyConnection {
 public:
  explicit TcpPolicy(net::LineSocket sock) : sock_(std::move(sock)) {}

  std::array<double, 2> start(const Observation &obs) override {
    ObsResponse msg;
    msg.observation = obs;
    return exchange(encode(Response{msg}));
  }

  std::optional<std::array<double, 2>> next(const StepResult &r) override {
    StepResponse msg;
    msg.step_index = r.step_index;
    msg.outcome = r.outcome;
    msg.reward = r.reward;
    msg.applied = r.info.applied;
    msg.wall_hit = r.info.wall_hit;
    msg.random_action = r.info.random_action;
    msg.replan = r.info.replan;
    msg.observation = *r.observation;
    if (r.outcome != Outcome::Running) {
      sock_.write_line(encode(Response{msg}));
      return std::nullopt;
    }
    return exchange(encode(Response{msg}));
  }

 private:
  std::array<double, 2> exchange(const std::string &line) {
    if (!sock_.write_line(line)) throw Error(ErrorCode::Disconnected, "policy connection lost while sending");
    const auto reply = sock_.read_line();
    if (!reply) throw Error(ErrorCode::Disconnected, "policy connection closed");
    Request req;
    try {
      req = decode_request(*reply);
    } catch (const ProtocolError &e) {
      throw Error(ErrorCode::Disconnected, std::string("policy sent an unreadable reply: ") + e.what());
    }
    const auto *step = std::get_if<StepRequest>(&req);
    if (!step) throw Error(ErrorCode::Disconnected, "policy replied with something other than a step");
    try {
      validate_action(step->action);
    } catch (const ProtocolError &e) {
      throw Error(ErrorCode::Disconnected, std::string("policy action rejected: ") + e.what());
    }
    return step->action;
  }

  net::LineSocket sock_;
};

}  // namespace

std::unique_ptr<PolicyConnection> connect_policy(const std::string &endpoint) {
  const auto [host, port] = net::split_endpoint(endpoint);
  return std::make_unique<TcpPolicy>(net::LineSocket::connect(host, port));
}

EpisodeRun run_episode(const std::shared_ptr<const World> &world, const PlannerCombo &combo,
                       const Scenario &scenario, const BenchConfig &cfg, bool keep_replay) {
  EpisodeRun run;
  EpisodeResult &res = run.result;
  res.map_ref = world->map_ref;
  res.combo = combo;
  res.mode = scenario.mode;
  res.n_peds = static_cast<int>(scenario.n_pedestrians());
  res.seed = scenario.seed;
  res.min_ped_distance = std::numeric_limits<double>::infinity();

  EpisodeConfig ec = cfg.episode;
  ec.planner = combo.global;
  ec.build_observations = combo.local == LocalPlannerKind::ExternalPolicy;
  const DwaConfig dwa = effective_dwa(cfg);
  Episode ep(world, ec);
  try {
    const std::optional<Observation> first = ep.reset(scenario);
    std::unique_ptr<PolicyConnection> policy;
    std::array<double, 2> pending{};
    if (combo.local == LocalPlannerKind::ExternalPolicy) {
      policy = connect_policy(cfg.policy_endpoint);
      pending = policy->start(*first);
    }
    while (ep.outcome() == Outcome::Running) {
      const Vec2 target = ep.waypoints().empty() ? scenario.robot_goal : ep.waypoints().current();
      Action act;
      switch (combo.local) {
        case LocalPlannerKind::ScriptedFollower:
          act = scripted_follower(ep.pose(),
                                  ep.waypoints().empty()
                                      ? target
                                      : pursuit_target(ep.waypoints(), ep.pose().position(), cfg.follower.lookahead),
                                  cfg.follower, ec.v_max, ec.omega_max);
          break;
        case LocalPlannerKind::DWA: {
          const DwaWorld dw{&world->grid, &world->clearance, ep.visible()};
          const Vec2 goal = ep.waypoints().empty() ? target
                                                   : lookahead_target(ep.waypoints(), ep.pose().position(), cfg.dwa_lookahead);
          const DwaChoice c = dwa_step(ep.pose(), ep.last_action().v, ep.last_action().omega, goal, dw, dwa, ec.dt);
          act = {c.v, c.omega};
          break;
        }
        case LocalPlannerKind::ExternalPolicy:
          act = denormalize_action(pending, ec.v_max, ec.omega_max);
          break;
      }
      const StepResult r = ep.step(act);
      if (r.info.nearest_ped_distance < cfg.psv_dist) ++res.psv_steps;
      res.min_ped_distance = std::min(res.min_ped_distance, r.info.nearest_ped_distance);
      if (r.info.replan == ReplanEvent::NewPlan) ++res.replans;
      if (r.info.wall_hit) ++res.wall_hits;
      if (policy) {
        if (auto a = policy->next(r)) pending = *a;
      }
    }
  } catch (const Error &e) {
    if (e.code() != ErrorCode::Disconnected) throw;
    res.aborted = true;
    res.abort_reason = e.what();
  }
  res.outcome = ep.outcome();
  res.steps = ep.step_index();
  res.total_return = ep.return_so_far();
  if (keep_replay && ep.started()) run.replay = write_replay(ep, cfg.mapgen);
  return run;
}

std::vector<WorkItem> bench_schedule(const BenchConfig &cfg) {
  std::vector<WorkItem> items;
  const std::size_t m = cfg.modes.size();
  const std::size_t p = cfg.ped_counts.size();
  for (std::size_t map = 0; map < cfg.maps.size(); ++map) {
    for (int e = 0; e < cfg.episodes_per_map; ++e) {
      WorkItem w;
      w.map_index = static_cast<int>(map);
      w.episode_index = e;
      w.mode = cfg.modes[static_cast<std::size_t>(e) % m];
      w.n_peds = cfg.ped_counts[(static_cast<std::size_t>(e) / m) % p];
      w.seed = mix_seed(mix_seed(cfg.seed, map), static_cast<std::uint64_t>(e));
      items.push_back(w);
    }
  }
  return items;
}

BenchOutput run_bench(const BenchConfig &cfg, const std::function<void(std::size_t, std::size_t)> &progress) {
  cfg.validate();
  std::vector<std::shared_ptr<const World>> worlds;
  for (const std::string &ref : cfg.maps) {
    const MapRef r = MapRef::parse(ref);
    worlds.push_back(World::build(resolve_map(r, cfg.mapgen), r.str(), cfg.episode));
  }
  const std::vector<WorkItem> items = bench_schedule(cfg);
  const std::size_t n_combos = cfg.combos.size();
  const std::size_t total = items.size() * n_combos;
  BenchOutput out;
  out.results.resize(total);
  if (cfg.write_replays) out.replays.resize(total);

  // Scenarios are shared by every combo so comparisons are paired.
  std::vector<std::optional<Scenario>> scenarios(items.size());
  std::vector<std::string> scenario_errors(items.size());

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mu;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const std::size_t item_index = job / n_combos;
      const WorkItem &w = items[item_index];
      const auto &world = worlds[static_cast<std::size_t>(w.map_index)];
      try {
        // Combo 0 of each item samples the scenario; the rest derive the identical one.
        const Scenario s = scenario_for_seed(*world, w.seed, static_cast<std::size_t>(w.n_peds), w.mode, cfg.scenario);
        EpisodeRun run = run_episode(world, cfg.combos[job % n_combos], s, cfg, cfg.write_replays);
        run.result.map_index = w.map_index;
        run.result.episode_index = w.episode_index;
        out.results[job] = std::move(run.result);
        if (cfg.write_replays) out.replays[job] = std::move(run.replay);
      } catch (const Error &e) {
        if (e.code() != ErrorCode::InvalidScenario) {
          std::lock_guard<std::mutex> lock(progress_mu);
          if (!failure) failure = std::current_exception();
          next.store(total);
          return;
        }
        EpisodeResult &r = out.results[job];
        r.map_index = w.map_index;
        r.map_ref = world->map_ref;
        r.episode_index = w.episode_index;
        r.combo = cfg.combos[job % n_combos];
        r.mode = w.mode;
        r.n_peds = w.n_peds;
        r.seed = w.seed;
        r.aborted = true;
        r.abort_reason = e.what();
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mu);
        progress(d, total);
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min<std::size_t>(cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads) : hw, total);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread &t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace {

std::string fixed(double v, int digits = 4) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Group {
  std::string combo;
  std::string mode;
  std::string n_peds;
  std::vector<EpisodeResult> results;
};

/// Overall, per-mode and per-(mode, density) groups for each combo, in config order.
std::vector<Group> groups(const std::vector<EpisodeResult> &results, const BenchConfig &cfg) {
  std::vector<Group> out;
  std::vector<int> counts = cfg.ped_counts;
  std::sort(counts.begin(), counts.end());
  counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
  for (const PlannerCombo &c : cfg.combos) {
    auto select = [&](const std::optional<CrowdMode> &mode, const std::optional<int> &n) {
      std::vector<EpisodeResult> sel;
      for (const EpisodeResult &r : results) {
        if (r.combo == c && (!mode || r.mode == *mode) && (!n || r.n_peds == *n)) sel.push_back(r);
      }
      return sel;
    };
    out.push_back({c.name(), "all", "all", select(std::nullopt, std::nullopt)});
    std::vector<CrowdMode> seen;
    for (CrowdMode m : cfg.modes) {
      if (std::find(seen.begin(), seen.end(), m) != seen.end()) continue;
      seen.push_back(m);
      out.push_back({c.name(), crowd_mode_name(m), "all", select(m, std::nullopt)});
      for (int n : counts) out.push_back({c.name(), crowd_mode_name(m), std::to_string(n), select(m, n)});
    }
  }
  return out;
}

bool has_completed(const std::vector<EpisodeResult> &rs) {
  return std::any_of(rs.begin(), rs.end(), [](const EpisodeResult &r) { return !r.aborted; });
}

}  // namespace

std::string episodes_csv(const std::vector<EpisodeResult> &results) {
  std::string out =
      "schema_version,map_index,map,episode,combo,global,local,mode,n_peds,seed,outcome,steps,return,psv_pct,"
      "min_ped_distance,replans,wall_hits,aborted,abort_reason\n";
  for (const EpisodeResult &r : results) {
    out += std::to_string(kReportSchemaVersion) + ',' + std::to_string(r.map_index) + ',' + csv_field(r.map_ref) +
           ',' + std::to_string(r.episode_index) + ',' + r.combo.name() + ',' + global_planner_name(r.combo.global) +
           ',' + local_planner_name(r.combo.local) + ',' + crowd_mode_name(r.mode) + ',' + std::to_string(r.n_peds) +
           ',' + std::to_string(r.seed) + ',' + (r.aborted ? "aborted" : outcome_name(r.outcome)) + ',' +
           std::to_string(r.steps) + ',' + format_double(r.total_return) + ',' + fixed(r.psv_percent(), 6) + ',' +
           (std::isfinite(r.min_ped_distance) ? format_double(r.min_ped_distance) : "") + ',' +
           std::to_string(r.replans) + ',' + std::to_string(r.wall_hits) + ',' + (r.aborted ? "1" : "0") + ',' +
           csv_field(r.abort_reason) + '\n';
  }
  return out;
}

std::string summary_csv(const std::vector<EpisodeResult> &results, const BenchConfig &cfg) {
  std::string out = "schema_version,combo,mode,n_peds,episodes,aborted,sr,ts,psv,co,to\n";
  for (const Group &g : groups(results, cfg)) {
    if (!has_completed(g.results)) continue;
    const MetricsReport m = aggregate(g.results, cfg.ts_over_all);
    out += std::to_string(kReportSchemaVersion) + ',' + g.combo + ',' + g.mode + ',' + g.n_peds + ',' +
           std::to_string(m.episodes) + ',' + std::to_string(m.aborted) + ',' + fixed(m.sr) + ',' + fixed(m.ts) +
           ',' + fixed(m.psv) + ',' + fixed(m.co) + ',' + fixed(m.to) + '\n';
  }
  return out;
}

std::string report_json(const std::vector<EpisodeResult> &results, const BenchConfig &cfg) {
  using json = nlohmann::ordered_json;
  json j;
  j["schema_version"] = kReportSchemaVersion;
  json config = json::object();
  for (const auto &[k, v] : bench_registry().items(cfg)) config[k] = v;
  j["config"] = config;
  auto metrics = [&](const std::vector<EpisodeResult> &rs) {
    json m;
    const MetricsReport r = aggregate(rs, cfg.ts_over_all);
    m["episodes"] = r.episodes;
    m["aborted"] = r.aborted;
    m["sr"] = r.sr;
    m["ts"] = std::isnan(r.ts) ? json(nullptr) : json(r.ts);
    m["psv"] = r.psv;
    m["co"] = r.co;
    m["to"] = r.to;
    return m;
  };
  json combos = json::array();
  std::map<std::string, json> by_combo;
  std::vector<std::string> order;
  for (const Group &g : groups(results, cfg)) {
    if (!by_combo.count(g.combo)) {
      order.push_back(g.combo);
      by_combo[g.combo] = json{{"combo", g.combo}, {"overall", nullptr}, {"by_mode", json::object()},
                               {"by_density", json::object()}};
    }
    json &c = by_combo[g.combo];
    const json m = has_completed(g.results) ? metrics(g.results) : json(nullptr);
    if (g.mode == "all") {
      c["overall"] = m;
    } else if (g.n_peds == "all") {
      c["by_mode"][g.mode] = m;
    } else {
      c["by_density"][g.mode][g.n_peds] = m;
    }
  }
  for (const std::string &name : order) combos.push_back(by_combo[name]);
  j["combos"] = combos;
  json aborted = json::array();
  for (const EpisodeResult &r : results) {
    if (!r.aborted) continue;
    aborted.push_back(json{{"map", r.map_ref}, {"episode", r.episode_index}, {"combo", r.combo.name()},
                           {"reason", r.abort_reason}});
  }
  j["aborted"] = aborted;
  return j.dump(2) + "\n";
}

std::string summary_table(const std::vector<EpisodeResult> &results, const BenchConfig &cfg) {
  std::string out;
  char buf[256];
  auto cell = [&](const std::vector<EpisodeResult> &rs) {
    if (!has_completed(rs)) {
      std::snprintf(buf, sizeof buf, " %6s %6s %6s %6s %6s", "-", "-", "-", "-", "-");
      return std::string(buf);
    }
    const MetricsReport m = aggregate(rs, cfg.ts_over_all);
    std::snprintf(buf, sizeof buf, " %6.2f %6s %6.2f %6.2f %6.2f", m.sr, std::isnan(m.ts) ? "-" : fixed(m.ts, 1).c_str(),
                  m.psv, m.co, m.to);
    return std::string(buf);
  };
  const std::vector<Group> gs = groups(results, cfg);
  std::snprintf(buf, sizeof buf, "%-20s", "combo");
  out += buf;
  for (CrowdMode m : cfg.modes) {
    std::snprintf(buf, sizeof buf, " | %-34s", crowd_mode_name(m));
    out += buf;
  }
  out += "\n";
  std::snprintf(buf, sizeof buf, "%-20s", "");
  out += buf;
  for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
    std::snprintf(buf, sizeof buf, " | %6s %6s %6s %6s %6s", "SR", "TS", "PSV", "CO", "TO");
    out += buf;
  }
  out += "\n";
  for (const PlannerCombo &c : cfg.combos) {
    std::snprintf(buf, sizeof buf, "%-20s", c.name().c_str());
    out += buf;
    for (CrowdMode m : cfg.modes) {
      for (const Group &g : gs) {
        if (g.combo == c.name() && g.mode == crowd_mode_name(m) && g.n_peds == "all") {
          out += " |" + cell(g.results);
          break;
        }
      }
    }
    out += "\n";
  }
  int aborted = 0;
  for (const EpisodeResult &r : results) aborted += r.aborted ? 1 : 0;
  std::snprintf(buf, sizeof buf, "\n%zu episodes, %d aborted. SR, PSV, CO, TO in %%; TS in steps (%s).\n",
                results.size(), aborted, cfg.ts_over_all ? "all episodes" : "successful episodes");
  out += buf;
  return out;
}

void write_bench_outputs(const BenchOutput &out, const BenchConfig &cfg) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + cfg.output + ": " + ec.message());
  auto write = [&](const fs::path &p, const std::string &text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
    if (!f) throw Error(ErrorCode::Io, "cannot write " + p.string());
  };
  const fs::path dir(cfg.output);
  write(dir / "episodes.csv", episodes_csv(out.results));
  write(dir / "summary.csv", summary_csv(out.results, cfg));
  write(dir / "report.json", report_json(out.results, cfg));
  write(dir / "summary.txt", summary_table(out.results, cfg));
  if (cfg.write_replays) {
    fs::create_directories(dir / "replays", ec);
    for (std::size_t i = 0; i < out.results.size(); ++i) {
      if (out.replays[i].empty()) continue;
      const EpisodeResult &r = out.results[i];
      char name[128];
      std::snprintf(name, sizeof name, "m%02d_e%03d_%s.log", r.map_index, r.episode_index, r.combo.name().c_str());
      std::string file = name;
      std::replace(file.begin(), file.end(), '+', '_');
      write(dir / "replays" / file, out.replays[i]);
    }
  }
}

}  // namespace socnav
