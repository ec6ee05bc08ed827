/*
 * acceptance.cpp
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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when everything passes).
//
// usage: acceptance [path-to-socnav-cli]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "oracles.hpp"
#include "socnav/bench.hpp"
#include "socnav/crowd.hpp"
#include "socnav/episode.hpp"
#include "socnav/planner.hpp"
#include "socnav/protocol.hpp"
#include "socnav/replay.hpp"
#include "socnav/service.hpp"

using namespace socnav;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

int g_failed = 0;

void report(const char *name, const std::function<Verdict()> &check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception &e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.pass) ++g_failed;
  std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
  std::fflush(stdout);
}

template <typename... Args>
std::string fmt(const char *f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------- LP oracle

Verdict lp_oracle() {
  const auto t0 = Clock::now();
  std::mt19937 rng(20260);
  std::uniform_real_distribution<double> u(-1, 1), ang(-kPi, kPi);
  double worst = 0.0;
  int bad = 0, infeasible = 0;
  for (int k = 0; k < 500; ++k) {
    std::vector<HalfPlane> lines;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) lines.push_back({{0.4 * u(rng), 0.4 * u(rng)}, unit_from_angle(ang(rng))});
    const Vec2 pref{u(rng), u(rng)};
    const Vec2 v = solve_velocity_lp(lines, pref, 0.6);
    const auto bf = oracle::brute_force_lp(lines, pref, 0.6, 1000000);
    if (!bf.feasible) ++infeasible;
    const double d = distance(v, bf.velocity);
    worst = std::max(worst, d);
    if (d > 1e-3) ++bad;
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 60.0,
          fmt("500 instances (%d infeasible), max |v - v_bf| = %.2e (tol 1e-3), %d over, %.1f s (limit 60 s)",
              infeasible, worst, bad, t)};
}

// ---------------------------------------------------------------- ORCA safety

Agent make_agent(int id, Vec2 pos, Vec2 goal) {
  PedestrianParams p;
  p.radius = 0.15;
  return Agent::with_params(id, pos, goal, p);
}

double min_pair_separation(std::vector<Agent> agents, int steps) {
  const OccupancyGrid grid = OccupancyGrid::filled(200, 200, 0.1, {-10, -10});
  const WallIndex walls(grid);
  double min_sep = 1e9;
  for (int s = 0; s < steps; ++s) {
    agents = step_crowd(agents, RobotBody{{9, 9}, {}, 0.15}, walls, CrowdMode::Uncooperative, 0.1);
    for (std::size_t i = 0; i < agents.size(); ++i) {
      for (std::size_t j = i + 1; j < agents.size(); ++j) {
        min_sep = std::min(min_sep, distance(agents[i].position, agents[j].position));
      }
    }
  }
  return min_sep;
}

Verdict orca_safety() {
  std::vector<Agent> swap{make_agent(0, {-3, 0}, {3, 0}), make_agent(1, {3, 0}, {-3, 0})};
  const double a = min_pair_separation(swap, 500);
  std::vector<Agent> circle;
  for (int i = 0; i < 8; ++i) {
    const Vec2 p = unit_from_angle(2.0 * kPi * i / 8) * 3.0;
    circle.push_back(make_agent(i, p, -p));
  }
  for (auto &c : circle) c.position += unit_from_angle(0.7 * c.id) * (0.05 * c.id);
  const double b = min_pair_separation(circle, 500);
  const double need = 0.3 - 1e-3;
  return {a >= need && b >= need,
          fmt("head-on min sep %.4f, 8-circle min sep %.4f (need >= %.3f), 500 steps each", a, b, need)};
}

// ---------------------------------------------------------------- A* = Dijkstra

Costmap random_costmap(std::mt19937 &rng, int w, int h) {
  std::vector<double> cost(static_cast<std::size_t>(w * h));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double &c : cost) {
    const double r = u(rng);
    c = r < 0.2 ? Costmap::kLethal : 1.0 + (r < 0.6 ? 0.0 : 9.0 * u(rng));
  }
  return Costmap(GridGeometry{w, h, 0.1, {}}, cost);
}

Costmap random_inflated(std::mt19937 &rng, int w, int h) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::string> rows(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.'));
  for (auto &r : rows) {
    for (char &c : r) c = u(rng) < 0.08 ? '#' : '.';
  }
  const Costmap base = base_costmap(oracle::grid_from_rows(rows), 0.0);
  std::vector<PedestrianEstimate> peds;
  const int n = static_cast<int>(rng() % 5);
  for (int i = 0; i < n; ++i) {
    PedestrianEstimate e;
    e.world_position = {0.1 * w * u(rng), 0.1 * h * u(rng)};
    e.world_heading = kPi * (2.0 * u(rng) - 1.0);
    e.distance = 5.0 * u(rng);
    e.radius = 0.15;
    peds.push_back(e);
  }
  return inflate_pedestrians(base, peds, GaussianParams{});
}

Verdict astar_dijkstra() {
  const auto t0 = Clock::now();
  std::mt19937 rng(1000);
  int compared = 0, exact = 0, bad = 0;
  double worst_rel = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int w = 2 + static_cast<int>(rng() % 29), h = 2 + static_cast<int>(rng() % 29);
    const Costmap c = k % 2 ? random_inflated(rng, w, h) : random_costmap(rng, w, h);
    const Cell s{static_cast<int>(rng() % w), static_cast<int>(rng() % h)};
    const Cell t{static_cast<int>(rng() % w), static_cast<int>(rng() % h)};
    const PlanResult r = plan_astar(c, s, t);
    const double ref = oracle::dijkstra_cost(c, s, t);
    if (c.lethal(s) || c.lethal(t)) {
      bad += r.status != PlanStatus::InvalidEndpoint;
    } else if (std::isinf(ref)) {
      bad += r.status != PlanStatus::NoPath;
    } else if (r.status != PlanStatus::Ok) {
      ++bad;
    } else {
      ++compared;
      exact += r.path.cost == ref;
      const double rel = std::fabs(r.path.cost - ref) / std::max(ref, 1.0);
      worst_rel = std::max(worst_rel, rel);
      bad += rel > 1e-9;
    }
  }
  const double t = seconds_since(t0);
  return {bad == 0 && t < 30.0,
          fmt("1000 maps (half inflated), %d solvable, %d bit-identical, max rel diff %.1e (tol 1e-9), "
              "%d mismatches, %.1f s (limit 30 s)",
              compared, exact, worst_rel, bad, t)};
}

// ---------------------------------------------------------------- Gaussian

PedestrianEstimate ped(Vec2 p, double heading, double dist_to_robot) {
  PedestrianEstimate e;
  e.world_position = p;
  e.world_heading = heading;
  e.distance = dist_to_robot;
  e.radius = 0.15;
  return e;
}

Verdict gaussian_checks() {
  const GaussianParams p;
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3, 3), ang(-kPi, kPi), dist(0, 5);
  int peak_bad = 0, sigma_bad = 0, aniso_bad = 0, bias_bad = 0;
  double worst_sigma = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double h = ang(rng);
    const auto e = ped({u(rng), u(rng)}, h, dist(rng));
    const GaussianShape s = gaussian_shape(e, p);
    peak_bad += gaussian_cost(s.center, e, p) != 1.0;
    const double g1 = gaussian_cost(s.center + unit_from_angle(h) * s.sigma_x, e, p);
    worst_sigma = std::max(worst_sigma, std::fabs(g1 - std::exp(-0.5)));
    sigma_bad += std::fabs(g1 - std::exp(-0.5)) > 1e-9;
    for (double d = 0.0; d < 3.0; d += 0.05) {
      aniso_bad += gaussian_cost(s.center + unit_from_angle(h) * d, e, p) <
                   gaussian_cost(s.center + unit_from_angle(h + kPi / 2) * d, e, p);
    }
    for (double delta = 0.01; delta < 0.4; delta += 0.03) {
      bias_bad += gaussian_cost(e.world_position + unit_from_angle(h) * delta, e, p) <=
                  gaussian_cost(e.world_position - unit_from_angle(h) * delta, e, p);
    }
  }
  return {peak_bad + sigma_bad + aniso_bad + bias_bad == 0,
          fmt("100 configurations: peak!=1 %d, |g(sigma_x)-e^-1/2| max %.1e (tol 1e-9), anisotropy "
              "violations %d, forward-bias violations %d",
              peak_bad, worst_sigma, aniso_bad, bias_bad)};
}

// ---------------------------------------------------------------- episodes

std::shared_ptr<const World> room(double planning_margin = 0.15) {
  std::vector<std::string> rows;
  for (int y = 0; y < 100; ++y) {
    std::string r(100, '.');
    if (y == 0 || y == 99) r.assign(100, '#');
    r.front() = '#';
    r.back() = '#';
    rows.push_back(r);
  }
  return World::build(oracle::grid_from_rows(rows), "test:room", 0.15, 0.15, planning_margin);
}

Scenario bare(Pose start, Vec2 goal, std::uint64_t seed = 7) {
  Scenario s;
  s.seed = seed;
  s.robot_start = start;
  s.robot_goal = goal;
  return s;
}

Scenario crowd_scenario(std::uint64_t seed, CrowdMode mode) {
  Scenario s = bare({1.5, 1.5, 0.3}, {8.0, 8.0}, seed);
  s.mode = mode;
  s.ped_starts = {{5.0, 5.0}, {7.0, 3.0}, {3.0, 7.0}, {6.0, 6.5}};
  s.ped_goals = {{2.0, 2.5}, {2.0, 8.0}, {8.0, 2.0}, {1.5, 5.0}};
  return s;
}

Verdict reward_conformance() {
  const RewardConfig cfg;
  auto ped_term = [&](double d) {
    RewardInputs in;
    in.nearest_visible_ped = d;
    return compute_reward(in, cfg).ped_avoid;
  };
  const double boundary = ped_term(0.3), threshold = ped_term(1.0), mid = ped_term(0.65);
  RewardInputs in;
  in.wp_distance_before = 2.0;
  in.wp_distance_after = 1.95;
  in.wp_bearing_before = 0.4;
  in.wp_bearing_after = 0.3;
  const double dense = compute_reward(in, cfg).total;
  const bool hand = std::fabs(boundary + 1.0) <= 1e-12 && threshold == 0.0 && std::fabs(mid + 0.5) <= 1e-12 &&
                    std::fabs(dense - 0.044) <= 1e-12;

  const auto world = room();
  EpisodeConfig ecfg;
  ecfg.build_observations = false;
  Episode ep(world, ecfg);
  int steps = 0, sum_bad = 0, return_bad = 0;
  for (std::uint64_t seed = 0; steps < 10000; ++seed) {
    ep.reset(crowd_scenario(seed, seed % 2 ? CrowdMode::Cooperative : CrowdMode::Uncooperative));
    Rng rng(seed);
    double ret = 0.0;
    while (ep.outcome() == Outcome::Running && steps < 10000) {
      const StepResult r = ep.step({rng.uniform(-0.2, 0.6), rng.uniform(-2.0, 2.0)});
      sum_bad += r.reward.total != r.reward.sum();
      ret += r.reward.total;
      ++steps;
    }
    return_bad += ret != ep.return_so_far();
  }
  return {hand && sum_bad == 0 && return_bad == 0,
          fmt("boundary %.12f, threshold %.12f, midpoint %.12f, dense %.12f (tol 1e-12); "
              "%d random steps, %d breakdown mismatches, %d return mismatches",
              boundary, threshold, mid, dense, steps, sum_bad, return_bad)};
}

Verdict episode_rules() {
  std::vector<std::string> notes;
  bool ok = true;

  {
    Episode ep(room(), {});
    ep.reset(bare({2.0, 2.0, 0.0}, {2.34, 2.0}));
    const StepResult r = ep.step({0.5, 0.0});
    const double d = distance(ep.pose().position(), {2.34, 2.0});
    ok &= r.outcome == Outcome::Success && std::fabs(d - 0.29) < 1e-12;
    notes.push_back(fmt("goal dist %.3f -> %s", d, outcome_name(r.outcome)));
  }
  {
    Episode ep(room(), {});
    Scenario s = bare({2.0, 5.0, 0.0}, {8.0, 5.0});
    s.ped_starts = {{2.34, 5.0}};
    s.ped_goals = {{2.34, 5.0}};
    ep.reset(s);
    const StepResult r = ep.step({0.5, 0.0});
    ok &= r.outcome == Outcome::PedestrianCollision && std::fabs(r.info.nearest_ped_distance - 0.29) < 1e-12;
    notes.push_back(fmt("ped dist %.3f -> %s", r.info.nearest_ped_distance, outcome_name(r.outcome)));
  }
  {
    EpisodeConfig cfg;
    cfg.build_observations = false;
    Episode ep(room(), cfg);
    ep.reset(bare({2.0, 2.0, 0.0}, {8.0, 8.0}));
    int first_end = 0;
    StepResult r;
    for (int k = 1; k <= 500; ++k) {
      r = ep.step({0.0, 0.0});
      if (r.outcome != Outcome::Running && first_end == 0) first_end = k;
    }
    ok &= first_end == 500 && r.outcome == Outcome::Timeout;
    notes.push_back(fmt("terminal at step %d -> %s", first_end, outcome_name(r.outcome)));
  }
  {
    EpisodeConfig cfg;
    cfg.planning_margin = 0.0;
    Episode ep(room(0.0), cfg);
    ep.reset(bare({0.28, 5.0, kPi}, {8.0, 5.0}));
    int first_random = 0, hits = 0;
    for (int k = 1; k <= 5; ++k) {
      const StepResult r = ep.step({0.5, 0.0});
      hits += r.info.wall_hit;
      if (r.info.random_action && first_random == 0) first_random = k;
    }
    ok &= hits == 5 && first_random == 5;
    notes.push_back(fmt("%d consecutive wall hits, random action first on hit %d", hits, first_random));
  }
  std::string detail;
  for (const auto &n : notes) detail += (detail.empty() ? "" : "; ") + n;
  return {ok, detail};
}

// ---------------------------------------------------------------- bench

std::string cli_path;

int run_cli_replay(const std::string &text) {
  const fs::path dir = fs::temp_directory_path() / fmt("socnav_accept_%d", static_cast<int>(::getpid()));
  fs::create_directories(dir);
  const fs::path file = dir / "episode.log";
  std::ofstream(file) << text;
  const std::string cmd = "\"" + cli_path + "\" replay \"" + file.string() + "\" >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  fs::remove_all(dir);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Verdict determinism() {
  const auto t0 = Clock::now();
  BenchConfig cfg;
  cfg.seed = 2026;
  cfg.maps = {"gen:101"};
  cfg.episodes_per_map = 50;
  cfg.combos = {*PlannerCombo::parse("ppp+scripted")};
  cfg.write_replays = true;
  cfg.threads = 1;
  const BenchOutput a = run_bench(cfg);
  cfg.threads = 2;
  const BenchOutput b = run_bench(cfg);
  const bool same = episodes_csv(a.results) == episodes_csv(b.results) &&
                    summary_csv(a.results, cfg) == summary_csv(b.results, cfg) &&
                    report_json(a.results, cfg) == report_json(b.results, cfg) && a.replays == b.replays;
  int verified = 0;
  for (const auto &text : a.replays) verified += verify_replay(text).ok;
  std::string cli = "cli not checked";
  bool cli_ok = true;
  if (!cli_path.empty()) {
    int nonzero = 0, sampled = 0;
    for (std::size_t i = 0; i < a.replays.size(); i += 10, ++sampled) nonzero += run_cli_replay(a.replays[i]) != 0;
    cli_ok = nonzero == 0 && sampled > 0;
    cli = fmt("socnav replay exit 0 on %d/%d sampled logs", sampled - nonzero, sampled);
  }
  const int n = static_cast<int>(a.results.size());
  return {same && verified == n && cli_ok,
          fmt("%d episodes, reports %s across two runs (1 and 2 threads), %d/%d replays verify, %s, %.1f s", n,
              same ? "byte-identical" : "DIFFER", verified, n, cli.c_str(), seconds_since(t0))};
}

Verdict directional() {
  const auto t0 = Clock::now();
  BenchConfig cfg;
  cfg.seed = 1;
  cfg.modes = {CrowdMode::Uncooperative};
  cfg.combos = {*PlannerCombo::parse("ppp+scripted"), *PlannerCombo::parse("fixed+scripted"),
                *PlannerCombo::parse("astar+scripted")};
  const BenchOutput out = run_bench(cfg);
  auto metrics = [&](const std::string &name) {
    std::vector<EpisodeResult> sel;
    for (const auto &r : out.results) {
      if (r.combo.name() == name) sel.push_back(r);
    }
    return aggregate(sel);
  };
  const MetricsReport ppp = metrics("ppp+scripted"), fixed = metrics("fixed+scripted"),
                      astar = metrics("astar+scripted");
  const double t = seconds_since(t0);
  return {ppp.episodes >= 300 && ppp.co <= fixed.co - 3.0 && t < 600.0,
          fmt("%d uncooperative episodes per combo: CO ppp %.1f%%, fixed %.1f%% (need ppp <= fixed - 3pp, margin "
              "%.1f pp); astar %.1f%%; SR ppp %.1f%% fixed %.1f%%; %.1f s (limit 600 s)",
              ppp.episodes, ppp.co, fixed.co, fixed.co - ppp.co, astar.co, ppp.sr, fixed.sr, t)};
}

// ---------------------------------------------------------------- protocol

Verdict protocol_goldens() {
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(SOCNAV_GOLDEN_DIR)) {
    if (e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  auto cfg = std::make_shared<const ServiceConfig>();
  auto worlds = std::make_shared<WorldCache>(cfg->mapgen, cfg->episode);
  int messages = 0, mismatched = 0, replayed_bad = 0, obs = 0, obs_bad = 0;
  for (const auto &path : files) {
    std::ifstream in(path);
    Session session(worlds, cfg);
    std::string line, request;
    bool valid = true;
    while (std::getline(in, line)) {
      const char tag = line.empty() ? '?' : line[0];
      const std::string body = line.size() > 2 ? line.substr(2) : "";
      if (tag == '>' || tag == '!') {
        request = body;
        valid = tag == '>';
        if (valid) {
          mismatched += encode(decode_request(body)) != body;
        } else {
          try {
            decode_request(body);
            ++mismatched;
          } catch (const ProtocolError &) {
          }
        }
        ++messages;
      } else if (tag == '<') {
        const Response r = decode_response(body);
        mismatched += encode(r) != body;
        ++messages;
        replayed_bad += session.handle_line(request) != body;
        if (const auto *o = std::get_if<ObsResponse>(&r)) {
          ++obs;
          obs_bad += o->observation.flatten().size() != 20034u;
        } else if (const auto *s = std::get_if<StepResponse>(&r)) {
          ++obs;
          obs_bad += s->observation.flatten().size() != 20034u;
        }
      } else {
        ++mismatched;
      }
    }
  }
  const int n = static_cast<int>(files.size());
  return {n == 20 && mismatched == 0 && replayed_bad == 0 && obs_bad == 0 && obs > 0,
          fmt("%d transcripts, %d messages, %d round-trip mismatches, %d responses differ on replay, "
              "%d observations with %d of wrong length (expected 20034)",
              n, messages, mismatched, replayed_bad, obs, obs_bad)};
}

}  // namespace

int main(int argc, char **argv) {
  if (argc > 1) cli_path = argv[1];
  report("lp-oracle", lp_oracle);
  report("orca-safety", orca_safety);
  report("astar-equals-dijkstra", astar_dijkstra);
  report("gaussian-point-checks", gaussian_checks);
  report("reward-conformance", reward_conformance);
  report("episode-rules", episode_rules);
  report("determinism", determinism);
  report("directional-planner-effect", directional);
  report("protocol-goldens", protocol_goldens);
  std::printf("%d criteria failed\n", g_failed);
  return g_failed;
}
