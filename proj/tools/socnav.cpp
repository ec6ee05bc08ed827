/*
 * socnav.cpp
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

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "socnav/socnav.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

socnav_service *g_service = nullptr;

void on_signal(int) { socnav_service_stop(g_service); }

struct Owned {
  char *s = nullptr;
  ~Owned() { socnav_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

struct Config {
  socnav_config *handle = nullptr;
  Config() { socnav_config_create(&handle); }
  ~Config() { socnav_config_destroy(handle); }
};

int report(socnav_status s, int exit_code) {
  std::fprintf(stderr, "socnav: %s\n", socnav_last_error());
  (void)s;
  return exit_code;
}

bool is_usage(socnav_status s) {
  return s == SOCNAV_ERR_INVALID_ARGUMENT || s == SOCNAV_ERR_PARSE || s == SOCNAV_ERR_USAGE;
}

/// Config file first, then --set overrides, then the dedicated flags.
struct ConfigArgs {
  std::string file;
  std::vector<std::string> sets;

  void attach(CLI::App *app) {
    app->add_option("-c,--config", file, "key = value configuration file")->check(CLI::ExistingFile);
    app->add_option("-s,--set", sets, "override one key (key=value); repeatable");
  }

  /// Returns an exit code, or -1 on success.
  int apply(Config &cfg, const std::vector<std::pair<std::string, std::string>> &flags) const {
    if (!file.empty()) {
      if (const socnav_status s = socnav_config_load(cfg.handle, file.c_str()); s != SOCNAV_OK) {
        return report(s, is_usage(s) ? kExitUsage : kExitFailure);
      }
    }
    std::vector<std::pair<std::string, std::string>> items;
    for (const std::string &kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::fprintf(stderr, "socnav: --set expects key=value, got '%s'\n", kv.c_str());
        return kExitUsage;
      }
      auto trim = [](std::string t) {
        const auto b = t.find_first_not_of(" \t");
        const auto e = t.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
      };
      items.emplace_back(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    items.insert(items.end(), flags.begin(), flags.end());
    for (const auto &[k, v] : items) {
      if (const socnav_status s = socnav_config_set(cfg.handle, k.c_str(), v.c_str()); s != SOCNAV_OK) {
        return report(s, kExitUsage);
      }
    }
    return -1;
  }
};

bool read_text(const std::string &path, std::string &out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "socnav: cannot open %s\n", path.c_str());
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

void progress(size_t done, size_t total, void *user) {
  auto *last = static_cast<size_t *>(user);
  const size_t pct = total ? done * 100 / total : 100;
  if (pct / 5 != *last / 5 || done == total) {
    std::fprintf(stderr, "\rbench: %zu/%zu episodes (%zu%%)", done, total, pct);
    if (done == total) std::fputc('\n', stderr);
    *last = pct;
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Indoor social navigation benchmark engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", socnav_version());

  // bench
  CLI::App *bench = app.add_subcommand("bench", "run planner combos over generated or loaded maps");
  ConfigArgs bench_cfg;
  bench_cfg.attach(bench);
  std::string bench_out, bench_maps, bench_combos, bench_modes, bench_peds;
  long long bench_seed = -1;
  int bench_episodes = 0, bench_threads = -1;
  bool bench_replays = false, bench_quiet = false, bench_print_config = false;
  bench->add_option("-o,--output", bench_out, "output directory");
  bench->add_option("--seed", bench_seed, "master seed")->check(CLI::NonNegativeNumber);
  bench->add_option("--maps", bench_maps, "comma-separated map references (gen:<seed> or file:<path>)");
  bench->add_option("--episodes", bench_episodes, "episodes per map")->check(CLI::PositiveNumber);
  bench->add_option("--combos", bench_combos, "comma-separated <global>+<local> planner combos");
  bench->add_option("--modes", bench_modes, "comma-separated crowd modes");
  bench->add_option("--peds", bench_peds, "comma-separated pedestrian counts");
  bench->add_option("--threads", bench_threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  bench->add_flag("--replays", bench_replays, "write a replay log per episode");
  bench->add_flag("-q,--quiet", bench_quiet, "no progress output");
  bench->add_flag("--print-config", bench_print_config, "print the effective configuration and exit");

  // serve
  CLI::App *serve = app.add_subcommand("serve", "serve reset/step episodes over TCP or stdio");
  ConfigArgs serve_cfg;
  serve_cfg.attach(serve);
  std::string serve_tcp;
  bool serve_stdio = false;
  std::vector<std::string> serve_allow;
  auto *tcp_opt = serve->add_option("--tcp", serve_tcp, "listen on host:port (port 0 picks one)");
  auto *stdio_opt = serve->add_flag("--stdio", serve_stdio, "serve one session on stdin/stdout");
  tcp_opt->excludes(stdio_opt);
  serve->add_option("--allow-file", serve_allow, "map image clients may load as file:<path>; repeatable");

  // render
  CLI::App *render = app.add_subcommand("render", "render a replay log or costmap dump to PNG");
  std::string render_replay, render_costmap, render_map, render_out, render_dump;
  int render_scale = 4, render_step = -1;
  auto *rr = render->add_option("--replay", render_replay, "replay log")->check(CLI::ExistingFile);
  auto *rc = render->add_option("--costmap", render_costmap, "costmap dump")->check(CLI::ExistingFile);
  rr->excludes(rc);
  render->add_option("--map", render_map, "map image overriding the log's map reference")->check(CLI::ExistingFile);
  render->add_option("--costmap-at", render_step, "render the inflated costmap at this step of the replay")
      ->check(CLI::NonNegativeNumber);
  render->add_option("--dump", render_dump, "also write the costmap dump used for --costmap-at");
  render->add_option("-o,--output", render_out, "PNG path")->required();
  render->add_option("--scale", render_scale, "pixels per cell")->check(CLI::PositiveNumber);

  // mapgen
  CLI::App *mapgen = app.add_subcommand("mapgen", "generate an indoor map as PGM plus metadata");
  ConfigArgs mapgen_cfg;
  mapgen_cfg.attach(mapgen);
  unsigned long long mapgen_seed = 0;
  std::string mapgen_out;
  mapgen->add_option("--seed", mapgen_seed, "generator seed")->required();
  mapgen->add_option("-o,--output", mapgen_out, "output stem (writes <stem>.pgm and <stem>.meta)")->required();

  // replay
  CLI::App *replay = app.add_subcommand("replay", "re-simulate a replay log and verify it byte for byte");
  std::string replay_log, replay_map;
  replay->add_option("log", replay_log, "replay log")->required()->check(CLI::ExistingFile);
  replay->add_option("--map", replay_map, "map image overriding the log's map reference")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (bench->parsed()) {
    Config cfg;
    std::vector<std::pair<std::string, std::string>> flags;
    if (!bench_out.empty()) flags.emplace_back("output", bench_out);
    if (bench_seed >= 0) flags.emplace_back("seed", std::to_string(bench_seed));
    if (!bench_maps.empty()) flags.emplace_back("maps", bench_maps);
    if (bench_episodes > 0) flags.emplace_back("episodes_per_map", std::to_string(bench_episodes));
    if (!bench_combos.empty()) flags.emplace_back("combos", bench_combos);
    if (!bench_modes.empty()) flags.emplace_back("modes", bench_modes);
    if (!bench_peds.empty()) flags.emplace_back("ped_counts", bench_peds);
    if (bench_threads >= 0) flags.emplace_back("threads", std::to_string(bench_threads));
    if (bench_replays) flags.emplace_back("replays", "true");
    if (const int rc = bench_cfg.apply(cfg, flags); rc >= 0) return rc;
    if (const socnav_status s = socnav_config_validate(cfg.handle); s != SOCNAV_OK) return report(s, kExitUsage);
    if (bench_print_config) {
      Owned text;
      socnav_config_dump(cfg.handle, &text.s);
      std::fputs(text.str().c_str(), stdout);
      return kExitOk;
    }
    size_t last = 0;
    Owned summary;
    const socnav_status s =
        socnav_bench_run(cfg.handle, bench_quiet ? nullptr : progress, &last, &summary.s);
    if (s != SOCNAV_OK) return report(s, is_usage(s) ? kExitUsage : kExitFailure);
    std::fputs(summary.str().c_str(), stdout);
    return kExitOk;
  }

  if (serve->parsed()) {
    if (serve_tcp.empty() && !serve_stdio) {
      std::fprintf(stderr, "socnav: serve needs --tcp host:port or --stdio\n");
      return kExitUsage;
    }
    Config cfg;
    if (const int rc = serve_cfg.apply(cfg, {}); rc >= 0) return rc;
    std::vector<const char *> allow;
    for (const std::string &a : serve_allow) allow.push_back(a.c_str());
    socnav_service *svc = nullptr;
    if (const socnav_status s = socnav_service_create(cfg.handle, allow.data(), allow.size(), &svc); s != SOCNAV_OK) {
      return report(s, kExitUsage);
    }
    int rc = kExitOk;
    if (serve_stdio) {
      if (const socnav_status s = socnav_service_serve_stdio(svc); s != SOCNAV_OK) rc = report(s, kExitFailure);
    } else {
      const auto colon = serve_tcp.rfind(':');
      int port = -1;
      if (colon != std::string::npos) {
        try {
          port = std::stoi(serve_tcp.substr(colon + 1));
        } catch (const std::exception &) {
          port = -1;
        }
      }
      if (colon == std::string::npos || port < 0 || port > 65535) {
        std::fprintf(stderr, "socnav: --tcp expects host:port, got '%s'\n", serve_tcp.c_str());
        socnav_service_destroy(svc);
        return kExitUsage;
      }
      int bound = 0;
      const std::string host = serve_tcp.substr(0, colon);
      if (const socnav_status s = socnav_service_listen(svc, host.c_str(), port, &bound); s != SOCNAV_OK) {
        socnav_service_destroy(svc);
        return report(s, kExitFailure);
      }
      g_service = svc;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::fprintf(stderr, "listening on %s:%d\n", host.c_str(), bound);
      std::fflush(stderr);
      if (const socnav_status s = socnav_service_run(svc); s != SOCNAV_OK) rc = report(s, kExitFailure);
      g_service = nullptr;
    }
    socnav_service_destroy(svc);
    return rc;
  }

  if (render->parsed()) {
    const char *map = render_map.empty() ? nullptr : render_map.c_str();
    if (!render_costmap.empty()) {
      std::string text;
      if (!read_text(render_costmap, text)) return kExitFailure;
      const socnav_status s = socnav_render_costmap(text.c_str(), render_scale, render_out.c_str());
      return s == SOCNAV_OK ? kExitOk : report(s, kExitFailure);
    }
    if (render_replay.empty()) {
      std::fprintf(stderr, "socnav: render needs --replay or --costmap\n");
      return kExitUsage;
    }
    std::string log;
    if (!read_text(render_replay, log)) return kExitFailure;
    if (render_step >= 0) {
      Owned dump;
      if (const socnav_status s = socnav_replay_costmap_dump(log.c_str(), map, render_step, &dump.s); s != SOCNAV_OK) {
        return report(s, s == SOCNAV_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure);
      }
      if (!render_dump.empty()) {
        std::ofstream f(render_dump, std::ios::binary);
        f << dump.str();
        if (!f) {
          std::fprintf(stderr, "socnav: cannot write %s\n", render_dump.c_str());
          return kExitFailure;
        }
      }
      const socnav_status s = socnav_render_costmap(dump.s, render_scale, render_out.c_str());
      return s == SOCNAV_OK ? kExitOk : report(s, kExitFailure);
    }
    const socnav_status s = socnav_render_replay(log.c_str(), map, render_scale, render_out.c_str());
    return s == SOCNAV_OK ? kExitOk : report(s, kExitFailure);
  }

  if (mapgen->parsed()) {
    Config cfg;
    if (const int rc = mapgen_cfg.apply(cfg, {}); rc >= 0) return rc;
    const socnav_status s = socnav_mapgen_write(cfg.handle, mapgen_seed, mapgen_out.c_str());
    if (s != SOCNAV_OK) return report(s, is_usage(s) ? kExitUsage : kExitFailure);
    std::printf("wrote %s.pgm and %s.meta\n", mapgen_out.c_str(), mapgen_out.c_str());
    return kExitOk;
  }

  if (replay->parsed()) {
    std::string log;
    if (!read_text(replay_log, log)) return kExitFailure;
    int step = -1;
    Owned message;
    const socnav_status s =
        socnav_replay_verify(log.c_str(), replay_map.empty() ? nullptr : replay_map.c_str(), &step, &message.s);
    if (s == SOCNAV_OK) {
      std::printf("%s\n", message.str().c_str());
      return kExitOk;
    }
    if (s == SOCNAV_ERR_DIVERGED) {
      std::printf("diverged: %s\n", message.str().c_str());
      return kExitFailure;
    }
    return report(s, kExitFailure);
  }
  return kExitUsage;
}
