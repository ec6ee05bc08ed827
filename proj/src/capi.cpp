/*
 * capi.cpp
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

#include "socnav/socnav.h"

#include <atomic>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "socnav/bench.hpp"
#include "socnav/error.hpp"
#include "socnav/protocol.hpp"
#include "socnav/render.hpp"
#include "socnav/replay.hpp"
#include "socnav/scenario.hpp"
#include "socnav/service.hpp"

struct socnav_config {
  socnav::BenchConfig value;
};

struct socnav_service {
  std::shared_ptr<const socnav::ServiceConfig> config;
  std::shared_ptr<socnav::WorldCache> worlds;
  std::unique_ptr<socnav::TcpService> tcp;
  std::atomic<bool> stop{false};
};

struct socnav_session {
  explicit socnav_session(socnav::Session s) : session(std::move(s)) {}
  socnav::Session session;
};

namespace {

thread_local std::string g_last_error;

socnav_status status_for(socnav::ErrorCode code) {
  using socnav::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return SOCNAV_ERR_INVALID_ARGUMENT;
    case ErrorCode::Io: return SOCNAV_ERR_IO;
    case ErrorCode::Parse: return SOCNAV_ERR_PARSE;
    case ErrorCode::OutOfBounds: return SOCNAV_ERR_OUT_OF_BOUNDS;
    case ErrorCode::InvalidEndpoint: return SOCNAV_ERR_INVALID_ENDPOINT;
    case ErrorCode::NoPath: return SOCNAV_ERR_NO_PATH;
    case ErrorCode::InvalidScenario: return SOCNAV_ERR_INVALID_SCENARIO;
    case ErrorCode::ContractViolation: return SOCNAV_ERR_CONTRACT;
    case ErrorCode::Usage: return SOCNAV_ERR_USAGE;
    case ErrorCode::Disconnected: return SOCNAV_ERR_DISCONNECTED;
  }
  return SOCNAV_ERR_INTERNAL;
}

socnav_status fail(socnav_status s, const std::string &message) {
  g_last_error = message;
  return s;
}

template <class F>
socnav_status guarded(F &&body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const socnav::Error &e) {
    return fail(status_for(e.code()), e.what());
  } catch (const socnav::ProtocolError &e) {
    return fail(SOCNAV_ERR_PARSE, e.what());
  } catch (const std::exception &e) {
    return fail(SOCNAV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SOCNAV_ERR_INTERNAL, "unknown failure");
  }
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void *p, const char *what) {
  if (!p) throw socnav::Error(socnav::ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw socnav::Error(socnav::ErrorCode::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

socnav::OccupancyGrid map_for(const socnav::ReplayLog &log, const char *map_path) {
  return map_path ? socnav::load_map(map_path) : socnav::replay_map(log);
}

}  // namespace

extern "C" {

const char *socnav_version(void) { return "1.0.0"; }

const char *socnav_status_name(socnav_status status) {
  switch (status) {
    case SOCNAV_OK: return "ok";
    case SOCNAV_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SOCNAV_ERR_IO: return "io";
    case SOCNAV_ERR_PARSE: return "parse";
    case SOCNAV_ERR_OUT_OF_BOUNDS: return "out_of_bounds";
    case SOCNAV_ERR_INVALID_ENDPOINT: return "invalid_endpoint";
    case SOCNAV_ERR_NO_PATH: return "no_path";
    case SOCNAV_ERR_INVALID_SCENARIO: return "invalid_scenario";
    case SOCNAV_ERR_CONTRACT: return "contract_violation";
    case SOCNAV_ERR_USAGE: return "usage";
    case SOCNAV_ERR_DISCONNECTED: return "disconnected";
    case SOCNAV_ERR_DIVERGED: return "diverged";
    case SOCNAV_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char *socnav_last_error(void) { return g_last_error.c_str(); }

void socnav_string_free(char *s) { std::free(s); }

socnav_status socnav_config_create(socnav_config **out) {
  return guarded([&] {
    require(out, "out");
    *out = new socnav_config();
    return SOCNAV_OK;
  });
}

void socnav_config_destroy(socnav_config *config) { delete config; }

socnav_status socnav_config_set(socnav_config *config, const char *key, const char *value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    socnav::bench_registry().set(config->value, key, value);
    return SOCNAV_OK;
  });
}

socnav_status socnav_config_get(const socnav_config *config, const char *key, char **value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    *value = dup_string(socnav::bench_registry().get(config->value, key));
    return SOCNAV_OK;
  });
}

socnav_status socnav_config_load(socnav_config *config, const char *path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    socnav::BenchConfig next = config->value;
    try {
      socnav::bench_registry().apply(next, socnav::parse_key_values(read_file(path)));
    } catch (const socnav::Error &e) {
      throw socnav::Error(e.code(), std::string(path) + ": " + e.what());
    }
    config->value = std::move(next);
    return SOCNAV_OK;
  });
}

socnav_status socnav_config_dump(const socnav_config *config, char **text) {
  return guarded([&] {
    require(config, "config");
    require(text, "text");
    *text = dup_string(socnav::format_key_values(socnav::bench_registry().items(config->value)));
    return SOCNAV_OK;
  });
}

socnav_status socnav_config_validate(const socnav_config *config) {
  return guarded([&] {
    require(config, "config");
    config->value.validate();
    return SOCNAV_OK;
  });
}

socnav_status socnav_bench_run(const socnav_config *config, socnav_progress_fn progress, void *user,
                               char **summary) {
  return guarded([&] {
    require(config, "config");
    std::function<void(std::size_t, std::size_t)> cb;
    if (progress) cb = [&](std::size_t d, std::size_t t) { progress(d, t, user); };
    const socnav::BenchOutput out = socnav::run_bench(config->value, cb);
    socnav::write_bench_outputs(out, config->value);
    if (summary) *summary = dup_string(socnav::summary_table(out.results, config->value));
    return SOCNAV_OK;
  });
}

socnav_status socnav_mapgen_write(const socnav_config *config, uint64_t seed, const char *stem) {
  return guarded([&] {
    require(config, "config");
    require(stem, "stem");
    config->value.mapgen.validate();
    socnav::save_map(socnav::generate_indoor_map(seed, config->value.mapgen), stem);
    return SOCNAV_OK;
  });
}

socnav_status socnav_replay_verify(const char *log_text, const char *map_path, int *divergent_step,
                                   char **message) {
  return guarded([&] {
    require(log_text, "log_text");
    const socnav::ReplayLog log = socnav::parse_replay(log_text);
    const socnav::ReplayVerdict v = socnav::verify_replay(log_text, map_for(log, map_path));
    if (divergent_step) *divergent_step = v.divergent_step.value_or(-1);
    if (message) *message = dup_string(v.message);
    return v.ok ? SOCNAV_OK : fail(SOCNAV_ERR_DIVERGED, v.message);
  });
}

socnav_status socnav_replay_costmap_dump(const char *log_text, const char *map_path, int step, char **dump) {
  return guarded([&] {
    require(log_text, "log_text");
    require(dump, "dump");
    const socnav::ReplayLog log = socnav::parse_replay(log_text);
    *dump = dup_string(socnav::costmap_dump_at(log, map_for(log, map_path), step));
    return SOCNAV_OK;
  });
}

socnav_status socnav_render_replay(const char *log_text, const char *map_path, int scale, const char *png_path) {
  return guarded([&] {
    require(log_text, "log_text");
    require(png_path, "png_path");
    const socnav::ReplayLog log = socnav::parse_replay(log_text);
    socnav::RenderOptions opt;
    opt.scale = scale;
    socnav::write_png(socnav::render_replay(log, map_for(log, map_path), opt), png_path);
    return SOCNAV_OK;
  });
}

socnav_status socnav_render_costmap(const char *dump_text, int scale, const char *png_path) {
  return guarded([&] {
    require(dump_text, "dump_text");
    require(png_path, "png_path");
    socnav::RenderOptions opt;
    opt.scale = scale;
    socnav::write_png(socnav::render_costmap(socnav::parse_costmap_dump(dump_text), opt), png_path);
    return SOCNAV_OK;
  });
}

socnav_status socnav_service_create(const socnav_config *config, const char *const *allowed_files,
                                    size_t n_allowed, socnav_service **out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    if (n_allowed > 0) require(allowed_files, "allowed_files");
    const socnav::BenchConfig &b = config->value;
    b.episode.validate();
    b.mapgen.validate();
    b.scenario.validate();
    auto sc = std::make_shared<socnav::ServiceConfig>();
    sc->episode = b.episode;
    sc->mapgen = b.mapgen;
    sc->scenario = b.scenario;
    for (std::size_t i = 0; i < n_allowed; ++i) {
      require(allowed_files[i], "allowed_files entry");
      sc->allowed_files.emplace_back(allowed_files[i]);
    }
    auto svc = std::make_unique<socnav_service>();
    svc->worlds = std::make_shared<socnav::WorldCache>(sc->mapgen, sc->episode);
    svc->config = std::move(sc);
    *out = svc.release();
    return SOCNAV_OK;
  });
}

void socnav_service_destroy(socnav_service *service) { delete service; }

socnav_status socnav_service_serve_stdio(socnav_service *service) {
  return guarded([&] {
    require(service, "service");
    socnav::serve_stream(std::cin, std::cout, service->worlds, service->config);
    return SOCNAV_OK;
  });
}

socnav_status socnav_service_listen(socnav_service *service, const char *host, int port, int *bound_port) {
  return guarded([&] {
    require(service, "service");
    require(host, "host");
    if (service->tcp) throw socnav::Error(socnav::ErrorCode::Usage, "service is already listening");
    service->tcp = std::make_unique<socnav::TcpService>(host, port, service->worlds, service->config);
    if (bound_port) *bound_port = service->tcp->port();
    return SOCNAV_OK;
  });
}

socnav_status socnav_service_run(socnav_service *service) {
  return guarded([&] {
    require(service, "service");
    if (!service->tcp) throw socnav::Error(socnav::ErrorCode::Usage, "call socnav_service_listen first");
    service->tcp->run(service->stop);
    return SOCNAV_OK;
  });
}

void socnav_service_stop(socnav_service *service) {
  if (service) service->stop.store(true);
}

socnav_status socnav_session_create(socnav_service *service, socnav_session **out) {
  return guarded([&] {
    require(service, "service");
    require(out, "out");
    *out = new socnav_session(socnav::Session(service->worlds, service->config));
    return SOCNAV_OK;
  });
}

void socnav_session_destroy(socnav_session *session) { delete session; }

socnav_status socnav_session_handle(socnav_session *session, const char *request_line, char **response_line) {
  return guarded([&] {
    require(session, "session");
    require(request_line, "request_line");
    require(response_line, "response_line");
    *response_line = dup_string(session->session.handle_line(request_line));
    return SOCNAV_OK;
  });
}

}  // extern "C"
