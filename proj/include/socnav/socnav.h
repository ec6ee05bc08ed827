/*
 * socnav.h
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

/* C interface to the socnav engine. All functions are thread-safe unless
 * noted; strings returned through `char **` are owned by the caller and
 * released with socnav_string_free. */
#ifndef SOCNAV_SOCNAV_H
#define SOCNAV_SOCNAV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SOCNAV_API __declspec(dllexport)
#else
#define SOCNAV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum socnav_status {
  SOCNAV_OK = 0,
  SOCNAV_ERR_INVALID_ARGUMENT = 1,
  SOCNAV_ERR_IO = 2,
  SOCNAV_ERR_PARSE = 3,
  SOCNAV_ERR_OUT_OF_BOUNDS = 4,
  SOCNAV_ERR_INVALID_ENDPOINT = 5,
  SOCNAV_ERR_NO_PATH = 6,
  SOCNAV_ERR_INVALID_SCENARIO = 7,
  SOCNAV_ERR_CONTRACT = 8,
  SOCNAV_ERR_USAGE = 9,
  SOCNAV_ERR_DISCONNECTED = 10,
  /* Replay re-simulation differs from the log. */
  SOCNAV_ERR_DIVERGED = 11,
  SOCNAV_ERR_INTERNAL = 12
} socnav_status;

SOCNAV_API const char *socnav_version(void);
SOCNAV_API const char *socnav_status_name(socnav_status status);
/* Message of the last failure on the calling thread; empty after success. */
SOCNAV_API const char *socnav_last_error(void);
SOCNAV_API void socnav_string_free(char *s);

/* ---- configuration ------------------------------------------------------
 * One key/value store holding the bench, episode, dwa.*, mapgen.*,
 * scenario.* and follower.* keys. Unknown keys are rejected. */
typedef struct socnav_config socnav_config;

SOCNAV_API socnav_status socnav_config_create(socnav_config **out);
SOCNAV_API void socnav_config_destroy(socnav_config *config);
SOCNAV_API socnav_status socnav_config_set(socnav_config *config, const char *key, const char *value);
SOCNAV_API socnav_status socnav_config_get(const socnav_config *config, const char *key, char **value);
/* Applies a `key = value` file on top of the current values. */
SOCNAV_API socnav_status socnav_config_load(socnav_config *config, const char *path);
SOCNAV_API socnav_status socnav_config_dump(const socnav_config *config, char **text);
SOCNAV_API socnav_status socnav_config_validate(const socnav_config *config);

/* ---- benchmark ---------------------------------------------------------- */
typedef void (*socnav_progress_fn)(size_t done, size_t total, void *user);

/* Runs the sweep and writes episodes.csv, summary.csv, report.json and
 * summary.txt under the configured output directory. */
SOCNAV_API socnav_status socnav_bench_run(const socnav_config *config, socnav_progress_fn progress, void *user,
                                          char **summary);

/* ---- maps --------------------------------------------------------------- */
/* Writes `<stem>.pgm` and `<stem>.meta` for the generated map `seed`. */
SOCNAV_API socnav_status socnav_mapgen_write(const socnav_config *config, uint64_t seed, const char *stem);

/* ---- replay and rendering ----------------------------------------------
 * `map_path` may be NULL to use the map recorded in the log. */
SOCNAV_API socnav_status socnav_replay_verify(const char *log_text, const char *map_path, int *divergent_step,
                                              char **message);
SOCNAV_API socnav_status socnav_replay_costmap_dump(const char *log_text, const char *map_path, int step,
                                                    char **dump);
SOCNAV_API socnav_status socnav_render_replay(const char *log_text, const char *map_path, int scale,
                                              const char *png_path);
SOCNAV_API socnav_status socnav_render_costmap(const char *dump_text, int scale, const char *png_path);

/* ---- environment service ------------------------------------------------ */
typedef struct socnav_service socnav_service;
typedef struct socnav_session socnav_session;

SOCNAV_API socnav_status socnav_service_create(const socnav_config *config, const char *const *allowed_files,
                                               size_t n_allowed, socnav_service **out);
SOCNAV_API void socnav_service_destroy(socnav_service *service);
/* Serves a single session on stdin/stdout until close or EOF. */
SOCNAV_API socnav_status socnav_service_serve_stdio(socnav_service *service);
/* Binds the TCP endpoint; port 0 picks a free port. */
SOCNAV_API socnav_status socnav_service_listen(socnav_service *service, const char *host, int port,
                                               int *bound_port);
/* Accepts connections until socnav_service_stop. */
SOCNAV_API socnav_status socnav_service_run(socnav_service *service);
/* Async-signal-safe. */
SOCNAV_API void socnav_service_stop(socnav_service *service);

/* In-process session speaking the same JSON lines as the service. */
SOCNAV_API socnav_status socnav_session_create(socnav_service *service, socnav_session **out);
SOCNAV_API void socnav_session_destroy(socnav_session *session);
SOCNAV_API socnav_status socnav_session_handle(socnav_session *session, const char *request_line,
                                               char **response_line);

#ifdef __cplusplus
}
#endif

#endif /* SOCNAV_SOCNAV_H */
