/*
 * test_capi.c
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

/* Exercises the C interface from plain C. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "socnav/socnav.h"

static int failures = 0;

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                \
    }                                                            \
  } while (0)

int main(void) {
  socnav_config *cfg = NULL;
  CHECK(socnav_config_create(&cfg) == SOCNAV_OK);
  CHECK(socnav_config_set(cfg, "max_steps", "200") == SOCNAV_OK);

  char *value = NULL;
  CHECK(socnav_config_get(cfg, "max_steps", &value) == SOCNAV_OK);
  CHECK(value && strcmp(value, "200") == 0);
  socnav_string_free(value);

  CHECK(socnav_config_set(cfg, "no_such_key", "1") == SOCNAV_ERR_INVALID_ARGUMENT);
  CHECK(strstr(socnav_last_error(), "no_such_key") != NULL);
  CHECK(socnav_config_set(cfg, "combos", "warp+dwa") == SOCNAV_ERR_INVALID_ARGUMENT);
  CHECK(socnav_config_set(NULL, "max_steps", "1") == SOCNAV_ERR_INVALID_ARGUMENT);
  CHECK(socnav_config_validate(cfg) == SOCNAV_OK);
  CHECK(strcmp(socnav_last_error(), "") == 0);
  CHECK(strcmp(socnav_status_name(SOCNAV_ERR_DIVERGED), "diverged") == 0);

  socnav_service *svc = NULL;
  CHECK(socnav_service_create(cfg, NULL, 0, &svc) == SOCNAV_OK);
  socnav_session *session = NULL;
  CHECK(socnav_session_create(svc, &session) == SOCNAV_OK);

  char *response = NULL;
  CHECK(socnav_session_handle(session, "{\"type\":\"step\",\"action\":[0,0]}", &response) == SOCNAV_OK);
  CHECK(response && strstr(response, "no_episode") != NULL);
  socnav_string_free(response);

  CHECK(socnav_session_handle(session,
                              "{\"type\":\"reset\",\"map\":\"gen:2\",\"seed\":5,\"n_peds\":3,"
                              "\"mode\":\"cooperative\",\"global_planner\":\"ppp\"}",
                              &response) == SOCNAV_OK);
  CHECK(response && strncmp(response, "{\"type\":\"obs\",\"version\":1,", 26) == 0);
  socnav_string_free(response);

  CHECK(socnav_session_handle(session, "{\"type\":\"step\",\"action\":[1,0]}", &response) == SOCNAV_OK);
  CHECK(response && strstr(response, "\"step_index\":1") != NULL);
  socnav_string_free(response);

  int step = 0;
  char *message = NULL;
  CHECK(socnav_replay_verify("not a replay", NULL, &step, &message) == SOCNAV_ERR_PARSE);
  CHECK(strstr(socnav_last_error(), "replay line 1") != NULL);

  socnav_session_destroy(session);
  socnav_service_destroy(svc);
  socnav_config_destroy(cfg);

  if (failures) {
    fprintf(stderr, "%d checks failed\n", failures);
    return 1;
  }
  printf("capi ok\n");
  return 0;
}
