/*
 * protocol.cpp
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

#include "socnav/protocol.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

namespace socnav {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void parse_fail(const std::string &what) { throw ProtocolError(protocol_code::kParse, what); }

const json &field(const json &j, const char *name) {
  const auto it = j.find(name);
  if (it == j.end()) parse_fail(std::string("missing field '") + name + "'");
  return *it;
}

double number(const json &j, const char *name) {
  const json &v = field(j, name);
  if (!v.is_number()) parse_fail(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_int(const json &j, const char *name) {
  const json &v = field(j, name);
  if (!v.is_number_unsigned()) parse_fail(std::string("field '") + name + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

int integer(const json &j, const char *name) {
  const json &v = field(j, name);
  if (!v.is_number_integer()) parse_fail(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

std::string text(const json &j, const char *name) {
  const json &v = field(j, name);
  if (!v.is_string()) parse_fail(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

bool boolean(const json &j, const char *name) {
  const json &v = field(j, name);
  if (!v.is_boolean()) parse_fail(std::string("field '") + name + "' must be a boolean");
  return v.get<bool>();
}

template <std::size_t N>
std::array<double, N> numbers(const json &j, const char *name) {
  const json &v = field(j, name);
  if (!v.is_array() || v.size() != N) {
    parse_fail(std::string("field '") + name + "' must be an array of " + std::to_string(N) + " numbers");
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!v[i].is_number()) parse_fail(std::string("field '") + name + "' must contain only numbers");
    out[i] = v[i].get<double>();
  }
  return out;
}

json map_json(const LocalMap &m) {
  json a = json::array();
  for (std::uint8_t c : m.cells) a.push_back(static_cast<int>(c));
  return a;
}

LocalMap map_from(const json &j, const char *name) {
  const json &v = field(j, name);
  const std::size_t n = static_cast<std::size_t>(LocalMap::kSize * LocalMap::kSize);
  if (!v.is_array() || v.size() != n) parse_fail(std::string("field '") + name + "' must hold 10000 cells");
  LocalMap m;
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i].is_number_unsigned() || v[i].get<std::uint64_t>() > 1) {
      parse_fail(std::string("field '") + name + "' cells must be 0 or 1");
    }
    m.cells[i] = static_cast<std::uint8_t>(v[i].get<int>());
  }
  return m;
}

json observation_json(const Observation &o) {
  json j;
  j["goal"] = o.goal;
  j["ego_map"] = map_json(o.ego_map);
  j["ped_map"] = map_json(o.ped_map);
  j["prev_action"] = o.prev_action;
  j["waypoints"] = o.waypoints;
  j["pedestrians"] = o.pedestrians;
  j["ped_mask"] = o.ped_mask;
  return j;
}

Observation observation_from(const json &j) {
  const json &o = field(j, "observation");
  if (!o.is_object()) parse_fail("field 'observation' must be an object");
  Observation out;
  out.goal = numbers<2>(o, "goal");
  out.ego_map = map_from(o, "ego_map");
  out.ped_map = map_from(o, "ped_map");
  out.prev_action = numbers<2>(o, "prev_action");
  out.waypoints = numbers<2 * Observation::kWaypointSlots>(o, "waypoints");
  out.pedestrians = numbers<3 * Observation::kPedestrianSlots>(o, "pedestrians");
  out.ped_mask = numbers<Observation::kPedestrianSlots>(o, "ped_mask");
  return out;
}

json reward_json(const RewardBreakdown &r) {
  return json{{"goal", r.goal},         {"ped_collision", r.ped_collision}, {"wall_collision", r.wall_collision},
              {"waypoint", r.waypoint}, {"timestep", r.timestep},           {"wp_distance", r.wp_distance},
              {"ped_avoid", r.ped_avoid}, {"wp_orient", r.wp_orient},       {"total", r.total}};
}

RewardBreakdown reward_from(const json &j) {
  const json &r = field(j, "reward");
  if (!r.is_object()) parse_fail("field 'reward' must be an object");
  RewardBreakdown out;
  out.goal = number(r, "goal");
  out.ped_collision = number(r, "ped_collision");
  out.wall_collision = number(r, "wall_collision");
  out.waypoint = number(r, "waypoint");
  out.timestep = number(r, "timestep");
  out.wp_distance = number(r, "wp_distance");
  out.ped_avoid = number(r, "ped_avoid");
  out.wp_orient = number(r, "wp_orient");
  out.total = number(r, "total");
  return out;
}

json parse_object(const std::string &line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) parse_fail("invalid JSON");
  if (!j.is_object()) parse_fail("message must be a JSON object");
  return j;
}

template <class T, class Parse>
T named(const json &j, const char *name, Parse parse, const char *valid) {
  const std::string s = text(j, name);
  const auto v = parse(s);
  if (!v) parse_fail(std::string("field '") + name + "' must be " + valid);
  return *v;
}

}  // namespace

std::string encode(const Request &request) {
  json j;
  if (const auto *r = std::get_if<ResetRequest>(&request)) {
    j["type"] = "reset";
    j["map"] = r->map;
    j["seed"] = r->seed;
    j["n_peds"] = r->n_peds;
    j["mode"] = crowd_mode_name(r->mode);
    j["global_planner"] = global_planner_name(r->global_planner);
  } else if (const auto *s = std::get_if<StepRequest>(&request)) {
    j["type"] = "step";
    j["action"] = s->action;
  } else {
    j["type"] = "close";
  }
  return j.dump();
}

std::string encode(const Response &response) {
  json j;
  if (const auto *o = std::get_if<ObsResponse>(&response)) {
    j["type"] = "obs";
    j["version"] = o->version;
    j["step_index"] = o->step_index;
    j["observation"] = observation_json(o->observation);
  } else if (const auto *s = std::get_if<StepResponse>(&response)) {
    j["type"] = "step_result";
    j["step_index"] = s->step_index;
    j["outcome"] = outcome_name(s->outcome);
    j["reward"] = reward_json(s->reward);
    j["info"] = json{{"applied", std::array<double, 2>{s->applied.v, s->applied.omega}},
                     {"wall_hit", s->wall_hit},
                     {"random_action", s->random_action},
                     {"replan", replan_event_name(s->replan)}};
    j["observation"] = observation_json(s->observation);
  } else if (std::holds_alternative<ClosedResponse>(response)) {
    j["type"] = "closed";
  } else {
    const auto &e = std::get<ErrorResponse>(response);
    j["type"] = "error";
    j["code"] = e.code;
    j["message"] = e.message;
  }
  return j.dump();
}

Request decode_request(const std::string &line) {
  const json j = parse_object(line);
  const std::string type = text(j, "type");
  if (type == "reset") {
    ResetRequest r;
    r.map = text(j, "map");
    r.seed = unsigned_int(j, "seed");
    r.n_peds = unsigned_int(j, "n_peds");
    r.mode = named<CrowdMode>(j, "mode", parse_crowd_mode, "cooperative or uncooperative");
    r.global_planner = named<GlobalPlannerKind>(j, "global_planner", parse_global_planner, "ppp, astar or fixed");
    return r;
  }
  if (type == "step") return StepRequest{numbers<2>(j, "action")};
  if (type == "close") return CloseRequest{};
  parse_fail("field 'type' must be reset, step or close");
}

Response decode_response(const std::string &line) {
  const json j = parse_object(line);
  const std::string type = text(j, "type");
  if (type == "obs") {
    ObsResponse o;
    o.version = integer(j, "version");
    o.step_index = integer(j, "step_index");
    o.observation = observation_from(j);
    return o;
  }
  if (type == "step_result") {
    StepResponse s;
    s.step_index = integer(j, "step_index");
    s.outcome = named<Outcome>(j, "outcome", parse_outcome, "an outcome name");
    s.reward = reward_from(j);
    const json &info = field(j, "info");
    if (!info.is_object()) parse_fail("field 'info' must be an object");
    const auto applied = numbers<2>(info, "applied");
    s.applied = {applied[0], applied[1]};
    s.wall_hit = boolean(info, "wall_hit");
    s.random_action = boolean(info, "random_action");
    s.replan = named<ReplanEvent>(info, "replan", parse_replan_event, "a replan event name");
    s.observation = observation_from(j);
    return s;
  }
  if (type == "closed") return ClosedResponse{};
  if (type == "error") return ErrorResponse{text(j, "code"), text(j, "message")};
  parse_fail("field 'type' must be obs, step_result, closed or error");
}

void validate_action(const std::array<double, 2> &action) {
  for (double a : action) {
    if (!std::isfinite(a) || a < -1.0 || a > 1.0) {
      throw ProtocolError(protocol_code::kInvalidAction, "action components must lie in [-1, 1]");
    }
  }
}

Action denormalize_action(const std::array<double, 2> &action, double v_max, double omega_max) {
  return {action[0] * v_max, action[1] * omega_max};
}

}  // namespace socnav
