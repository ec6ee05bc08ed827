/*
 * protocol.hpp
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

#ifndef SOCNAV_PROTOCOL_HPP
#define SOCNAV_PROTOCOL_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "socnav/episode.hpp"

namespace socnav {

inline constexpr int kProtocolVersion = 1;

/// Error codes carried in `{"type":"error"}` responses.
namespace protocol_code {
inline constexpr const char *kParse = "parse";
inline constexpr const char *kNoEpisode = "no_episode";
inline constexpr const char *kEpisodeOver = "episode_over";
inline constexpr const char *kInvalidAction = "invalid_action";
inline constexpr const char *kInvalidMap = "invalid_map";
inline constexpr const char *kInvalidScenario = "invalid_scenario";
inline constexpr const char *kInternal = "internal";
}  // namespace protocol_code

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string code, const std::string &message) : std::runtime_error(message), code_(std::move(code)) {}
  const std::string &code() const { return code_; }

 private:
  std::string code_;
};

struct ResetRequest {
  std::string map;
  std::uint64_t seed = 0;
  std::uint64_t n_peds = 0;
  CrowdMode mode = CrowdMode::Cooperative;
  GlobalPlannerKind global_planner = GlobalPlannerKind::PPP;
  bool operator==(const ResetRequest &) const = default;
};

/// Normalized action: v and omega in [-1, 1], scaled by the velocity caps server-side.
struct StepRequest {
  std::array<double, 2> action{};
  bool operator==(const StepRequest &) const = default;
};

struct CloseRequest {
  bool operator==(const CloseRequest &) const = default;
};

using Request = std::variant<ResetRequest, StepRequest, CloseRequest>;

struct ObsResponse {
  int version = kProtocolVersion;
  int step_index = 0;
  Observation observation;
  bool operator==(const ObsResponse &) const = default;
};

struct StepResponse {
  int step_index = 0;
  Outcome outcome = Outcome::Running;
  RewardBreakdown reward;
  Action applied;
  bool wall_hit = false;
  bool random_action = false;
  ReplanEvent replan = ReplanEvent::None;
  Observation observation;
  bool operator==(const StepResponse &) const = default;
};

struct ClosedResponse {
  bool operator==(const ClosedResponse &) const = default;
};

struct ErrorResponse {
  std::string code;
  std::string message;
  bool operator==(const ErrorResponse &) const = default;
};

using Response = std::variant<ObsResponse, StepResponse, ClosedResponse, ErrorResponse>;

/// One JSON object, no trailing newline.
std::string encode(const Request &request);
std::string encode(const Response &response);

/// Throws ProtocolError("parse") naming the offending field.
Request decode_request(const std::string &line);
Response decode_response(const std::string &line);

/// Checks the range of a normalized action; throws ProtocolError("invalid_action").
void validate_action(const std::array<double, 2> &action);
Action denormalize_action(const std::array<double, 2> &action, double v_max, double omega_max);

}  // namespace socnav

#endif  // SOCNAV_PROTOCOL_HPP
