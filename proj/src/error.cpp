/*
 * error.cpp
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

#include "socnav/error.hpp"

namespace socnav {

const char *error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Io: return "io";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::OutOfBounds: return "out_of_bounds";
    case ErrorCode::InvalidEndpoint: return "invalid_endpoint";
    case ErrorCode::NoPath: return "no_path";
    case ErrorCode::InvalidScenario: return "invalid_scenario";
    case ErrorCode::ContractViolation: return "contract_violation";
    case ErrorCode::Usage: return "usage";
    case ErrorCode::Disconnected: return "disconnected";
  }
  return "unknown";
}

}  // namespace socnav
