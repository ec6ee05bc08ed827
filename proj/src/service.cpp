/*
 * service.cpp
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

#include "socnav/service.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <thread>

#include "net.hpp"
#include "socnav/error.hpp"

namespace socnav {

std::shared_ptr<const World> WorldCache::get(const MapRef &ref) {
  const std::string key = ref.str();
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = worlds_.find(key); it != worlds_.end()) return it->second;
  }
  auto world = World::build(resolve_map(ref, mapgen_), key, episode_);
  std::lock_guard<std::mutex> lock(mu_);
  return worlds_.emplace(key, std::move(world)).first->second;
}

Session::Session(std::shared_ptr<WorldCache> worlds, std::shared_ptr<const ServiceConfig> config)
    : worlds_(std::move(worlds)), config_(std::move(config)) {}

namespace {

ErrorResponse error(const char *code, const std::string &message) { return {code, message}; }

}  // namespace

Response Session::handle(const Request &request) {
  if (const auto *reset = std::get_if<ResetRequest>(&request)) {
    std::shared_ptr<const World> world;
    try {
      const MapRef ref = MapRef::parse(reset->map);
      if (ref.kind == MapRef::Kind::File &&
          std::find(config_->allowed_files.begin(), config_->allowed_files.end(), ref.str()) ==
              config_->allowed_files.end()) {
        return error(protocol_code::kInvalidMap, "map '" + reset->map + "' is not served");
      }
      world = worlds_->get(ref);
    } catch (const Error &e) {
      return error(protocol_code::kInvalidMap, e.what());
    }
    EpisodeConfig cfg = config_->episode;
    cfg.planner = reset->global_planner;
    cfg.build_observations = true;
    try {
      const Scenario s = scenario_for_seed(*world, reset->seed, reset->n_peds, reset->mode, config_->scenario);
      episode_.emplace(world, cfg);
      ObsResponse r;
      r.observation = *episode_->reset(s);
      return r;
    } catch (const Error &e) {
      episode_.reset();
      return error(protocol_code::kInvalidScenario, e.what());
    }
  }
  if (const auto *step = std::get_if<StepRequest>(&request)) {
    if (!episode_) return error(protocol_code::kNoEpisode, "step before reset");
    if (episode_->outcome() != Outcome::Running) return error(protocol_code::kEpisodeOver, "episode is over");
    try {
      validate_action(step->action);
    } catch (const ProtocolError &e) {
      return error(protocol_code::kInvalidAction, e.what());
    }
    const EpisodeConfig &cfg = episode_->config();
    const StepResult res = episode_->step(denormalize_action(step->action, cfg.v_max, cfg.omega_max));
    StepResponse r;
    r.step_index = res.step_index;
    r.outcome = res.outcome;
    r.reward = res.reward;
    r.applied = res.info.applied;
    r.wall_hit = res.info.wall_hit;
    r.random_action = res.info.random_action;
    r.replan = res.info.replan;
    r.observation = *res.observation;
    return r;
  }
  closed_ = true;
  episode_.reset();
  return ClosedResponse{};
}

std::string Session::handle_line(const std::string &line) {
  try {
    return encode(handle(decode_request(line)));
  } catch (const ProtocolError &e) {
    return encode(Response{ErrorResponse{e.code(), e.what()}});
  } catch (const std::exception &e) {
    return encode(Response{ErrorResponse{protocol_code::kInternal, e.what()}});
  }
}

void serve_stream(std::istream &in, std::ostream &out, std::shared_ptr<WorldCache> worlds,
                  std::shared_ptr<const ServiceConfig> config) {
  Session session(std::move(worlds), std::move(config));
  std::string line;
  while (!session.closed() && std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out << session.handle_line(line) << '\n';
    out.flush();
  }
}

struct TcpService::Impl {
  net::Listener listener;
  std::shared_ptr<WorldCache> worlds;
  std::shared_ptr<const ServiceConfig> config;

  Impl(const std::string &host, int port, std::shared_ptr<WorldCache> w, std::shared_ptr<const ServiceConfig> c)
      : listener(host, port), worlds(std::move(w)), config(std::move(c)) {}
};

TcpService::TcpService(const std::string &host, int port, std::shared_ptr<WorldCache> worlds,
                       std::shared_ptr<const ServiceConfig> config)
    : impl_(std::make_unique<Impl>(host, port, std::move(worlds), std::move(config))) {}

TcpService::~TcpService() = default;

int TcpService::port() const { return impl_->listener.port(); }

void TcpService::run(const std::atomic<bool> &stop) {
  std::vector<std::thread> sessions;
  while (!stop.load()) {
    auto conn = impl_->listener.accept(100);
    if (!conn) continue;
    sessions.emplace_back([this, &stop, sock = std::move(*conn)]() mutable {
      Session session(impl_->worlds, impl_->config);
      while (!session.closed()) {
        const auto line = sock.read_line(&stop);
        if (!line) break;
        if (line->empty()) continue;
        if (!sock.write_line(session.handle_line(*line))) break;
      }
    });
  }
  for (std::thread &t : sessions) t.join();
}

}  // namespace socnav
