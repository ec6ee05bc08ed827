/*
 * service.hpp
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

#ifndef SOCNAV_SERVICE_HPP
#define SOCNAV_SERVICE_HPP

#include <atomic>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "socnav/episode.hpp"
#include "socnav/protocol.hpp"
#include "socnav/scenario.hpp"

namespace socnav {

struct ServiceConfig {
  EpisodeConfig episode;
  MapGenParams mapgen;
  ScenarioParams scenario;
  /// `file:` references a client may load; `gen:` references are always allowed.
  std::vector<std::string> allowed_files;
};

/// Thread-safe cache of immutable worlds keyed by map reference.
class WorldCache {
 public:
  WorldCache(MapGenParams mapgen, EpisodeConfig episode)
      : mapgen_(std::move(mapgen)), episode_(std::move(episode)) {}

  /// Throws Error for unknown or unreadable maps.
  std::shared_ptr<const World> get(const MapRef &ref);

 private:
  MapGenParams mapgen_;
  EpisodeConfig episode_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const World>> worlds_;
};

/// One client's episode state. Every request line yields exactly one response line.
class Session {
 public:
  Session(std::shared_ptr<WorldCache> worlds, std::shared_ptr<const ServiceConfig> config);

  Response handle(const Request &request);
  /// Decodes, handles and encodes; malformed input yields a parse error response.
  std::string handle_line(const std::string &line);

  bool closed() const { return closed_; }
  const Episode *episode() const { return episode_ ? &*episode_ : nullptr; }

 private:
  std::shared_ptr<WorldCache> worlds_;
  std::shared_ptr<const ServiceConfig> config_;
  std::optional<Episode> episode_;
  bool closed_ = false;
};

/// Serves one session over a pair of streams until close or EOF.
void serve_stream(std::istream &in, std::ostream &out, std::shared_ptr<WorldCache> worlds,
                  std::shared_ptr<const ServiceConfig> config);

/// TCP server: one session per connection, each on its own thread.
class TcpService {
 public:
  TcpService(const std::string &host, int port, std::shared_ptr<WorldCache> worlds,
             std::shared_ptr<const ServiceConfig> config);
  ~TcpService();

  int port() const;
  /// Blocks until `stop` becomes true; in-flight responses finish first.
  void run(const std::atomic<bool> &stop);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace socnav

#endif  // SOCNAV_SERVICE_HPP
