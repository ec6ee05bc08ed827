/*
 * net.hpp
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

#ifndef SOCNAV_SRC_NET_HPP
#define SOCNAV_SRC_NET_HPP

#include <atomic>
#include <optional>
#include <string>

namespace socnav::net {

/// Owned, line-oriented TCP stream.
class LineSocket {
 public:
  LineSocket() = default;
  explicit LineSocket(int fd) : fd_(fd) {}
  LineSocket(LineSocket &&o) noexcept : fd_(o.fd_), buffer_(std::move(o.buffer_)) { o.fd_ = -1; }
  LineSocket &operator=(LineSocket &&o) noexcept;
  LineSocket(const LineSocket &) = delete;
  LineSocket &operator=(const LineSocket &) = delete;
  ~LineSocket();

  /// Throws Error(Disconnected) when the endpoint cannot be reached.
  static LineSocket connect(const std::string &host, int port);

  bool valid() const { return fd_ >= 0; }

  /// Next line without its newline; nullopt on EOF, error, or `stop` becoming true.
  std::optional<std::string> read_line(const std::atomic<bool> *stop = nullptr, std::size_t max_len = 1 << 24);

  /// Writes `line` plus a newline; false when the peer is gone.
  bool write_line(const std::string &line);

  void close();

 private:
  int fd_ = -1;
  std::string buffer_;
};

class Listener {
 public:
  /// Binds and listens; port 0 picks a free port. Throws Error(Io) on failure.
  Listener(const std::string &host, int port);
  ~Listener();
  Listener(const Listener &) = delete;
  Listener &operator=(const Listener &) = delete;

  int port() const { return port_; }

  /// Waits up to `timeout_ms` for a connection.
  std::optional<LineSocket> accept(int timeout_ms);

 private:
  int fd_ = -1;
  int port_ = 0;
};

/// Splits "host:port"; throws Error(InvalidArgument).
std::pair<std::string, int> split_endpoint(const std::string &endpoint);

}  // namespace socnav::net

#endif  // SOCNAV_SRC_NET_HPP
