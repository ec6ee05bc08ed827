/*
 * config.hpp
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

#ifndef SOCNAV_CONFIG_HPP
#define SOCNAV_CONFIG_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "socnav/dwa.hpp"
#include "socnav/episode.hpp"
#include "socnav/error.hpp"
#include "socnav/scenario.hpp"

namespace socnav {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Shortest-exact text for a double (%.17g).
std::string format_double(double v);

double parse_double_value(const std::string &key, const std::string &text);
long long parse_int_value(const std::string &key, const std::string &text);
bool parse_bool_value(const std::string &key, const std::string &text);
std::vector<std::string> split_list(const std::string &text, char sep = ',');

/// `key = value` lines; blank lines and `#` comments skipped. Parse errors carry the line number.
KeyValues parse_key_values(const std::string &text);
std::string format_key_values(const KeyValues &items);

/// Named, ordered set of text accessors into a config struct.
template <class T>
class KeyRegistry {
 public:
  using Getter = std::function<std::string(const T &)>;
  using Setter = std::function<void(T &, const std::string &)>;

  void add(std::string key, Getter get, Setter set) {
    entries_.push_back({std::move(key), std::move(get), std::move(set)});
  }

  /// Adds every key of `other`, reached through `project` (a generic lambda
  /// returning a reference to the nested struct).
  template <class U, class Project>
  void include(const KeyRegistry<U> &other, Project project, const std::string &prefix = "") {
    for (const auto &e : other.entries_) {
      add(prefix + e.key, [g = e.get, project](const T &t) { return g(project(t)); },
          [s = e.set, project](T &t, const std::string &v) { s(project(t), v); });
    }
  }

  bool contains(const std::string &key) const { return find(key) != nullptr; }

  void set(T &target, const std::string &key, const std::string &value) const {
    const Entry *e = find(key);
    if (!e) throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    e->set(target, value);
  }

  void apply(T &target, const KeyValues &items) const {
    for (const auto &[k, v] : items) set(target, k, v);
  }

  std::string get(const T &target, const std::string &key) const {
    const Entry *e = find(key);
    if (!e) throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    return e->get(target);
  }

  KeyValues items(const T &target) const {
    KeyValues out;
    out.reserve(entries_.size());
    for (const auto &e : entries_) out.emplace_back(e.key, e.get(target));
    return out;
  }

  std::vector<std::string> keys() const {
    std::vector<std::string> out;
    for (const auto &e : entries_) out.push_back(e.key);
    return out;
  }

 private:
  template <class>
  friend class KeyRegistry;

  struct Entry {
    std::string key;
    Getter get;
    Setter set;
  };

  const Entry *find(const std::string &key) const {
    for (const auto &e : entries_) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  std::vector<Entry> entries_;
};

const KeyRegistry<EpisodeConfig> &episode_registry();
const KeyRegistry<MapGenParams> &mapgen_registry();
const KeyRegistry<ScenarioParams> &scenario_registry();
const KeyRegistry<DwaConfig> &dwa_registry();

}  // namespace socnav

#endif  // SOCNAV_CONFIG_HPP
