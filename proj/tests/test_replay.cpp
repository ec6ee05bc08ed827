/*
 * test_replay.cpp
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

#include <gtest/gtest.h>

#include <algorithm>

#include "socnav/error.hpp"
#include "socnav/replay.hpp"

namespace socnav {
namespace {

struct Recorded {
  std::string text;
  int steps = 0;
};

std::shared_ptr<const World> gen_world(std::uint64_t seed) {
  return World::build(generate_indoor_map(seed, {}), MapRef{MapRef::Kind::Generated, "", seed}.str());
}

/// Drives an episode toward its waypoints with a little noise.
Recorded record(std::uint64_t seed, int max_steps, GlobalPlannerKind planner = GlobalPlannerKind::PPP) {
  const auto world = gen_world(3);
  EpisodeConfig cfg;
  cfg.build_observations = false;
  cfg.planner = planner;
  Rng rng(seed);
  Scenario s = sample_scenario(*world, rng, 6, seed % 2 ? CrowdMode::Cooperative : CrowdMode::Uncooperative);
  s.seed = seed;
  Episode ep(world, cfg);
  ep.reset(s);
  for (int k = 0; k < max_steps && ep.outcome() == Outcome::Running; ++k) {
    const double b = bearing_to(ep.pose(), ep.waypoints().current());
    ep.step({0.5 + rng.uniform(-0.1, 0.1), std::clamp(2.0 * b, -kPi / 2, kPi / 2) + rng.uniform(-0.2, 0.2)});
  }
  return {write_replay(ep, {}), static_cast<int>(ep.records().size())};
}

std::vector<std::string> lines_of(const std::string &text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto e = text.find('\n', pos);
    out.push_back(text.substr(pos, e - pos));
    pos = e + 1;
  }
  return out;
}

TEST(Replay, OneStepLog) {
  const Recorded r = record(1, 1);
  const auto lines = lines_of(r.text);
  EXPECT_EQ(lines.front(), "socnav-replay 1");
  EXPECT_EQ(std::count_if(lines.begin(), lines.end(), [](const std::string &l) { return l.rfind("step ", 0) == 0; }),
            1);
  EXPECT_EQ(lines.back().rfind("end steps 1 outcome running", 0), 0u);
}

TEST(Replay, ParseMatchesEpisode) {
  const auto world = gen_world(3);
  EpisodeConfig cfg;
  cfg.build_observations = false;
  Rng rng(4);
  const Scenario s = sample_scenario(*world, rng, 4, CrowdMode::Cooperative);
  Episode ep(world, cfg);
  ep.reset(s);
  for (int k = 0; k < 60; ++k) ep.step({0.4, 0.3 * std::sin(0.1 * k)});
  const ReplayLog log = parse_replay(write_replay(ep, {}));
  EXPECT_EQ(log.map_ref, "gen:3");
  EXPECT_EQ(log.fingerprint, world->grid.fingerprint());
  EXPECT_EQ(log.scenario, s);
  EXPECT_EQ(log.initial_waypoints, ep.initial_waypoints());
  ASSERT_EQ(log.steps.size(), ep.records().size());
  double ret = 0.0;
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    const StepRecord &rec = ep.records()[i];
    EXPECT_EQ(log.steps[i].pose, rec.pose);
    EXPECT_EQ(log.steps[i].reward, rec.result.reward);
    EXPECT_EQ(log.steps[i].applied, rec.result.info.applied);
    EXPECT_EQ(log.steps[i].peds, rec.ped_positions);
    EXPECT_EQ(log.steps[i].new_waypoints, rec.new_waypoints);
    ret += rec.result.reward.total;
  }
  EXPECT_EQ(log.total_return, ret);
  EpisodeConfig expected = cfg;
  expected.build_observations = true;
  EXPECT_EQ(log.config, expected);
}

TEST(Replay, ResimulationIsByteIdentical) {
  for (std::uint64_t seed : {2u, 3u, 8u}) {
    for (GlobalPlannerKind k : {GlobalPlannerKind::PPP, GlobalPlannerKind::AStar, GlobalPlannerKind::FixedAtStart}) {
      const Recorded r = record(seed, 300, k);
      EXPECT_EQ(r.text, record(seed, 300, k).text);
      const ReplayVerdict v = verify_replay(r.text);
      EXPECT_TRUE(v.ok) << v.message;
    }
  }
}

std::string flip_command(const std::string &text, int step) {
  const std::string tag = "step " + std::to_string(step) + " cmd ";
  const auto pos = text.find(tag);
  std::string out = text;
  char &c = out[pos + tag.size() + 2];  // a mantissa digit of v
  c = c == '1' ? '2' : '1';
  return out;
}

TEST(Replay, FlippedActionByteDiverges) {
  const Recorded r = record(5, 200);
  ASSERT_GT(r.steps, 20);
  for (int step : {1, 7, 20}) {
    const ReplayVerdict v = verify_replay(flip_command(r.text, step));
    EXPECT_FALSE(v.ok);
    ASSERT_TRUE(v.divergent_step);
    EXPECT_EQ(*v.divergent_step, step);
  }
}

TEST(Replay, AnyTamperedRecordByteDiverges) {
  const Recorded r = record(6, 40);
  const auto lines = lines_of(r.text);
  // Tamper with the last character of the pose x on step 10.
  const std::string tag = "step 10 cmd ";
  const auto pos = r.text.find(tag);
  const auto pose = r.text.find(" pose ", pos) + 6;
  std::string bad = r.text;
  const auto sp = bad.find(' ', pose);
  bad[sp - 1] = bad[sp - 1] == '3' ? '4' : '3';
  const ReplayVerdict v = verify_replay(bad);
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.divergent_step.value_or(-1), 10);
}

TEST(Replay, TruncatedLogNamesTheLine) {
  const Recorded r = record(7, 30);
  const auto lines = lines_of(r.text);
  // Drop the end record.
  std::string cut;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) cut += lines[i] + "\n";
  try {
    parse_replay(cut);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("line " + std::to_string(lines.size())), std::string::npos) << e.what();
  }
  // Cut mid-line.
  const std::string mid = r.text.substr(0, r.text.size() / 2);
  try {
    parse_replay(mid);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
  }
}

TEST(Replay, MalformedInputs) {
  EXPECT_THROW(parse_replay(""), Error);
  EXPECT_THROW(parse_replay("socnav-replay 2\n"), Error);
  const Recorded r = record(1, 5);
  std::string bad = r.text;
  bad.replace(bad.find(" wall "), 7, " wall 7");
  EXPECT_THROW(parse_replay(bad), Error);
  EXPECT_THROW(parse_replay(r.text + "step 99\n"), Error);
}

TEST(Replay, WrongMapIsReported) {
  const Recorded r = record(2, 10);
  const ReplayVerdict v = verify_replay(r.text, generate_indoor_map(4, {}));
  EXPECT_FALSE(v.ok);
  EXPECT_EQ(v.divergent_step.value_or(-1), 0);
}

}  // namespace
}  // namespace socnav
