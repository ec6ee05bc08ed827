/*
 * geometry.hpp
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

#ifndef SOCNAV_GEOMETRY_HPP
#define SOCNAV_GEOMETRY_HPP

#include <cmath>
#include <numbers>

namespace socnav {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(const Vec2 &o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2 &o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2 &) const = default;
};

constexpr Vec2 operator*(double s, const Vec2 &v) { return {v.x * s, v.y * s}; }

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }

/// 2D cross product (determinant of the matrix with columns a, b).
constexpr double det(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }

constexpr double abs_sq(const Vec2 &v) { return dot(v, v); }

inline double norm(const Vec2 &v) { return std::sqrt(abs_sq(v)); }

inline Vec2 normalized(const Vec2 &v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec2{};
}

inline double distance(const Vec2 &a, const Vec2 &b) { return norm(a - b); }

inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Vec2 position() const { return {x, y}; }
  constexpr bool operator==(const Pose &) const = default;
};

/// Forward-Euler unicycle step; heading wrapped to (-pi, pi].
inline Pose integrate_unicycle(const Pose &p, double v, double omega, double dt) {
  return {p.x + v * std::cos(p.theta) * dt, p.y + v * std::sin(p.theta) * dt,
          wrap_angle(p.theta + omega * dt)};
}

/// Bearing of `target` as seen from `pose`, in the robot frame, wrapped to (-pi, pi].
inline double bearing_to(const Pose &pose, const Vec2 &target) {
  const Vec2 d = target - pose.position();
  return wrap_angle(std::atan2(d.y, d.x) - pose.theta);
}

}  // namespace socnav

#endif  // SOCNAV_GEOMETRY_HPP
