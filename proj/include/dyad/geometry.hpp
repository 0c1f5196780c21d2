#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dyad {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

inline bool all_finite(const Vec3& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

inline bool all_finite(const Vec2& v) {
  return std::isfinite(v.x()) && std::isfinite(v.y());
}

// Rigid pose of the body frame relative to the spatial (world) frame.
struct Pose {
  Vec3 position = Vec3::Zero();          // m
  Quat orientation = Quat::Identity();   // unit quaternion

  bool normalized(double tol = 1e-9) const {
    return std::abs(orientation.norm() - 1.0) <= tol;
  }
};

// Body velocity: linear part in the spatial frame, angular part in the
// body frame.
struct Twist {
  Vec3 linear = Vec3::Zero();    // m/s
  Vec3 angular = Vec3::Zero();   // rad/s

  bool finite() const { return all_finite(linear) && all_finite(angular); }
};

// Grasp points of the two handles, body frame.
struct HandleGeometry {
  Vec3 q1{0.305, 0.0, 0.0};
  Vec3 q2{-0.305, 0.0, 0.0};
};

// Candidate goal locations on the horizontal plane.
struct GoalLayout {
  std::vector<Vec2> goals;

  int count() const { return static_cast<int>(goals.size()); }

  bool valid_index(int i) const { return i >= 0 && i < count(); }

  // Three goals fanned out in front of the start position: 2.4 m radius,
  // 40 degree spacing, middle goal straight ahead (+y).
  static GoalLayout standard_three(const Vec2& center = Vec2::Zero(),
                                   double radius = 2.4,
                                   double spacing_deg = 40.0,
                                   int n = 3) {
    GoalLayout layout;
    const double spacing = spacing_deg * M_PI / 180.0;
    const double mid = M_PI / 2.0;
    for (int i = 0; i < n; ++i) {
      const double bearing = mid + (0.5 * (n - 1) - i) * spacing;
      layout.goals.push_back(center +
                             radius * Vec2(std::cos(bearing), std::sin(bearing)));
    }
    return layout;
  }
};

// Velocity of a body-frame point q under the given rigid motion,
// expressed in the spatial frame: R * (w x q) + pdot.
inline Vec3 handle_velocity(const Pose& pose, const Twist& twist,
                            const Vec3& handle_point) {
  if (!twist.finite() || !all_finite(pose.position) || !all_finite(handle_point) ||
      !pose.orientation.coeffs().allFinite()) {
    throw std::invalid_argument("handle_velocity: non-finite input");
  }
  if (!pose.normalized()) {
    throw std::invalid_argument("handle_velocity: quaternion not normalized");
  }
  return pose.orientation * twist.angular.cross(handle_point) + twist.linear;
}

// Unit vector on the horizontal plane from the object position toward goal i.
inline Vec2 goal_direction(const Vec2& object_position, const GoalLayout& layout,
                           int goal_index) {
  if (!layout.valid_index(goal_index)) {
    throw std::invalid_argument("goal_direction: goal index out of range");
  }
  if (!all_finite(object_position)) {
    throw std::invalid_argument("goal_direction: non-finite position");
  }
  const Vec2 d = layout.goals[goal_index] - object_position;
  const double n = d.norm();
  if (n < 1e-12) {
    throw std::domain_error("goal_direction: object position coincides with goal");
  }
  return d / n;
}

// Signed scalar projection of v onto a unit direction.
inline double project(const Vec2& v, const Vec2& unit_direction) {
  if (std::abs(unit_direction.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("project: direction must have unit norm");
  }
  if (!all_finite(v)) {
    throw std::invalid_argument("project: non-finite vector");
  }
  return v.dot(unit_direction);
}

inline Vec2 planar(const Vec3& v) { return Vec2(v.x(), v.y()); }

inline double yaw_of(const Quat& q) {
  return std::atan2(2.0 * (q.w() * q.z() + q.x() * q.y()),
                    1.0 - 2.0 * (q.y() * q.y() + q.z() * q.z()));
}

inline Quat yaw_quat(double yaw) {
  return Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ()));
}

}  // namespace dyad
