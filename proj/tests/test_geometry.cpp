#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "dyad/geometry.hpp"

using namespace dyad;

namespace {

Quat random_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Quat q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return q;
}

}  // namespace

TEST_CASE("point velocity matches central differences of the moving point") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-6;

  for (int trial = 0; trial < 300; ++trial) {
    Pose pose;
    pose.position = Vec3(u(rng), u(rng), u(rng));
    pose.orientation = random_quat(rng);
    Twist twist;
    twist.linear = Vec3(g(rng), g(rng), g(rng));
    twist.angular = Vec3(g(rng), g(rng), g(rng));
    Vec3 q(u(rng), u(rng), u(rng));

    Vec3 v = handle_velocity(pose, twist, q);

    // advance/retreat the rigid motion by h and difference the point
    auto point_at = [&](double dt) {
      const Vec3 w = twist.angular;
      Quat dq = Quat::Identity();
      if (w.norm() > 0) dq = Quat(Eigen::AngleAxisd(w.norm() * dt, w.normalized()));
      Quat qt = (pose.orientation * dq).normalized();
      Vec3 pt = pose.position + twist.linear * dt;
      return Vec3(qt * q + pt);
    };
    Vec3 fd = (point_at(h) - point_at(-h)) / (2.0 * h);
    CHECK((v - fd).norm() < 1e-6);
  }
}

TEST_CASE("pure translation moves every handle at the body velocity") {
  Pose pose;
  pose.orientation = yaw_quat(0.7);
  pose.position = Vec3(1, 2, 0);
  Twist twist;
  twist.linear = Vec3(0.3, -0.2, 0.0);
  HandleGeometry h;
  CHECK(handle_velocity(pose, twist, h.q1) == twist.linear);
  CHECK(handle_velocity(pose, twist, h.q2) == twist.linear);
}

TEST_CASE("rigidity: handle separation is preserved by the velocity field") {
  // d/dt |r1 - r2|^2 = 2 (r1 - r2) . (v1 - v2) must vanish
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    Pose pose;
    pose.orientation = random_quat(rng);
    pose.position = Vec3(g(rng), g(rng), g(rng));
    Twist twist;
    twist.linear = Vec3(g(rng), g(rng), g(rng));
    twist.angular = Vec3(g(rng), g(rng), g(rng));
    HandleGeometry h;
    Vec3 v1 = handle_velocity(pose, twist, h.q1);
    Vec3 v2 = handle_velocity(pose, twist, h.q2);
    Vec3 r1 = pose.orientation * h.q1 + pose.position;
    Vec3 r2 = pose.orientation * h.q2 + pose.position;
    CHECK(std::abs((r1 - r2).dot(v1 - v2)) < 1e-12);
  }
}

TEST_CASE("handle velocity rejects bad input") {
  Pose pose;
  Twist twist;
  CHECK_THROWS_AS(handle_velocity(pose, twist, Vec3(NAN, 0, 0)), std::invalid_argument);
  pose.orientation = Quat(2.0, 0, 0, 0);  // not normalized
  CHECK_THROWS_AS(handle_velocity(pose, twist, Vec3(1, 0, 0)), std::invalid_argument);
}

TEST_CASE("standard goal layout fans three goals around straight ahead") {
  GoalLayout layout = GoalLayout::standard_three();
  REQUIRE(layout.count() == 3);
  // bearings 130, 90, 50 degrees at 2.4 m
  CHECK(layout.goals[0].x() == doctest::Approx(2.4 * std::cos(130.0 * M_PI / 180.0)).epsilon(1e-12));
  CHECK(layout.goals[1].x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(layout.goals[1].y() == doctest::Approx(2.4).epsilon(1e-12));
  CHECK(layout.goals[2].y() == doctest::Approx(2.4 * std::sin(50.0 * M_PI / 180.0)).epsilon(1e-12));
  for (const Vec2& goal : layout.goals) {
    CHECK(goal.norm() == doctest::Approx(2.4).epsilon(1e-12));
  }
}

TEST_CASE("goal direction is unit length and points at the goal") {
  GoalLayout layout = GoalLayout::standard_three();
  Vec2 p(0.5, 0.5);
  for (int i = 0; i < 3; ++i) {
    Vec2 d = goal_direction(p, layout, i);
    CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-12));
    Vec2 expect = (layout.goals[i] - p).normalized();
    CHECK((d - expect).norm() < 1e-12);
  }
  CHECK_THROWS_AS(goal_direction(p, layout, 3), std::invalid_argument);
  CHECK_THROWS_AS(goal_direction(layout.goals[1], layout, 1), std::domain_error);
}

TEST_CASE("projection is the plain dot product against a unit direction") {
  Vec2 d(1.0, 0.0);
  CHECK(project(Vec2(3.0, 4.0), d) == 3.0);
  CHECK_THROWS_AS(project(Vec2(1, 1), Vec2(2, 0)), std::invalid_argument);
}

TEST_CASE("yaw round-trips through the quaternion") {
  for (double yaw : {-2.5, -0.3, 0.0, 0.3, 1.2, 3.0}) {
    CHECK(yaw_of(yaw_quat(yaw)) == doctest::Approx(yaw).epsilon(1e-12));
  }
}
