#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dyad/features.hpp"

using namespace dyad;

namespace {

std::vector<FusedState> random_states(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<FusedState> states(n);
  for (int i = 0; i < n; ++i) {
    FusedState& s = states[i];
    s.t = 0.01 * i;
    s.pose.position = Vec3(g(rng), g(rng), 0.0);
    s.pose.orientation = yaw_quat(0.1 * g(rng));
    s.twist.linear = Vec3(g(rng), g(rng), 0.0);
    s.twist.angular = Vec3(0, 0, g(rng));
    s.f1 = Vec3(g(rng), g(rng), 0.0);
    s.f2 = Vec3(g(rng), g(rng), 0.0);
    s.v1 = Vec3(g(rng), g(rng), 0.0);
    s.v2 = Vec3(g(rng), g(rng), 0.0);
  }
  return states;
}

}  // namespace

TEST_CASE("agent power is the dot product at the grasp point") {
  CHECK(agent_power(Vec3(2, 0, 0), Vec3(0.5, 1, 0)) == 1.0);
  CHECK(agent_power(Vec3(2, -3, 0), Vec3(0, 0, 0)) == 0.0);
  // orthogonal force does no work
  CHECK(agent_power(Vec3(0, 5, 0), Vec3(1, 0, 0)) == 0.0);
  CHECK(total_power(Vec3(1, 1, 0), Vec3(2, -1, 0)) == 1.0);
}

TEST_CASE("projected power is exactly the product of projected force and velocity") {
  Vec2 dir(std::cos(0.3), std::sin(0.3));
  Vec3 f(4.0, -1.0, 0.0);
  Vec3 v(0.2, 0.5, 0.0);
  ProjectedFeatures p = projected_features(f, v, dir);
  CHECK(p.f_proj_n == doctest::Approx(planar(f).dot(dir)).epsilon(1e-15));
  CHECK(p.v_proj_mps == doctest::Approx(planar(v).dot(dir)).epsilon(1e-15));
  CHECK(p.p_proj_w == p.f_proj_n * p.v_proj_mps);
}

TEST_CASE("quadrant covers the sign plane with a deadband") {
  QuadrantDeadband d;  // 0.5 N, 0.02 m/s
  CHECK(quadrant(2.0, 0.1, d) == Quadrant::TowardDrive);
  CHECK(quadrant(-2.0, 0.1, d) == Quadrant::Resist);
  CHECK(quadrant(2.0, -0.1, d) == Quadrant::Yield);
  CHECK(quadrant(-2.0, -0.1, d) == Quadrant::AwayDrive);
  CHECK(quadrant(0.4, 0.1, d) == Quadrant::Neutral);
  CHECK(quadrant(2.0, 0.01, d) == Quadrant::Neutral);
  CHECK(quadrant(0.0, 0.0, d) == Quadrant::Neutral);
}

TEST_CASE("quadrant tokens round-trip") {
  for (Quadrant q : {Quadrant::TowardDrive, Quadrant::Resist, Quadrant::Yield,
                     Quadrant::AwayDrive, Quadrant::Neutral}) {
    CHECK(quadrant_from_token(quadrant_token(q)) == q);
  }
  CHECK(quadrant_token(Quadrant::TowardDrive) == "toward");
  CHECK(quadrant_token(Quadrant::Resist) == "resist");
  CHECK(quadrant_token(Quadrant::Yield) == "yield");
  CHECK(quadrant_token(Quadrant::AwayDrive) == "away");
  CHECK(quadrant_token(Quadrant::Neutral) == "neutral");
}

TEST_CASE("power series carries one projection block per goal and agent") {
  GoalLayout layout = GoalLayout::standard_three();
  auto states = random_states(50, 5);
  auto series = power_series(states, layout, {});
  REQUIRE(series.size() == states.size());
  for (size_t i = 0; i < series.size(); ++i) {
    const PowerSample& s = series[i];
    CHECK(s.t == states[i].t);
    REQUIRE(s.agent1.size() == 3);
    REQUIRE(s.agent2.size() == 3);
    CHECK(s.p1_w == doctest::Approx(states[i].f1.dot(states[i].v1)).epsilon(1e-15));
    CHECK(s.p2_w == doctest::Approx(states[i].f2.dot(states[i].v2)).epsilon(1e-15));
    CHECK(s.p_sum_w ==
          doctest::Approx((states[i].f1 + states[i].f2).dot(states[i].twist.linear))
              .epsilon(1e-12));
    // spot check one projection against the free functions
    Vec2 dir = goal_direction(planar(states[i].pose.position), layout, 1);
    ProjectedFeatures want = projected_features(states[i].f1, states[i].v1, dir);
    CHECK(s.agent1[1].f_proj_n == doctest::Approx(want.f_proj_n).epsilon(1e-12));
    CHECK(s.agent1[1].p_proj_w == doctest::Approx(want.p_proj_w).epsilon(1e-12));
  }
}

TEST_CASE("parallel kernel is bit-identical to the serial reference") {
  GoalLayout layout = GoalLayout::standard_three();
  for (unsigned seed : {1u, 2u, 3u}) {
    auto states = random_states(4096, seed);
    auto a = power_series(states, layout, {});
    auto b = power_series_serial(states, layout, {});
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].p1_w == b[i].p1_w);
      CHECK(a[i].p2_w == b[i].p2_w);
      CHECK(a[i].p_sum_w == b[i].p_sum_w);
      for (int g = 0; g < 3; ++g) {
        CHECK(a[i].agent1[g].f_proj_n == b[i].agent1[g].f_proj_n);
        CHECK(a[i].agent1[g].v_proj_mps == b[i].agent1[g].v_proj_mps);
        CHECK(a[i].agent1[g].p_proj_w == b[i].agent1[g].p_proj_w);
        CHECK(a[i].agent1[g].quadrant == b[i].agent1[g].quadrant);
        CHECK(a[i].agent2[g].p_proj_w == b[i].agent2[g].p_proj_w);
      }
    }
  }
}

TEST_CASE("object inertia for the default tray") {
  PhysicalObject obj;
  // 2.3 kg * (0.61^2 + 0.31^2) / 12
  CHECK(obj.yaw_inertia() == doctest::Approx(2.3 * (0.3721 + 0.0961) / 12.0).epsilon(1e-12));
}
