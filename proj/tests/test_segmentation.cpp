#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "dyad/segmentation.hpp"

using namespace dyad;

namespace {

constexpr double kDt = 0.005;

// Adds A * sin(pi (t - t0) / W) over [t0, t0 + W].
void add_burst(std::vector<double>& p, const std::vector<double>& t, double t0, double w,
               double a) {
  for (size_t i = 0; i < t.size(); ++i) {
    double x = (t[i] - t0) / w;
    if (x >= 0.0 && x <= 1.0) p[i] += a * std::sin(M_PI * x);
  }
}

std::vector<double> timeline(double duration) {
  std::vector<double> t;
  for (int i = 0; i * kDt <= duration + 1e-9; ++i) t.push_back(i * kDt);
  return t;
}

std::vector<TrajectorySample> line_trajectory(const Vec2& from, const Vec2& to, double speed,
                                              double t_begin, double t_hold, double t_tail) {
  // holds still at `from`, then moves straight to `to`, then holds again
  std::vector<TrajectorySample> traj;
  const Vec2 d = (to - from).normalized();
  const double travel = (to - from).norm() / speed;
  for (double t = t_begin; t <= t_begin + t_hold + travel + t_tail + 1e-9; t += 0.01) {
    TrajectorySample s;
    s.t = t;
    double m = t - t_begin - t_hold;
    if (m <= 0) {
      s.position = from;
      s.velocity = Vec2::Zero();
    } else if (m < travel) {
      s.position = from + d * speed * m;
      s.velocity = d * speed;
    } else {
      s.position = to;
      s.velocity = Vec2::Zero();
    }
    traj.push_back(s);
  }
  return traj;
}

}  // namespace

TEST_CASE("threshold crossing of a half-sine burst lands where the arcsine says") {
  auto t = timeline(3.0);
  std::vector<double> p(t.size(), 0.0);
  const double t0 = 1.0, w = 0.8, a = 3.0;
  add_burst(p, t, t0, w, a);
  SegmenterConfig cfg;
  cfg.power_threshold_w = 1.0;
  auto actions = detect_actions(t, p, 1, cfg);
  REQUIRE(actions.size() == 1);
  const double dt_on = (w / M_PI) * std::asin(1.0 / a);
  CHECK(actions[0].t_on_s == doctest::Approx(t0 + dt_on).epsilon(1e-3));
  CHECK(actions[0].t_off_s == doctest::Approx(t0 + w - dt_on).epsilon(1e-3));
  CHECK(actions[0].t_peak_s == doctest::Approx(t0 + w / 2.0).epsilon(2e-3));
  CHECK(actions[0].peak_power_w == doctest::Approx(a).epsilon(1e-4));
  CHECK(actions[0].peak_sign == 1);
  CHECK(actions[0].agent == 1);
}

TEST_CASE("a pull shows up through the magnitude with negative sign") {
  auto t = timeline(3.0);
  std::vector<double> p(t.size(), 0.0);
  add_burst(p, t, 1.0, 0.6, -2.5);
  SegmenterConfig cfg;
  cfg.power_threshold_w = 1.0;
  auto actions = detect_actions(t, p, 2, cfg);
  REQUIRE(actions.size() == 1);
  CHECK(actions[0].peak_sign == -1);
  CHECK(actions[0].peak_power_w == doctest::Approx(2.5).epsilon(1e-4));
  CHECK(actions[0].agent == 2);
}

TEST_CASE("peaks inside the merge window collapse onto the tallest") {
  auto t = timeline(4.0);
  std::vector<double> p(t.size(), 0.0);
  add_burst(p, t, 1.0, 0.4, 3.0);
  add_burst(p, t, 1.15, 0.4, 2.0);  // peak 0.15 s after the first, inside 0.25 s
  add_burst(p, t, 2.5, 0.4, 2.2);   // well separated
  SegmenterConfig cfg;
  cfg.power_threshold_w = 0.8;
  auto actions = detect_actions(t, p, 1, cfg);
  REQUIRE(actions.size() == 2);
  CHECK(actions[0].peak_power_w > 3.0);  // overlap region stacks
  CHECK(actions[1].t_peak_s == doctest::Approx(2.7).epsilon(2e-3));
}

TEST_CASE("blips shorter than the minimum duration are dropped") {
  auto t = timeline(3.0);
  std::vector<double> p(t.size(), 0.0);
  add_burst(p, t, 1.0, 0.09, 5.0);
  SegmenterConfig cfg;
  cfg.power_threshold_w = 0.5;
  CHECK(detect_actions(t, p, 1, cfg).empty());
}

TEST_CASE("relative threshold: fraction of the 95th percentile with a floor") {
  auto t = timeline(10.0);
  std::vector<double> p(t.size(), 0.0);
  for (double t0 = 0.5; t0 < 9.0; t0 += 1.0) add_burst(p, t, t0, 0.6, 4.0);
  SegmenterConfig cfg;  // power_threshold_w = 0 selects the relative rule
  double resolved = resolve_power_threshold(p, cfg);
  std::vector<double> mag;
  for (double v : p) mag.push_back(std::abs(v));
  // oracle straight from the definition
  std::sort(mag.begin(), mag.end());
  double rank = 0.95 * (mag.size() - 1);
  size_t lo = static_cast<size_t>(rank);
  double p95 = mag[lo] + (rank - lo) * (mag[lo + 1] - mag[lo]);
  CHECK(resolved == doctest::Approx(std::max(0.5, 0.2 * p95)).epsilon(1e-12));

  auto actions = detect_actions(t, p, 1, cfg);
  CHECK(actions.size() == 9);
}

TEST_CASE("flat silence yields no actions") {
  auto t = timeline(5.0);
  std::vector<double> p(t.size(), 0.0);
  CHECK(detect_actions(t, p, 1, {}).empty());
  std::vector<double> tiny(t.size(), 0.01);
  CHECK(detect_actions(t, tiny, 1, {}).empty());
}

TEST_CASE("straight run at a goal from the start: zero-length negotiation") {
  GoalLayout layout = GoalLayout::standard_three();
  auto traj = line_trajectory(Vec2(0, 0), layout.goals[1], 0.4, 0.0, 0.0, 1.0);
  PhaseBoundary b = detect_negotiation_end(traj, layout, 1, 0.0, {});
  REQUIRE(b.consensus);
  CHECK(b.settled_goal == 1);
  CHECK(b.t_dec_s == doctest::Approx(0.0).epsilon(0.02));
  CHECK(b.negotiation_duration_s == doctest::Approx(0.0).epsilon(0.02));
}

TEST_CASE("heading perpendicular to the goal never concludes") {
  GoalLayout layout;
  layout.goals.push_back(Vec2(0.0, 2.0));
  // circle around the goal at radius 1: velocity always tangent
  std::vector<TrajectorySample> traj;
  for (double t = 0.0; t <= 20.0; t += 0.01) {
    TrajectorySample s;
    s.t = t;
    double th = 0.4 * t;
    s.position = Vec2(std::cos(th), 2.0 + std::sin(th));
    s.velocity = 0.4 * Vec2(-std::sin(th), std::cos(th));
    traj.push_back(s);
  }
  PhaseBoundary b = detect_negotiation_end(traj, layout, 0, 0.0, {});
  CHECK(!b.consensus);
  CHECK(b.settled_goal == -1);
}

TEST_CASE("dog leg: the boundary sits at the turn, not at motion onset") {
  GoalLayout layout = GoalLayout::standard_three();
  // drift toward goal 0 for a while, then commit to goal 2
  auto leg1 = line_trajectory(Vec2(0, 0), Vec2(-0.51, 0.61), 0.4, 0.0, 1.0, 0.0);
  Vec2 elbow = leg1.back().position;
  auto leg2 = line_trajectory(elbow, layout.goals[2], 0.4, leg1.back().t + 0.01, 0.0, 0.5);
  std::vector<TrajectorySample> traj = leg1;
  traj.insert(traj.end(), leg2.begin(), leg2.end());
  PhaseBoundary b = detect_boundary(traj, layout, 0.0, {});
  REQUIRE(b.consensus);
  CHECK(b.settled_goal == 2);
  CHECK(b.t_dec_s == doctest::Approx(leg1.back().t).epsilon(0.05));
}

TEST_CASE("hold then straight drive: boundary at motion onset") {
  GoalLayout layout = GoalLayout::standard_three();
  auto traj = line_trajectory(Vec2(0, 0), layout.goals[0], 0.35, 0.5, 2.0, 1.0);
  PhaseBoundary b = detect_boundary(traj, layout, 0.5, {});
  REQUIRE(b.consensus);
  CHECK(b.settled_goal == 0);
  CHECK(b.t_dec_s == doctest::Approx(2.5).epsilon(0.03));
  CHECK(b.negotiation_duration_s == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("never reaching any goal reports no consensus") {
  GoalLayout layout = GoalLayout::standard_three();
  auto traj = line_trajectory(Vec2(0, 0), Vec2(0.0, 0.8), 0.3, 0.0, 0.0, 2.0);
  PhaseBoundary b = detect_boundary(traj, layout, 0.0, {});
  CHECK(!b.consensus);
}

TEST_CASE("phase split assigns actions by peak time") {
  PhaseBoundary b;
  b.t_start_s = 1.0;
  b.t_dec_s = 3.0;
  b.consensus = true;
  std::vector<ActionSegment> actions(3);
  actions[0].t_peak_s = 2.0;
  actions[1].t_peak_s = 3.0;
  actions[2].t_peak_s = 4.5;
  PhaseSplit split = phase_split(actions, 0.0, 8.0, b);
  CHECK(split.negotiation_actions.size() == 2);
  CHECK(split.execution_actions.size() == 1);
  CHECK(split.negotiation.first == 1.0);
  CHECK(split.negotiation.second == 3.0);
  CHECK(split.execution.second == 8.0);
}

TEST_CASE("segmenter config validation") {
  SegmenterConfig cfg;
  cfg.epsilon_m = -0.1;
  CHECK_THROWS_AS(cfg.validate(), DataError);
  cfg = SegmenterConfig{};
  cfg.threshold_fraction = 1.5;
  CHECK_THROWS_AS(cfg.validate(), DataError);
}
