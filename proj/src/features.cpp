#include "dyad/features.hpp"

#include <cmath>
#include <stdexcept>

namespace dyad {

std::string_view quadrant_token(Quadrant q) {
  switch (q) {
    case Quadrant::TowardDrive: return "toward";
    case Quadrant::Resist: return "resist";
    case Quadrant::Yield: return "yield";
    case Quadrant::AwayDrive: return "away";
    case Quadrant::Neutral: return "neutral";
  }
  throw std::logic_error("quadrant_token: bad enum value");
}

Quadrant quadrant_from_token(std::string_view token) {
  if (token == "toward") return Quadrant::TowardDrive;
  if (token == "resist") return Quadrant::Resist;
  if (token == "yield") return Quadrant::Yield;
  if (token == "away") return Quadrant::AwayDrive;
  if (token == "neutral") return Quadrant::Neutral;
  throw std::invalid_argument("unknown quadrant token: " + std::string(token));
}

double agent_power(const Vec3& f, const Vec3& v) {
  if (!all_finite(f) || !all_finite(v)) {
    throw std::invalid_argument("agent_power: non-finite input");
  }
  return f.dot(v);
}

double total_power(const Vec3& f_sum, const Vec3& v_com) {
  return agent_power(f_sum, v_com);
}

ProjectedFeatures projected_features(const Vec3& f, const Vec3& v,
                                     const Vec2& dir) {
  const double fp = project(planar(f), dir);
  const double vp = project(planar(v), dir);
  return {fp, vp, fp * vp};
}

Quadrant quadrant(double f_proj_n, double v_proj_mps,
                  const QuadrantDeadband& deadband) {
  if (std::abs(f_proj_n) < deadband.force_n ||
      std::abs(v_proj_mps) < deadband.speed_mps) {
    return Quadrant::Neutral;
  }
  if (f_proj_n > 0.0) {
    return v_proj_mps > 0.0 ? Quadrant::TowardDrive : Quadrant::Yield;
  }
  return v_proj_mps > 0.0 ? Quadrant::Resist : Quadrant::AwayDrive;
}

namespace {

PowerSample sample_at(const FusedState& s, const GoalLayout& layout,
                      const QuadrantDeadband& deadband) {
  PowerSample out;
  out.t = s.t;
  out.p1_w = agent_power(s.f1, s.v1);
  out.p2_w = agent_power(s.f2, s.v2);
  out.p_sum_w = total_power(s.f1 + s.f2, s.twist.linear);
  const int n = layout.count();
  out.agent1.resize(n);
  out.agent2.resize(n);
  const Vec2 pos = planar(s.pose.position);
  for (int g = 0; g < n; ++g) {
    const Vec2 dir = goal_direction(pos, layout, g);
    const auto a = projected_features(s.f1, s.v1, dir);
    const auto b = projected_features(s.f2, s.v2, dir);
    out.agent1[g] = {a.f_proj_n, a.v_proj_mps, a.p_proj_w,
                     quadrant(a.f_proj_n, a.v_proj_mps, deadband)};
    out.agent2[g] = {b.f_proj_n, b.v_proj_mps, b.p_proj_w,
                     quadrant(b.f_proj_n, b.v_proj_mps, deadband)};
  }
  return out;
}

}  // namespace

std::vector<PowerSample> power_series_serial(
    const std::vector<FusedState>& states, const GoalLayout& layout,
    const QuadrantDeadband& deadband) {
  std::vector<PowerSample> out(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    out[i] = sample_at(states[i], layout, deadband);
  }
  return out;
}

std::vector<PowerSample> power_series(const std::vector<FusedState>& states,
                                      const GoalLayout& layout,
                                      const QuadrantDeadband& deadband) {
  std::vector<PowerSample> out(states.size());
  const auto n = static_cast<std::ptrdiff_t>(states.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<size_t>(i)] =
        sample_at(states[static_cast<size_t>(i)], layout, deadband);
  }
  return out;
}

}  // namespace dyad
