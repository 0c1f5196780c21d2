#pragma once

#include <string_view>
#include <vector>

#include "dyad/fusion.hpp"
#include "dyad/geometry.hpp"

namespace dyad {

// Sign-quadrant reading of (projected force, projected velocity).
// Neutral marks samples inside the deadband, excluded from symbolic
// interpretation.
enum class Quadrant { TowardDrive, Resist, Yield, AwayDrive, Neutral };

std::string_view quadrant_token(Quadrant q);
Quadrant quadrant_from_token(std::string_view token);

struct QuadrantDeadband {
  double force_n = 0.5;
  double speed_mps = 0.02;
};

struct PhysicalObject {
  double mass_kg = 2.3;
  Vec2 dimensions_m{0.61, 0.31};
  HandleGeometry handles;

  // Rectangular plate about the vertical axis through the COM.
  double yaw_inertia() const {
    const double l = dimensions_m.x();
    const double w = dimensions_m.y();
    return mass_kg * (l * l + w * w) / 12.0;
  }
};

struct GoalProjection {
  double f_proj_n = 0.0;
  double v_proj_mps = 0.0;
  double p_proj_w = 0.0;
  Quadrant quadrant = Quadrant::Neutral;
};

// One tick of the symbolic feature stream: per-agent power, total power,
// and one projection triplet per (agent, goal).
struct PowerSample {
  double t = 0.0;
  double p1_w = 0.0;
  double p2_w = 0.0;
  double p_sum_w = 0.0;
  std::vector<GoalProjection> agent1;
  std::vector<GoalProjection> agent2;
};

// F . v at one grasp point.
double agent_power(const Vec3& f, const Vec3& v);

// (F1 + F2) . v_com.
double total_power(const Vec3& f_sum, const Vec3& v_com);

struct ProjectedFeatures {
  double f_proj_n;
  double v_proj_mps;
  double p_proj_w;
};

// Planar projections onto a unit goal direction; p_proj is exactly the
// product of the two scalars.
ProjectedFeatures projected_features(const Vec3& f, const Vec3& v,
                                     const Vec2& dir);

Quadrant quadrant(double f_proj_n, double v_proj_mps,
                  const QuadrantDeadband& deadband = {});

// Feature stream over a fused session. The parallel version and the serial
// reference produce identical output.
std::vector<PowerSample> power_series(const std::vector<FusedState>& states,
                                      const GoalLayout& layout,
                                      const QuadrantDeadband& deadband = {});
std::vector<PowerSample> power_series_serial(
    const std::vector<FusedState>& states, const GoalLayout& layout,
    const QuadrantDeadband& deadband = {});

}  // namespace dyad
