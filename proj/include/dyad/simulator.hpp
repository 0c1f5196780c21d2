#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dyad/features.hpp"
#include "dyad/fusion.hpp"
#include "dyad/geometry.hpp"
#include "dyad/taxonomy.hpp"

namespace dyad {

struct NoiseConfig {
  double force_sigma_n = 0.3;
  double torque_sigma_nm = 0.03;
  double accel_sigma_mps2 = 0.2;
  double gyro_sigma_rps = 0.01;
  double gyro_bias_sigma_rps = 0.005;
  double camera_pos_sigma_m = 0.01;
  double camera_yaw_sigma_rad = 0.01;
  double camera_rate_hz = 20.0;
  double camera_dropout_rate = 0.02;
  double camera_gap_duration_s = 0.4;

  static NoiseConfig zero();
  void validate() const;
};

struct SceneConfig {
  PhysicalObject object;
  GoalLayout layout = GoalLayout::standard_three();
  Vec2 start_position = Vec2::Zero();
  double start_yaw_rad = 0.0;
  double t_start_s = 1.0;          // go signal; no drive before it
  double duration_s = 10.0;
  double ft_rate_hz = 200.0;
  double imu_rate_hz = 100.0;
  double physics_rate_hz = 1000.0;
  double truth_rate_hz = 100.0;
  double linear_damping = 22.0;    // environment drag, stands in for unmodeled body dynamics
  double angular_damping = 1.2;
  double coulomb_force_n = 1.0;
  double coulomb_torque_nm = 0.05;
  double yaw_stiffness = 1.2;      // carriers twist the tray to face its velocity
  double yaw_damping = 0.5;
  double yaw_authority_nm = 0.7;   // steering couple the pair will apply at most
  double behavior_jitter = 1.0;    // scales all randomized policy timing
  NoiseConfig noise;

  void validate() const;
};

struct AgentPolicy {
  AgentGoal goal;
  double commitment = 1.0;             // (0,1]; hard goals pin this to 1
  double push_gain_n = 14.0;           // drive force cap
  double servo_band_mps = 0.3;         // velocity error that saturates the drive
  double target_speed_mps = 0.6;
  double approach_distance_m = 0.5;    // begin slowing inside this radius
  double stop_distance_m = 0.06;       // release the servo this close to the goal
  double load_droop_mps_per_n = 0.006; // backing off under load evens the split
  double reaction_delay_s = 0.25;
  double hesitation_mean_s = 0.0;
  double hesitation_jitter_s = 0.0;
  double attack_s = 0.15;
  double concession_threshold_ws = 2.5;   // +inf = never concede
  double concession_leak_s = 2.0;
  double concession_transition_s = 0.45;
  double opposition_floor_n = 2.0;
  double grasp_preload_n = 1.5;
  double walk_amplitude_n = 1.5;
  double walk_frequency_hz = 2.0;
  double walk_transverse_fraction = 0.7;
  double arm_damping = 2.0;            // passive drag each hand always applies

  void validate() const;
};

// Policy defaults for one side of a taxonomy cell.  Known-common-goal trials
// drop the hesitation entirely; soft goals hesitate longest and are the only
// ones that can concede.
AgentPolicy default_policy(const AgentGoal& goal, bool known_common_goal);

// Draws a concrete goal assignment realizing the requested cell.
GoalAssignment sample_assignment(InteractionType cell, int goal_count, std::mt19937_64& rng);

struct TruthEpoch {
  int agent = 1;
  double t_on_s = 0;
  double t_off_s = 0;
  int goal = -1;
};

struct TruthState {
  double t = 0;
  Vec2 position = Vec2::Zero();
  double yaw = 0;
  Vec2 velocity = Vec2::Zero();
  double wz = 0;
  Vec2 f1 = Vec2::Zero();
  Vec2 f2 = Vec2::Zero();
  double p1_w = 0;
  double p2_w = 0;
};

struct GroundTruth {
  InteractionType cell = InteractionType::NoGoalVsNoGoal;
  double t_start_s = 0;
  double duration_s = 0;
  std::vector<TruthEpoch> epochs;
  bool consensus = false;
  double consensus_time_s = -1;
  int settled_goal = -1;
  std::vector<TruthState> states;
  double energy_in_j = 0;     // work done through both handles
  double dissipation_j = 0;   // absorbed by the environment drag
  double delta_ke_j = 0;
};

struct SimulatedSession {
  RawStreams raw;
  GroundTruth truth;
};

SimulatedSession simulate(const SceneConfig& scene, const AgentPolicy& agent1,
                          const AgentPolicy& agent2, bool known_common_goal,
                          std::uint64_t seed);

struct CellRealization {
  AgentPolicy agent1;
  AgentPolicy agent2;
  bool kcg = false;
};

// Concrete assignment + default policies for a cell, reproducible from the
// session seed alone.
CellRealization realize_cell(const SceneConfig& scene, InteractionType cell, std::uint64_t seed);

SimulatedSession simulate_cell(const SceneConfig& scene, InteractionType cell,
                               std::uint64_t seed);

struct BatchRequest {
  InteractionType cell;
  int count = 0;
};

struct BatchSession {
  std::string id;
  InteractionType cell;
  std::uint64_t seed = 0;
};

// Session ids s0000, s0001, ... in request order; simulation runs in parallel
// but every session derives its own seed, so results do not depend on the
// schedule.
std::vector<BatchSession> plan_batch(const std::vector<BatchRequest>& requests,
                                     std::uint64_t seed);

}  // namespace dyad
