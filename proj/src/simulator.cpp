#include "dyad/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dyad {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double smoothstep01(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

double wrap_angle(double a) {
  a = std::fmod(a + M_PI, 2.0 * M_PI);
  if (a < 0) a += 2.0 * M_PI;
  return a - M_PI;
}

Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

Vec2 rotate(double yaw, const Vec2& v) {
  double c = std::cos(yaw), s = std::sin(yaw);
  return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

void check_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

}  // namespace

NoiseConfig NoiseConfig::zero() {
  NoiseConfig n;
  n.force_sigma_n = 0;
  n.torque_sigma_nm = 0;
  n.accel_sigma_mps2 = 0;
  n.gyro_sigma_rps = 0;
  n.gyro_bias_sigma_rps = 0;
  n.camera_pos_sigma_m = 0;
  n.camera_yaw_sigma_rad = 0;
  n.camera_dropout_rate = 0;
  n.camera_gap_duration_s = 0;
  return n;
}

void NoiseConfig::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be non-negative");
    }
  };
  nonneg(force_sigma_n, "force_sigma_n");
  nonneg(torque_sigma_nm, "torque_sigma_nm");
  nonneg(accel_sigma_mps2, "accel_sigma_mps2");
  nonneg(gyro_sigma_rps, "gyro_sigma_rps");
  nonneg(gyro_bias_sigma_rps, "gyro_bias_sigma_rps");
  nonneg(camera_pos_sigma_m, "camera_pos_sigma_m");
  nonneg(camera_yaw_sigma_rad, "camera_yaw_sigma_rad");
  nonneg(camera_gap_duration_s, "camera_gap_duration_s");
  check_positive(camera_rate_hz, "camera_rate_hz");
  if (camera_dropout_rate < 0 || camera_dropout_rate >= 1) {
    throw std::invalid_argument("camera_dropout_rate must lie in [0, 1)");
  }
}

void SceneConfig::validate() const {
  if (layout.count() < 1) throw std::invalid_argument("goal layout is empty");
  check_positive(object.mass_kg, "mass_kg");
  check_positive(t_start_s, "t_start_s");
  check_positive(duration_s, "duration_s");
  if (duration_s <= t_start_s) throw std::invalid_argument("duration_s must exceed t_start_s");
  check_positive(ft_rate_hz, "ft_rate_hz");
  check_positive(imu_rate_hz, "imu_rate_hz");
  check_positive(physics_rate_hz, "physics_rate_hz");
  check_positive(truth_rate_hz, "truth_rate_hz");
  if (linear_damping < 0 || angular_damping < 0 || coulomb_force_n < 0 ||
      coulomb_torque_nm < 0 || yaw_stiffness < 0 || yaw_damping < 0 ||
      yaw_authority_nm < 0 || behavior_jitter < 0) {
    throw std::invalid_argument("scene damping and jitter terms must be non-negative");
  }
  auto divides = [&](double rate, const char* name) {
    double ratio = physics_rate_hz / rate;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1) {
      throw std::invalid_argument(std::string(name) + " must divide physics_rate_hz");
    }
  };
  divides(ft_rate_hz, "ft_rate_hz");
  divides(imu_rate_hz, "imu_rate_hz");
  divides(truth_rate_hz, "truth_rate_hz");
  divides(noise.camera_rate_hz, "camera_rate_hz");
  noise.validate();
}

void AgentPolicy::validate() const {
  if (!(commitment > 0) || commitment > 1) {
    throw std::invalid_argument("commitment must lie in (0, 1]");
  }
  if (goal.commitment == Commitment::Hard && commitment != 1.0) {
    throw std::invalid_argument("hard goals require commitment = 1");
  }
  if (goal.commitment == Commitment::Hard && std::isfinite(concession_threshold_ws)) {
    throw std::invalid_argument("hard goals never concede");
  }
  check_positive(push_gain_n, "push_gain_n");
  check_positive(servo_band_mps, "servo_band_mps");
  check_positive(target_speed_mps, "target_speed_mps");
  check_positive(approach_distance_m, "approach_distance_m");
  check_positive(attack_s, "attack_s");
  check_positive(concession_leak_s, "concession_leak_s");
  check_positive(concession_transition_s, "concession_transition_s");
  if (reaction_delay_s < 0 || hesitation_mean_s < 0 || hesitation_jitter_s < 0 ||
      opposition_floor_n < 0 || grasp_preload_n < 0 || walk_amplitude_n < 0 ||
      arm_damping < 0 || stop_distance_m < 0 || load_droop_mps_per_n < 0) {
    throw std::invalid_argument("policy delays, floors and amplitudes must be non-negative");
  }
  if (stop_distance_m >= approach_distance_m) {
    throw std::invalid_argument("stop_distance_m must be smaller than approach_distance_m");
  }
  if (!(concession_threshold_ws > 0)) {
    throw std::invalid_argument("concession_threshold_ws must be positive");
  }
  if (walk_transverse_fraction < 0 || walk_transverse_fraction > 1) {
    throw std::invalid_argument("walk_transverse_fraction must lie in [0, 1]");
  }
  check_positive(walk_frequency_hz, "walk_frequency_hz");
}

AgentPolicy default_policy(const AgentGoal& goal, bool known_common_goal) {
  AgentPolicy p;
  p.goal = goal;
  switch (goal.commitment) {
    case Commitment::NoGoal:
      p.concession_threshold_ws = kInf;
      p.hesitation_mean_s = 0;
      p.hesitation_jitter_s = 0;
      break;
    case Commitment::Hard:
      p.commitment = 1.0;
      p.concession_threshold_ws = kInf;
      p.hesitation_mean_s = known_common_goal ? 0.0 : 0.2;
      p.hesitation_jitter_s = known_common_goal ? 0.02 : 0.08;
      break;
    case Commitment::Soft:
      p.commitment = 0.8;
      p.hesitation_mean_s = 0.45;
      p.hesitation_jitter_s = 0.12;
      break;
  }
  return p;
}

GoalAssignment sample_assignment(InteractionType cell, int goal_count, std::mt19937_64& rng) {
  if (goal_count < 1) throw std::invalid_argument("goal_count must be positive");
  auto pick = [&]() {
    return static_cast<int>(std::uniform_int_distribution<int>(0, goal_count - 1)(rng));
  };
  auto pick_other = [&](int not_this) {
    if (goal_count < 2) throw std::invalid_argument("conflicting cells need at least two goals");
    int g = static_cast<int>(std::uniform_int_distribution<int>(0, goal_count - 2)(rng));
    return g >= not_this ? g + 1 : g;
  };
  bool swap_roles = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
  GoalAssignment a;
  switch (cell) {
    case InteractionType::KCG: {
      int g = pick();
      a = {AgentGoal::hard(g), AgentGoal::hard(g)};
      swap_roles = false;
      break;
    }
    case InteractionType::NoGoalVsNoGoal:
      a = {AgentGoal::none(), AgentGoal::none()};
      swap_roles = false;
      break;
    case InteractionType::NoGoalVsSoft:
      a = {AgentGoal::none(), AgentGoal::soft(pick())};
      break;
    case InteractionType::NoGoalVsHard:
      a = {AgentGoal::none(), AgentGoal::hard(pick())};
      break;
    case InteractionType::NonConflictingHH: {
      int g = pick();
      a = {AgentGoal::hard(g), AgentGoal::hard(g)};
      swap_roles = false;
      break;
    }
    case InteractionType::NonConflictingHS: {
      int g = pick();
      a = {AgentGoal::hard(g), AgentGoal::soft(g)};
      break;
    }
    case InteractionType::NonConflictingSS: {
      int g = pick();
      a = {AgentGoal::soft(g), AgentGoal::soft(g)};
      swap_roles = false;
      break;
    }
    case InteractionType::ConflictingHS: {
      int g = pick();
      a = {AgentGoal::hard(g), AgentGoal::soft(pick_other(g))};
      break;
    }
    case InteractionType::ConflictingSS: {
      int g = pick();
      a = {AgentGoal::soft(g), AgentGoal::soft(pick_other(g))};
      break;
    }
    case InteractionType::ConflictingHH: {
      int g = pick();
      a = {AgentGoal::hard(g), AgentGoal::hard(pick_other(g))};
      break;
    }
    default:
      throw std::invalid_argument("cell cannot be realized by an assignment");
  }
  if (swap_roles) std::swap(a.agent1, a.agent2);
  return a;
}

namespace {

struct AgentRuntime {
  enum class Mode { Wait, Drive, Yield, Execute };

  const AgentPolicy* pol = nullptr;
  int id = 1;
  Vec2 handle_body = Vec2::Zero();
  double onset = kInf;
  double threshold = kInf;
  double walk_phase_long = 0;
  double walk_phase_trans = 0;

  Mode mode = Mode::Wait;
  int goal = -1;
  double drive_begin = 0;
  double yield_begin = 0;
  double yield_until = 0;
  Vec2 release_from = Vec2::Zero();
  double opposition = 0;
  bool committed = false;

  Vec2 drive_force = Vec2::Zero();

  bool driving() const { return mode == Mode::Drive || mode == Mode::Execute; }
};

struct EpochTracker {
  int agent = 1;
  bool open = false;
  double t_on = 0;
  double last_active = 0;
  int goal = -1;
  double bridge_s = 0.25;
  double min_length_s = 0.2;

  void update(double t, bool active, int goal_now, std::vector<TruthEpoch>& out) {
    if (active) {
      if (open && goal_now != goal) close(out);
      if (!open) {
        open = true;
        t_on = t;
        goal = goal_now;
      }
      last_active = t;
    } else if (open && t - last_active > bridge_s) {
      close(out);
    }
  }

  void close(std::vector<TruthEpoch>& out) {
    if (open && last_active - t_on >= min_length_s) {
      out.push_back({agent, t_on, last_active, goal});
    }
    open = false;
  }
};

Vec2 drive_force_for(const AgentRuntime& a, double t, const Vec2& p, const Vec2& v,
                     const GoalLayout& layout) {
  const AgentPolicy& pol = *a.pol;
  if (a.mode == AgentRuntime::Mode::Yield) {
    double x = (t - a.yield_begin) / pol.attack_s;
    if (x >= 1.0) return Vec2::Zero();
    return a.release_from * (1.0 - smoothstep01(x));
  }
  if (!a.driving()) return Vec2::Zero();
  Vec2 d = layout.goals[static_cast<size_t>(a.goal)] - p;
  double dist = d.norm();
  Vec2 v_des = Vec2::Zero();
  if (dist > pol.stop_distance_m) {
    double run = (dist - pol.stop_distance_m) / pol.approach_distance_m;
    v_des = pol.target_speed_mps * std::min(1.0, run) * (d / dist);
  }
  // Droop on own effort: two stiff servos on one handle would otherwise
  // settle on an arbitrary force split.
  v_des -= pol.load_droop_mps_per_n * a.drive_force;
  Vec2 f = (pol.push_gain_n / pol.servo_band_mps) * (v_des - v);
  double mag = f.norm();
  if (mag > pol.push_gain_n) f *= pol.push_gain_n / mag;
  return smoothstep01((t - a.drive_begin) / pol.attack_s) * f;
}

}  // namespace

SimulatedSession simulate(const SceneConfig& scene, const AgentPolicy& agent1,
                          const AgentPolicy& agent2, bool known_common_goal,
                          std::uint64_t seed) {
  scene.validate();
  agent1.validate();
  agent2.validate();
  GoalAssignment assignment{agent1.goal, agent2.goal};
  assignment.validate(scene.layout);
  if (known_common_goal &&
      (agent1.goal.commitment != Commitment::Hard || agent2.goal.commitment != Commitment::Hard ||
       agent1.goal.goal != agent2.goal.goal)) {
    throw std::invalid_argument("known common goal requires identical hard goals");
  }

  const double dt = 1.0 / scene.physics_rate_hz;
  const auto total_steps = static_cast<long long>(std::llround(scene.duration_s * scene.physics_rate_hz));
  const auto every = [&](double rate) {
    return static_cast<long long>(std::llround(scene.physics_rate_hz / rate));
  };
  const long long ft_every = every(scene.ft_rate_hz);
  const long long imu_every = every(scene.imu_rate_hz);
  const long long cam_every = every(scene.noise.camera_rate_hz);
  const long long truth_every = every(scene.truth_rate_hz);

  std::mt19937_64 policy_rng(derive_seed(seed, 1));
  std::mt19937_64 ft1_rng(derive_seed(seed, 2));
  std::mt19937_64 ft2_rng(derive_seed(seed, 3));
  std::mt19937_64 imu_rng(derive_seed(seed, 4));
  std::mt19937_64 cam_rng(derive_seed(seed, 5));
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit_uniform(0.0, 1.0);

  AgentRuntime agents[2];
  const AgentPolicy* policies[2] = {&agent1, &agent2};
  for (int k = 0; k < 2; ++k) {
    AgentRuntime& a = agents[k];
    a.pol = policies[k];
    a.id = k + 1;
    Vec3 h = k == 0 ? scene.object.handles.q1 : scene.object.handles.q2;
    a.handle_body = Vec2(h.x(), h.y());
    double hes = a.pol->hesitation_mean_s +
                 (2.0 * unit_uniform(policy_rng) - 1.0) * a.pol->hesitation_jitter_s *
                     scene.behavior_jitter;
    hes = std::max(0.0, hes);
    double thr_jitter = (2.0 * unit_uniform(policy_rng) - 1.0) * 0.1 * scene.behavior_jitter;
    a.walk_phase_long = 2.0 * M_PI * unit_uniform(policy_rng);
    a.walk_phase_trans = 2.0 * M_PI * unit_uniform(policy_rng);
    if (a.pol->goal.has_goal()) {
      a.onset = scene.t_start_s + a.pol->reaction_delay_s + hes;
      a.threshold = std::isfinite(a.pol->concession_threshold_ws)
                        ? a.pol->concession_threshold_ws * a.pol->commitment * (1.0 + thr_jitter)
                        : kInf;
    }
    a.committed = a.pol->goal.commitment == Commitment::Hard || known_common_goal;
  }

  Vec3 gyro_bias(scene.noise.gyro_bias_sigma_rps * unit_normal(imu_rng),
                 scene.noise.gyro_bias_sigma_rps * unit_normal(imu_rng),
                 scene.noise.gyro_bias_sigma_rps * unit_normal(imu_rng));
  double gap_begin = kInf;
  if (scene.noise.camera_gap_duration_s > 0) {
    gap_begin = (0.3 + 0.3 * unit_uniform(cam_rng)) * scene.duration_s;
  }

  const double mass = scene.object.mass_kg;
  const double inertia = scene.object.yaw_inertia();
  Vec2 p = scene.start_position;
  double yaw = scene.start_yaw_rad;
  Vec2 v = Vec2::Zero();
  double w = 0;

  SimulatedSession out;
  out.truth.cell = interaction_type(assignment, known_common_goal);
  out.truth.t_start_s = scene.t_start_s;
  out.truth.duration_s = scene.duration_s;
  out.raw.ft1.reserve(static_cast<size_t>(total_steps / ft_every) + 2);
  out.raw.ft2.reserve(static_cast<size_t>(total_steps / ft_every) + 2);
  out.raw.imu.reserve(static_cast<size_t>(total_steps / imu_every) + 2);
  out.truth.states.reserve(static_cast<size_t>(total_steps / truth_every) + 2);

  EpochTracker trackers[2];
  trackers[0].agent = 1;
  trackers[1].agent = 2;
  const double leak = std::exp(-dt / agents[0].pol->concession_leak_s);

  // Intent-level consensus record, kept apart from the power-gated epochs:
  // when each push was commanded and when a conceded push finished releasing.
  std::vector<std::pair<double, int>> drive_starts[2];
  double release_end[2] = {-1.0, -1.0};
  int conceded_goal[2] = {-1, -1};

  for (long long n = 0; n <= total_steps; ++n) {
    const double t = static_cast<double>(n) / scene.physics_rate_hz;

    for (int k = 0; k < 2; ++k) {
      AgentRuntime& a = agents[k];
      AgentRuntime& b = agents[1 - k];
      if (a.mode == AgentRuntime::Mode::Wait && a.pol->goal.has_goal() && t >= a.onset) {
        a.mode = a.committed ? AgentRuntime::Mode::Execute : AgentRuntime::Mode::Drive;
        a.goal = a.pol->goal.goal;
        a.drive_begin = t;
        drive_starts[k].emplace_back(t, a.goal);
      }
      if (a.mode == AgentRuntime::Mode::Yield && t >= a.yield_until) {
        if (b.driving() && b.goal >= 0) {
          a.mode = AgentRuntime::Mode::Execute;
          a.goal = b.goal;
          a.drive_begin = t;
          a.committed = true;
          drive_starts[k].emplace_back(t, a.goal);
        }
        // partner idle: stay a follower
      }
    }

    for (auto& a : agents) a.drive_force = drive_force_for(a, t, p, v, scene.layout);

    for (int k = 0; k < 2; ++k) {
      AgentRuntime& a = agents[k];
      const AgentRuntime& b = agents[1 - k];
      if (a.mode != AgentRuntime::Mode::Drive || a.committed || !std::isfinite(a.threshold)) {
        continue;
      }
      double mine = a.drive_force.norm();
      if (mine > 1.0) {
        double antagonism = std::max(0.0, -b.drive_force.dot(a.drive_force / mine));
        if (antagonism > a.pol->opposition_floor_n) {
          a.opposition += antagonism * std::max(v.norm(), 0.05) * dt;
        }
      }
      a.opposition *= leak;
      // Conceding only makes sense against a partner still pushing somewhere
      // else; once the partner yields or adopts our goal, the standoff is over.
      const bool opposed = b.driving() && b.goal >= 0 && b.goal != a.goal;
      if (opposed && a.opposition > a.threshold) {
        conceded_goal[k] = a.goal;
        release_end[k] = t + a.pol->attack_s;
        a.mode = AgentRuntime::Mode::Yield;
        a.yield_begin = t;
        a.yield_until = t + a.pol->concession_transition_s;
        a.release_from = a.drive_force;
        a.goal = -1;
      }
    }

    const Vec2 xhat = rotate(yaw, Vec2(1, 0));
    const double preload_ramp = smoothstep01(t / 0.3);
    const Vec2 r1 = rotate(yaw, agents[0].handle_body);
    const Vec2 r2 = rotate(yaw, agents[1].handle_body);
    const Vec2 rs[2] = {r1, r2};

    double tau_des = -scene.yaw_damping * w;
    if (v.norm() > 0.15) {
      double heading = std::atan2(v.y(), v.x());
      tau_des += scene.yaw_stiffness * wrap_angle(heading - (yaw + M_PI / 2.0));
    }
    tau_des = std::clamp(tau_des, -scene.yaw_authority_nm, scene.yaw_authority_nm);

    Vec2 forces[2];
    for (int k = 0; k < 2; ++k) {
      AgentRuntime& a = agents[k];
      const AgentPolicy& pol = *a.pol;
      Vec2 v_handle = v + w * perp(rs[k]);
      Vec2 f = a.drive_force;
      f += -pol.arm_damping * v_handle;
      f += (k == 0 ? -1.0 : 1.0) * pol.grasp_preload_n * preload_ramp * xhat;
      double speed = v.norm();
      double gate = std::clamp(speed / 0.3, 0.0, 1.0);
      if (gate > 0) {
        Vec2 lon = speed > 0.05 ? Vec2(v / speed)
                                : (a.driving() && a.drive_force.norm() > 1e-9
                                       ? Vec2(a.drive_force.normalized())
                                       : Vec2::Zero());
        if (lon.squaredNorm() > 0.5) {
          double omega = 2.0 * M_PI * pol.walk_frequency_hz;
          f += gate * pol.walk_amplitude_n *
               ((1.0 - pol.walk_transverse_fraction) * std::sin(omega * t + a.walk_phase_long) * lon +
                pol.walk_transverse_fraction * std::sin(omega * t + a.walk_phase_trans) * perp(lon));
        }
      }
      double rr = rs[k].squaredNorm();
      if (rr > 1e-12) f += (tau_des / (2.0 * rr)) * perp(rs[k]);
      forces[k] = f;
    }

    const Vec2 f_sum = forces[0] + forces[1];
    const double tau_agents = cross2(r1, forces[0]) + cross2(r2, forces[1]);
    const double speed = v.norm();
    const Vec2 f_env = -scene.linear_damping * v -
                       (speed > 1e-12
                            ? Vec2(scene.coulomb_force_n * std::tanh(speed / 0.01) * (v / speed))
                            : Vec2::Zero());
    const double tau_env =
        -scene.angular_damping * w - scene.coulomb_torque_nm * std::tanh(w / 0.01);
    const Vec2 accel = (f_sum + f_env) / mass;

    for (int k = 0; k < 2; ++k) {
      // A push counts while it moves the load, not while the agent merely
      // leans on a parked handle; power is what the segmenter can observe.
      const double handle_power = forces[k].dot(v + w * perp(rs[k]));
      const bool pushing = agents[k].driving() &&
                           agents[k].drive_force.norm() >= 1.0 &&
                           std::abs(handle_power) >= 0.5;
      trackers[k].update(t, pushing, agents[k].goal, out.truth.epochs);
    }

    if (n % truth_every == 0) {
      TruthState st;
      st.t = t;
      st.position = p;
      st.yaw = yaw;
      st.velocity = v;
      st.wz = w;
      st.f1 = forces[0];
      st.f2 = forces[1];
      st.p1_w = forces[0].dot(v + w * perp(r1));
      st.p2_w = forces[1].dot(v + w * perp(r2));
      out.truth.states.push_back(st);
    }
    if (n % ft_every == 0) {
      for (int k = 0; k < 2; ++k) {
        Vec2 f_body = rotate(-yaw, forces[k]);
        auto& rng = k == 0 ? ft1_rng : ft2_rng;
        WrenchSample ws;
        ws.t = t;
        ws.force = Vec3(f_body.x() + scene.noise.force_sigma_n * unit_normal(rng),
                        f_body.y() + scene.noise.force_sigma_n * unit_normal(rng),
                        scene.noise.force_sigma_n * unit_normal(rng));
        ws.torque = Vec3(scene.noise.torque_sigma_nm * unit_normal(rng),
                         scene.noise.torque_sigma_nm * unit_normal(rng),
                         scene.noise.torque_sigma_nm * unit_normal(rng));
        (k == 0 ? out.raw.ft1 : out.raw.ft2).push_back(ws);
      }
    }
    if (n % imu_every == 0) {
      Vec2 spec_body = rotate(-yaw, accel);
      ImuSample s;
      s.t = t;
      s.accel = Vec3(spec_body.x() + scene.noise.accel_sigma_mps2 * unit_normal(imu_rng),
                     spec_body.y() + scene.noise.accel_sigma_mps2 * unit_normal(imu_rng),
                     9.80665 + scene.noise.accel_sigma_mps2 * unit_normal(imu_rng));
      s.gyro = Vec3(gyro_bias.x() + scene.noise.gyro_sigma_rps * unit_normal(imu_rng),
                    gyro_bias.y() + scene.noise.gyro_sigma_rps * unit_normal(imu_rng),
                    w + gyro_bias.z() + scene.noise.gyro_sigma_rps * unit_normal(imu_rng));
      out.raw.imu.push_back(s);
    }
    if (n % cam_every == 0) {
      bool dropped = unit_uniform(cam_rng) < scene.noise.camera_dropout_rate;
      bool in_gap = t >= gap_begin && t < gap_begin + scene.noise.camera_gap_duration_s;
      if (!dropped && !in_gap) {
        PoseObservation obs;
        obs.t = t;
        obs.camera_id = static_cast<int>((n / cam_every) % 2);
        obs.position = Vec3(p.x() + scene.noise.camera_pos_sigma_m * unit_normal(cam_rng),
                            p.y() + scene.noise.camera_pos_sigma_m * unit_normal(cam_rng),
                            scene.noise.camera_pos_sigma_m * unit_normal(cam_rng));
        obs.orientation =
            yaw_quat(yaw + scene.noise.camera_yaw_sigma_rad * unit_normal(cam_rng));
        out.raw.pose_obs.push_back(obs);
      }
    }

    if (n == total_steps) break;

    Vec2 v_new = v + dt * accel;
    double w_new = w + dt * (tau_agents + tau_env) / inertia;
    Vec2 v_mid = 0.5 * (v + v_new);
    double w_mid = 0.5 * (w + w_new);
    out.truth.energy_in_j += dt * (f_sum.dot(v_mid) + tau_agents * w_mid);
    out.truth.dissipation_j -= dt * (f_env.dot(v_mid) + tau_env * w_mid);
    v = v_new;
    w = w_new;
    p += dt * v;
    yaw += dt * w;
  }

  for (int k = 0; k < 2; ++k) trackers[k].close(out.truth.epochs);
  std::sort(out.truth.epochs.begin(), out.truth.epochs.end(),
            [](const TruthEpoch& a, const TruthEpoch& b) {
              return a.t_on_s != b.t_on_s ? a.t_on_s < b.t_on_s : a.agent < b.agent;
            });
  out.truth.delta_ke_j = 0.5 * mass * v.squaredNorm() + 0.5 * inertia * w * w;

  // Consensus forms once every commanded push targets one goal: it is dated
  // to the first push toward that goal, or to the moment the last opposing
  // push finished releasing, whichever is later.
  const int end_goal[2] = {agents[0].driving() ? agents[0].goal : -1,
                           agents[1].driving() ? agents[1].goal : -1};
  const bool clash = end_goal[0] >= 0 && end_goal[1] >= 0 && end_goal[0] != end_goal[1];
  const int candidate = clash ? -1 : std::max(end_goal[0], end_goal[1]);
  if (candidate >= 0) {
    double first_onset = kInf;
    double opposition_end = 0;
    for (int k = 0; k < 2; ++k) {
      for (const auto& [t0, g] : drive_starts[k]) {
        if (g == candidate) first_onset = std::min(first_onset, t0);
      }
      if (conceded_goal[k] >= 0 && conceded_goal[k] != candidate) {
        opposition_end = std::max(opposition_end, release_end[k]);
      }
    }
    Vec2 goal_pos = scene.layout.goals[static_cast<size_t>(candidate)];
    bool arrived = (p - goal_pos).norm() <= 0.3;
    if (std::isfinite(first_onset) && arrived) {
      out.truth.consensus = true;
      out.truth.settled_goal = candidate;
      out.truth.consensus_time_s = std::max(first_onset, opposition_end);
    }
  }
  return out;
}

CellRealization realize_cell(const SceneConfig& scene, InteractionType cell, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seed(seed, 0));
  GoalAssignment a = sample_assignment(cell, scene.layout.count(), rng);
  bool kcg = cell == InteractionType::KCG;
  return {default_policy(a.agent1, kcg), default_policy(a.agent2, kcg), kcg};
}

SimulatedSession simulate_cell(const SceneConfig& scene, InteractionType cell,
                               std::uint64_t seed) {
  CellRealization r = realize_cell(scene, cell, seed);
  return simulate(scene, r.agent1, r.agent2, r.kcg, seed);
}

std::vector<BatchSession> plan_batch(const std::vector<BatchRequest>& requests,
                                     std::uint64_t seed) {
  std::vector<BatchSession> plan;
  long long index = 0;
  for (const auto& req : requests) {
    if (req.count < 0) throw std::invalid_argument("batch count must be non-negative");
    for (int i = 0; i < req.count; ++i, ++index) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "s%04lld", index);
      plan.push_back({buf, req.cell, derive_seed(seed, static_cast<std::uint64_t>(index))});
    }
  }
  return plan;
}

}  // namespace dyad
