#include "dyad/session_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "dyad/csv.hpp"
#include "json.hpp"

namespace dyad {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string num(double v) { return to_shortest(v); }

void check_schema_version(long long version, const std::string& where) {
  if (version != kSchemaVersion) {
    throw DataError(where + ": unsupported schema_version " + std::to_string(version));
  }
}

void write_policy_section(Config& cfg, const std::string& section, const AgentPolicy& p) {
  cfg.set(section, "commitment", std::string(commitment_token(p.goal.commitment)));
  cfg.set_int(section, "goal", goal_to_file(p.goal.goal));
  cfg.set_double(section, "commitment_scalar", p.commitment);
  cfg.set_double(section, "push_gain_n", p.push_gain_n);
  cfg.set_double(section, "servo_band_mps", p.servo_band_mps);
  cfg.set_double(section, "target_speed_mps", p.target_speed_mps);
  cfg.set_double(section, "approach_distance_m", p.approach_distance_m);
  cfg.set_double(section, "stop_distance_m", p.stop_distance_m);
  cfg.set_double(section, "load_droop_mps_per_n", p.load_droop_mps_per_n);
  cfg.set_double(section, "reaction_delay_s", p.reaction_delay_s);
  cfg.set_double(section, "hesitation_mean_s", p.hesitation_mean_s);
  cfg.set_double(section, "hesitation_jitter_s", p.hesitation_jitter_s);
  cfg.set_double(section, "attack_s", p.attack_s);
  cfg.set_double(section, "concession_threshold_ws", p.concession_threshold_ws);
  cfg.set_double(section, "concession_leak_s", p.concession_leak_s);
  cfg.set_double(section, "concession_transition_s", p.concession_transition_s);
  cfg.set_double(section, "opposition_floor_n", p.opposition_floor_n);
  cfg.set_double(section, "grasp_preload_n", p.grasp_preload_n);
  cfg.set_double(section, "walk_amplitude_n", p.walk_amplitude_n);
  cfg.set_double(section, "walk_frequency_hz", p.walk_frequency_hz);
  cfg.set_double(section, "walk_transverse_fraction", p.walk_transverse_fraction);
  cfg.set_double(section, "arm_damping", p.arm_damping);
}

AgentPolicy read_policy_section(const Config& cfg, const std::string& section, int goal_count) {
  AgentPolicy base;
  AgentPolicy p;
  Commitment c = commitment_from_token(cfg.require_string(section, "commitment"));
  int goal = goal_from_file(cfg.require_int(section, "goal"), goal_count, section + ".goal");
  switch (c) {
    case Commitment::NoGoal:
      p.goal = AgentGoal::none();
      break;
    case Commitment::Soft:
      p.goal = AgentGoal::soft(goal);
      break;
    case Commitment::Hard:
      p.goal = AgentGoal::hard(goal);
      break;
  }
  p.commitment = cfg.get_double(section, "commitment_scalar", base.commitment);
  p.push_gain_n = cfg.get_double(section, "push_gain_n", base.push_gain_n);
  p.servo_band_mps = cfg.get_double(section, "servo_band_mps", base.servo_band_mps);
  p.target_speed_mps = cfg.get_double(section, "target_speed_mps", base.target_speed_mps);
  p.approach_distance_m = cfg.get_double(section, "approach_distance_m", base.approach_distance_m);
  p.reaction_delay_s = cfg.get_double(section, "reaction_delay_s", base.reaction_delay_s);
  p.hesitation_mean_s = cfg.get_double(section, "hesitation_mean_s", base.hesitation_mean_s);
  p.hesitation_jitter_s =
      cfg.get_double(section, "hesitation_jitter_s", base.hesitation_jitter_s);
  p.stop_distance_m = cfg.get_double(section, "stop_distance_m", base.stop_distance_m);
  p.load_droop_mps_per_n =
      cfg.get_double(section, "load_droop_mps_per_n", base.load_droop_mps_per_n);
  p.attack_s = cfg.get_double(section, "attack_s", base.attack_s);
  p.concession_threshold_ws =
      cfg.get_double(section, "concession_threshold_ws", base.concession_threshold_ws);
  p.concession_leak_s = cfg.get_double(section, "concession_leak_s", base.concession_leak_s);
  p.concession_transition_s =
      cfg.get_double(section, "concession_transition_s", base.concession_transition_s);
  p.opposition_floor_n = cfg.get_double(section, "opposition_floor_n", base.opposition_floor_n);
  p.grasp_preload_n = cfg.get_double(section, "grasp_preload_n", base.grasp_preload_n);
  p.walk_amplitude_n = cfg.get_double(section, "walk_amplitude_n", base.walk_amplitude_n);
  p.walk_frequency_hz = cfg.get_double(section, "walk_frequency_hz", base.walk_frequency_hz);
  p.walk_transverse_fraction =
      cfg.get_double(section, "walk_transverse_fraction", base.walk_transverse_fraction);
  p.arm_damping = cfg.get_double(section, "arm_damping", base.arm_damping);
  return p;
}

Config manifest_config(const SceneConfig& scene, const AgentPolicy& agent1,
                       const AgentPolicy& agent2, bool kcg, std::uint64_t seed,
                       const std::string& session_id, const GroundTruth& truth) {
  Config cfg;
  cfg.set_int("session", "schema_version", kSchemaVersion);
  cfg.set("session", "id", session_id);
  cfg.set("session", "cell", std::string(interaction_token(truth.cell)));
  cfg.set_bool("session", "kcg", kcg);
  cfg.set_uint64("session", "seed", seed);
  cfg.set("session", "agent1_commitment", std::string(commitment_token(agent1.goal.commitment)));
  cfg.set_int("session", "agent1_goal", goal_to_file(agent1.goal.goal));
  cfg.set("session", "agent2_commitment", std::string(commitment_token(agent2.goal.commitment)));
  cfg.set_int("session", "agent2_goal", goal_to_file(agent2.goal.goal));
  cfg.set("session", "t_start_s", format_time(scene.t_start_s));
  cfg.set("session", "duration_s", format_time(scene.duration_s));
  cfg.set_bool("session", "consensus", truth.consensus);
  cfg.set("session", "consensus_time_s", format_time(truth.consensus_time_s));
  cfg.set_int("session", "settled_goal", goal_to_file(truth.settled_goal));

  cfg.set_double("scene", "mass_kg", scene.object.mass_kg);
  cfg.set_double("scene", "length_m", scene.object.dimensions_m.x());
  cfg.set_double("scene", "width_m", scene.object.dimensions_m.y());
  cfg.set_double("scene", "handle_offset_m", scene.object.handles.q1.x());
  cfg.set_double("scene", "start_x_m", scene.start_position.x());
  cfg.set_double("scene", "start_y_m", scene.start_position.y());
  cfg.set_double("scene", "start_yaw_rad", scene.start_yaw_rad);
  cfg.set_double("scene", "ft_rate_hz", scene.ft_rate_hz);
  cfg.set_double("scene", "imu_rate_hz", scene.imu_rate_hz);
  cfg.set_double("scene", "physics_rate_hz", scene.physics_rate_hz);
  cfg.set_double("scene", "truth_rate_hz", scene.truth_rate_hz);
  cfg.set_double("scene", "linear_damping", scene.linear_damping);
  cfg.set_double("scene", "angular_damping", scene.angular_damping);
  cfg.set_double("scene", "coulomb_force_n", scene.coulomb_force_n);
  cfg.set_double("scene", "coulomb_torque_nm", scene.coulomb_torque_nm);
  cfg.set_double("scene", "yaw_stiffness", scene.yaw_stiffness);
  cfg.set_double("scene", "yaw_damping", scene.yaw_damping);
  cfg.set_double("scene", "yaw_authority_nm", scene.yaw_authority_nm);
  cfg.set_double("scene", "behavior_jitter", scene.behavior_jitter);
  cfg.set_int("scene", "goal_count", scene.layout.count());
  for (int i = 0; i < scene.layout.count(); ++i) {
    std::string base = "goal" + std::to_string(i + 1);
    cfg.set_double("scene", base + "_x_m", scene.layout.goals[static_cast<size_t>(i)].x());
    cfg.set_double("scene", base + "_y_m", scene.layout.goals[static_cast<size_t>(i)].y());
  }

  cfg.set_double("noise", "force_sigma_n", scene.noise.force_sigma_n);
  cfg.set_double("noise", "torque_sigma_nm", scene.noise.torque_sigma_nm);
  cfg.set_double("noise", "accel_sigma_mps2", scene.noise.accel_sigma_mps2);
  cfg.set_double("noise", "gyro_sigma_rps", scene.noise.gyro_sigma_rps);
  cfg.set_double("noise", "gyro_bias_sigma_rps", scene.noise.gyro_bias_sigma_rps);
  cfg.set_double("noise", "camera_pos_sigma_m", scene.noise.camera_pos_sigma_m);
  cfg.set_double("noise", "camera_yaw_sigma_rad", scene.noise.camera_yaw_sigma_rad);
  cfg.set_double("noise", "camera_rate_hz", scene.noise.camera_rate_hz);
  cfg.set_double("noise", "camera_dropout_rate", scene.noise.camera_dropout_rate);
  cfg.set_double("noise", "camera_gap_duration_s", scene.noise.camera_gap_duration_s);

  write_policy_section(cfg, "agent1", agent1);
  write_policy_section(cfg, "agent2", agent2);
  return cfg;
}

}  // namespace

int goal_to_file(int goal) { return goal < 0 ? 0 : goal + 1; }

int goal_from_file(long long value, int goal_count, const std::string& context) {
  if (value == 0) return -1;
  if (value < 1 || value > goal_count) {
    throw DataError(context + ": goal index " + std::to_string(value) + " outside 1.." +
                    std::to_string(goal_count));
  }
  return static_cast<int>(value - 1);
}

void write_session(const std::string& dir, const SceneConfig& scene, const AgentPolicy& agent1,
                   const AgentPolicy& agent2, bool kcg, std::uint64_t seed,
                   const std::string& session_id, const SimulatedSession& session) {
  std::filesystem::create_directories(dir);
  SessionPaths paths(dir);

  manifest_config(scene, agent1, agent2, kcg, seed, session_id, session.truth)
      .write_file(paths.manifest());

  {
    CsvWriter w(paths.raw_ft(),
                {"t_s", "agent", "fx_N", "fy_N", "fz_N", "tx_Nm", "ty_Nm", "tz_Nm"});
    if (session.raw.ft1.size() != session.raw.ft2.size()) {
      throw DataError("handle force streams have mismatched lengths");
    }
    for (size_t i = 0; i < session.raw.ft1.size(); ++i) {
      for (int agent = 1; agent <= 2; ++agent) {
        const WrenchSample& s = agent == 1 ? session.raw.ft1[i] : session.raw.ft2[i];
        w.write_row({format_time(s.t), std::to_string(agent), num(s.force.x()),
                     num(s.force.y()), num(s.force.z()), num(s.torque.x()), num(s.torque.y()),
                     num(s.torque.z())});
      }
    }
    w.close();
  }
  {
    CsvWriter w(paths.raw_imu(),
                {"t_s", "ax_mps2", "ay_mps2", "az_mps2", "wx_rps", "wy_rps", "wz_rps"});
    for (const ImuSample& s : session.raw.imu) {
      w.write_row({format_time(s.t), num(s.accel.x()), num(s.accel.y()), num(s.accel.z()),
                   num(s.gyro.x()), num(s.gyro.y()), num(s.gyro.z())});
    }
    w.close();
  }
  {
    CsvWriter w(paths.raw_pose(),
                {"t_s", "camera_id", "px_m", "py_m", "pz_m", "qw", "qx", "qy", "qz"});
    for (const PoseObservation& s : session.raw.pose_obs) {
      w.write_row({format_time(s.t), std::to_string(s.camera_id), num(s.position.x()),
                   num(s.position.y()), num(s.position.z()), num(s.orientation.w()),
                   num(s.orientation.x()), num(s.orientation.y()), num(s.orientation.z())});
    }
    w.close();
  }
  {
    CsvWriter w(paths.truth(), {"agent", "t_on_s", "t_off_s", "goal"});
    for (const TruthEpoch& e : session.truth.epochs) {
      w.write_row({std::to_string(e.agent), format_time(e.t_on_s), format_time(e.t_off_s),
                   std::to_string(goal_to_file(e.goal))});
    }
    w.close();
  }
  {
    CsvWriter w(paths.truth_state(),
                {"t_s", "px_m", "py_m", "yaw_rad", "vx_mps", "vy_mps", "wz_rps", "f1x_N",
                 "f1y_N", "f2x_N", "f2y_N", "p1_W", "p2_W"});
    for (const TruthState& s : session.truth.states) {
      w.write_row({format_time(s.t), num(s.position.x()), num(s.position.y()), num(s.yaw),
                   num(s.velocity.x()), num(s.velocity.y()), num(s.wz), num(s.f1.x()),
                   num(s.f1.y()), num(s.f2.x()), num(s.f2.y()), num(s.p1_w), num(s.p2_w)});
    }
    w.close();
  }
}

SessionManifest read_manifest(const std::string& path) {
  Config cfg = Config::parse_file(path);
  SessionManifest m;
  long long version = cfg.require_int("session", "schema_version");
  check_schema_version(version, path);
  m.schema_version = static_cast<int>(version);
  m.id = cfg.require_string("session", "id");
  m.cell = interaction_from_token(cfg.require_string("session", "cell"));
  m.kcg = cfg.get_bool("session", "kcg", false);
  m.seed = cfg.get_uint64("session", "seed", 0);
  int goal_count = static_cast<int>(cfg.require_int("scene", "goal_count"));
  if (goal_count < 1) throw DataError(path + ": goal_count must be positive");
  m.layout.goals.clear();
  for (int i = 0; i < goal_count; ++i) {
    std::string base = "goal" + std::to_string(i + 1);
    m.layout.goals.emplace_back(cfg.require_double("scene", base + "_x_m"),
                                cfg.require_double("scene", base + "_y_m"));
  }
  auto read_goal = [&](const std::string& key) {
    return goal_from_file(cfg.require_int("session", key), goal_count, path + ": " + key);
  };
  auto make_goal = [&](Commitment c, int idx) {
    switch (c) {
      case Commitment::NoGoal:
        return AgentGoal::none();
      case Commitment::Soft:
        return AgentGoal::soft(idx);
      case Commitment::Hard:
        return AgentGoal::hard(idx);
    }
    return AgentGoal::none();
  };
  m.assignment.agent1 = make_goal(
      commitment_from_token(cfg.require_string("session", "agent1_commitment")),
      read_goal("agent1_goal"));
  m.assignment.agent2 = make_goal(
      commitment_from_token(cfg.require_string("session", "agent2_commitment")),
      read_goal("agent2_goal"));
  m.t_start_s = cfg.require_double("session", "t_start_s");
  m.duration_s = cfg.require_double("session", "duration_s");
  m.consensus = cfg.get_bool("session", "consensus", false);
  m.consensus_time_s = cfg.get_double("session", "consensus_time_s", -1.0);
  m.settled_goal =
      goal_from_file(cfg.get_int("session", "settled_goal", 0), goal_count, path + ": settled_goal");
  m.ft_rate_hz = cfg.require_double("scene", "ft_rate_hz");
  m.imu_rate_hz = cfg.require_double("scene", "imu_rate_hz");
  m.camera_rate_hz = cfg.require_double("noise", "camera_rate_hz");
  return m;
}

SceneConfig scene_from_manifest(const std::string& path) {
  Config cfg = Config::parse_file(path);
  SceneConfig base;
  SceneConfig s;
  s.object.mass_kg = cfg.get_double("scene", "mass_kg", base.object.mass_kg);
  double length = cfg.get_double("scene", "length_m", base.object.dimensions_m.x());
  double width = cfg.get_double("scene", "width_m", base.object.dimensions_m.y());
  s.object.dimensions_m = Vec2(length, width);
  double offset = cfg.get_double("scene", "handle_offset_m", base.object.handles.q1.x());
  s.object.handles.q1 = Vec3(offset, 0, 0);
  s.object.handles.q2 = Vec3(-offset, 0, 0);
  int goal_count = static_cast<int>(cfg.require_int("scene", "goal_count"));
  s.layout.goals.clear();
  for (int i = 0; i < goal_count; ++i) {
    std::string key = "goal" + std::to_string(i + 1);
    s.layout.goals.emplace_back(cfg.require_double("scene", key + "_x_m"),
                                cfg.require_double("scene", key + "_y_m"));
  }
  s.start_position = Vec2(cfg.get_double("scene", "start_x_m", 0.0),
                          cfg.get_double("scene", "start_y_m", 0.0));
  s.start_yaw_rad = cfg.get_double("scene", "start_yaw_rad", 0.0);
  s.t_start_s = cfg.require_double("session", "t_start_s");
  s.duration_s = cfg.require_double("session", "duration_s");
  s.ft_rate_hz = cfg.get_double("scene", "ft_rate_hz", base.ft_rate_hz);
  s.imu_rate_hz = cfg.get_double("scene", "imu_rate_hz", base.imu_rate_hz);
  s.physics_rate_hz = cfg.get_double("scene", "physics_rate_hz", base.physics_rate_hz);
  s.truth_rate_hz = cfg.get_double("scene", "truth_rate_hz", base.truth_rate_hz);
  s.linear_damping = cfg.get_double("scene", "linear_damping", base.linear_damping);
  s.angular_damping = cfg.get_double("scene", "angular_damping", base.angular_damping);
  s.coulomb_force_n = cfg.get_double("scene", "coulomb_force_n", base.coulomb_force_n);
  s.coulomb_torque_nm = cfg.get_double("scene", "coulomb_torque_nm", base.coulomb_torque_nm);
  s.yaw_stiffness = cfg.get_double("scene", "yaw_stiffness", base.yaw_stiffness);
  s.yaw_damping = cfg.get_double("scene", "yaw_damping", base.yaw_damping);
  s.yaw_authority_nm = cfg.get_double("scene", "yaw_authority_nm", base.yaw_authority_nm);
  s.behavior_jitter = cfg.get_double("scene", "behavior_jitter", base.behavior_jitter);
  NoiseConfig nb;
  s.noise.force_sigma_n = cfg.get_double("noise", "force_sigma_n", nb.force_sigma_n);
  s.noise.torque_sigma_nm = cfg.get_double("noise", "torque_sigma_nm", nb.torque_sigma_nm);
  s.noise.accel_sigma_mps2 = cfg.get_double("noise", "accel_sigma_mps2", nb.accel_sigma_mps2);
  s.noise.gyro_sigma_rps = cfg.get_double("noise", "gyro_sigma_rps", nb.gyro_sigma_rps);
  s.noise.gyro_bias_sigma_rps =
      cfg.get_double("noise", "gyro_bias_sigma_rps", nb.gyro_bias_sigma_rps);
  s.noise.camera_pos_sigma_m =
      cfg.get_double("noise", "camera_pos_sigma_m", nb.camera_pos_sigma_m);
  s.noise.camera_yaw_sigma_rad =
      cfg.get_double("noise", "camera_yaw_sigma_rad", nb.camera_yaw_sigma_rad);
  s.noise.camera_rate_hz = cfg.get_double("noise", "camera_rate_hz", nb.camera_rate_hz);
  s.noise.camera_dropout_rate =
      cfg.get_double("noise", "camera_dropout_rate", nb.camera_dropout_rate);
  s.noise.camera_gap_duration_s =
      cfg.get_double("noise", "camera_gap_duration_s", nb.camera_gap_duration_s);
  s.validate();
  return s;
}

RawStreams read_raw_streams(const std::string& dir) {
  SessionPaths paths(dir);
  RawStreams raw;
  {
    CsvTable t = read_csv(paths.raw_ft());
    expect_columns(t, {"t_s", "agent", "fx_N", "fy_N", "fz_N", "tx_Nm", "ty_Nm", "tz_Nm"},
                   paths.raw_ft());
    for (const auto& row : t.rows) {
      WrenchSample s;
      s.t = parse_double(row[0], "raw_ft t_s");
      long long agent = parse_int(row[1], "raw_ft agent");
      s.force = Vec3(parse_double(row[2], "raw_ft fx_N"), parse_double(row[3], "raw_ft fy_N"),
                     parse_double(row[4], "raw_ft fz_N"));
      s.torque = Vec3(parse_double(row[5], "raw_ft tx_Nm"), parse_double(row[6], "raw_ft ty_Nm"),
                      parse_double(row[7], "raw_ft tz_Nm"));
      if (agent == 1) {
        raw.ft1.push_back(s);
      } else if (agent == 2) {
        raw.ft2.push_back(s);
      } else {
        throw DataError(paths.raw_ft() + ": agent must be 1 or 2");
      }
    }
  }
  {
    CsvTable t = read_csv(paths.raw_imu());
    expect_columns(t, {"t_s", "ax_mps2", "ay_mps2", "az_mps2", "wx_rps", "wy_rps", "wz_rps"},
                   paths.raw_imu());
    for (const auto& row : t.rows) {
      ImuSample s;
      s.t = parse_double(row[0], "raw_imu t_s");
      s.accel = Vec3(parse_double(row[1], "raw_imu ax"), parse_double(row[2], "raw_imu ay"),
                     parse_double(row[3], "raw_imu az"));
      s.gyro = Vec3(parse_double(row[4], "raw_imu wx"), parse_double(row[5], "raw_imu wy"),
                    parse_double(row[6], "raw_imu wz"));
      raw.imu.push_back(s);
    }
  }
  {
    CsvTable t = read_csv(paths.raw_pose());
    expect_columns(t, {"t_s", "camera_id", "px_m", "py_m", "pz_m", "qw", "qx", "qy", "qz"},
                   paths.raw_pose());
    for (const auto& row : t.rows) {
      PoseObservation s;
      s.t = parse_double(row[0], "raw_pose t_s");
      s.camera_id = static_cast<int>(parse_int(row[1], "raw_pose camera_id"));
      s.position = Vec3(parse_double(row[2], "raw_pose px"), parse_double(row[3], "raw_pose py"),
                        parse_double(row[4], "raw_pose pz"));
      s.orientation = Quat(parse_double(row[5], "raw_pose qw"), parse_double(row[6], "raw_pose qx"),
                           parse_double(row[7], "raw_pose qy"), parse_double(row[8], "raw_pose qz"));
      raw.pose_obs.push_back(s);
    }
  }
  return raw;
}

std::vector<TruthEpoch> read_truth_epochs(const std::string& path, int goal_count) {
  CsvTable t = read_csv(path);
  expect_columns(t, {"agent", "t_on_s", "t_off_s", "goal"}, path);
  std::vector<TruthEpoch> epochs;
  for (const auto& row : t.rows) {
    TruthEpoch e;
    e.agent = static_cast<int>(parse_int(row[0], "truth agent"));
    e.t_on_s = parse_double(row[1], "truth t_on_s");
    e.t_off_s = parse_double(row[2], "truth t_off_s");
    e.goal = goal_from_file(parse_int(row[3], "truth goal"), goal_count, path);
    epochs.push_back(e);
  }
  return epochs;
}

std::vector<TruthState> read_truth_states(const std::string& path) {
  CsvTable t = read_csv(path);
  expect_columns(t,
                 {"t_s", "px_m", "py_m", "yaw_rad", "vx_mps", "vy_mps", "wz_rps", "f1x_N",
                  "f1y_N", "f2x_N", "f2y_N", "p1_W", "p2_W"},
                 path);
  std::vector<TruthState> states;
  for (const auto& row : t.rows) {
    TruthState s;
    s.t = parse_double(row[0], "truth_state t_s");
    s.position = Vec2(parse_double(row[1], "px"), parse_double(row[2], "py"));
    s.yaw = parse_double(row[3], "yaw");
    s.velocity = Vec2(parse_double(row[4], "vx"), parse_double(row[5], "vy"));
    s.wz = parse_double(row[6], "wz");
    s.f1 = Vec2(parse_double(row[7], "f1x"), parse_double(row[8], "f1y"));
    s.f2 = Vec2(parse_double(row[9], "f2x"), parse_double(row[10], "f2y"));
    s.p1_w = parse_double(row[11], "p1");
    s.p2_w = parse_double(row[12], "p2");
    states.push_back(s);
  }
  return states;
}

void write_processed(const std::string& path, const std::vector<FusedState>& states) {
  CsvWriter w(path, {"t_s", "px_m", "py_m", "yaw_rad", "vx_mps", "vy_mps", "wz_rps", "f1x_N",
                     "f1y_N", "f2x_N", "f2y_N", "v1x_mps", "v1y_mps", "v2x_mps", "v2y_mps"});
  for (const FusedState& s : states) {
    w.write_row({format_time(s.t), num(s.pose.position.x()), num(s.pose.position.y()),
                 num(yaw_of(s.pose.orientation)), num(s.twist.linear.x()),
                 num(s.twist.linear.y()), num(s.twist.angular.z()), num(s.f1.x()), num(s.f1.y()),
                 num(s.f2.x()), num(s.f2.y()), num(s.v1.x()), num(s.v1.y()), num(s.v2.x()),
                 num(s.v2.y())});
  }
  w.close();
}

std::vector<FusedState> read_processed(const std::string& path) {
  CsvTable t = read_csv(path);
  expect_columns(t,
                 {"t_s", "px_m", "py_m", "yaw_rad", "vx_mps", "vy_mps", "wz_rps", "f1x_N",
                  "f1y_N", "f2x_N", "f2y_N", "v1x_mps", "v1y_mps", "v2x_mps", "v2y_mps"},
                 path);
  std::vector<FusedState> states;
  for (const auto& row : t.rows) {
    FusedState s;
    s.t = parse_double(row[0], "processed t_s");
    s.pose.position = Vec3(parse_double(row[1], "px"), parse_double(row[2], "py"), 0.0);
    s.pose.orientation = yaw_quat(parse_double(row[3], "yaw"));
    s.twist.linear = Vec3(parse_double(row[4], "vx"), parse_double(row[5], "vy"), 0.0);
    s.twist.angular = Vec3(0.0, 0.0, parse_double(row[6], "wz"));
    s.f1 = Vec3(parse_double(row[7], "f1x"), parse_double(row[8], "f1y"), 0.0);
    s.f2 = Vec3(parse_double(row[9], "f2x"), parse_double(row[10], "f2y"), 0.0);
    s.v1 = Vec3(parse_double(row[11], "v1x"), parse_double(row[12], "v1y"), 0.0);
    s.v2 = Vec3(parse_double(row[13], "v2x"), parse_double(row[14], "v2y"), 0.0);
    states.push_back(s);
  }
  return states;
}

void write_features(const std::string& path, const std::vector<PowerSample>& samples,
                    int goal_count) {
  std::vector<std::string> header = {"t_s", "p1_W", "p2_W", "psum_W"};
  for (int k = 1; k <= 2; ++k) {
    for (int i = 1; i <= goal_count; ++i) {
      std::string tag = std::to_string(k) + "_" + std::to_string(i);
      header.push_back("fproj_" + tag + "_N");
      header.push_back("vproj_" + tag + "_mps");
      header.push_back("pproj_" + tag + "_W");
      header.push_back("quad_" + tag);
    }
  }
  CsvWriter w(path, header);
  for (const PowerSample& s : samples) {
    if (static_cast<int>(s.agent1.size()) != goal_count ||
        static_cast<int>(s.agent2.size()) != goal_count) {
      throw DataError("power sample goal count mismatch");
    }
    std::vector<std::string> row = {format_time(s.t), num(s.p1_w), num(s.p2_w), num(s.p_sum_w)};
    for (const auto* side : {&s.agent1, &s.agent2}) {
      for (const GoalProjection& g : *side) {
        row.push_back(num(g.f_proj_n));
        row.push_back(num(g.v_proj_mps));
        row.push_back(num(g.p_proj_w));
        row.push_back(std::string(quadrant_token(g.quadrant)));
      }
    }
    w.write_row(row);
  }
  w.close();
}

std::vector<PowerSample> read_features(const std::string& path, int goal_count) {
  CsvTable t = read_csv(path);
  if (static_cast<int>(t.header.size()) != 4 + 8 * goal_count) {
    throw DataError(path + ": column count does not match goal count " +
                    std::to_string(goal_count));
  }
  std::vector<PowerSample> samples;
  for (const auto& row : t.rows) {
    PowerSample s;
    s.t = parse_double(row[0], "features t_s");
    s.p1_w = parse_double(row[1], "p1_W");
    s.p2_w = parse_double(row[2], "p2_W");
    s.p_sum_w = parse_double(row[3], "psum_W");
    size_t c = 4;
    for (auto* side : {&s.agent1, &s.agent2}) {
      for (int i = 0; i < goal_count; ++i) {
        GoalProjection g;
        g.f_proj_n = parse_double(row[c++], "fproj");
        g.v_proj_mps = parse_double(row[c++], "vproj");
        g.p_proj_w = parse_double(row[c++], "pproj");
        g.quadrant = quadrant_from_token(row[c++]);
        side->push_back(g);
      }
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

void write_segments(const std::string& path, const std::vector<ActionSegment>& segments) {
  CsvWriter w(path, {"agent", "t_on_s", "t_peak_s", "t_off_s", "peak_power_W",
                     "classified_goal", "confidence"});
  for (const ActionSegment& s : segments) {
    w.write_row({std::to_string(s.agent), format_time(s.t_on_s), format_time(s.t_peak_s),
                 format_time(s.t_off_s), num(s.peak_power_w),
                 std::to_string(goal_to_file(s.classified_goal)), num(s.confidence)});
  }
  w.close();
}

std::vector<ActionSegment> read_segments(const std::string& path, int goal_count) {
  CsvTable t = read_csv(path);
  expect_columns(
      t, {"agent", "t_on_s", "t_peak_s", "t_off_s", "peak_power_W", "classified_goal", "confidence"},
      path);
  std::vector<ActionSegment> segments;
  for (const auto& row : t.rows) {
    ActionSegment s;
    s.agent = static_cast<int>(parse_int(row[0], "segments agent"));
    s.t_on_s = parse_double(row[1], "t_on_s");
    s.t_peak_s = parse_double(row[2], "t_peak_s");
    s.t_off_s = parse_double(row[3], "t_off_s");
    s.peak_power_w = parse_double(row[4], "peak_power_W");
    s.classified_goal = goal_from_file(parse_int(row[5], "classified_goal"), goal_count, path);
    s.confidence = parse_double(row[6], "confidence");
    segments.push_back(s);
  }
  return segments;
}

void write_boundary(const std::string& path, const PhaseBoundary& boundary,
                    const SegmenterConfig& config) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["t_start_s"] = boundary.t_start_s;
  j["t_dec_s"] = boundary.t_dec_s;
  j["negotiation_duration_s"] = boundary.negotiation_duration_s;
  j["settled_goal"] = goal_to_file(boundary.settled_goal);
  j["consensus"] = boundary.consensus;
  ordered_json c;
  c["epsilon_m"] = config.epsilon_m;
  c["v_min_mps"] = config.v_min_mps;
  c["arrival_radius_m"] = config.arrival_radius_m;
  c["power_threshold_w"] = config.power_threshold_w;
  c["threshold_floor_w"] = config.threshold_floor_w;
  c["threshold_fraction"] = config.threshold_fraction;
  c["min_peak_separation_s"] = config.min_peak_separation_s;
  c["merge_window_s"] = config.merge_window_s;
  c["min_action_duration_s"] = config.min_action_duration_s;
  j["config"] = c;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw DataError("write failed for " + path);
}

PhaseBoundary read_boundary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  check_schema_version(j.value("schema_version", -1), path);
  PhaseBoundary b;
  b.t_start_s = j.at("t_start_s").get<double>();
  b.t_dec_s = j.at("t_dec_s").get<double>();
  b.negotiation_duration_s = j.at("negotiation_duration_s").get<double>();
  long long settled = j.at("settled_goal").get<long long>();
  b.settled_goal = settled == 0 ? -1 : static_cast<int>(settled - 1);
  b.consensus = j.at("consensus").get<bool>();
  return b;
}

void save_intent_model(const std::string& path, const IntentModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << serialize(model);
  if (!out) throw DataError("write failed for " + path);
}

IntentModel load_intent_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_intent_model(ss.str());
}

void write_intent_report(const std::string& path, const std::vector<IntentReportRow>& rows) {
  CsvWriter w(path, {"agent", "t_on_s", "t_peak_s", "t_off_s", "true_goal", "classified_goal",
                     "confidence"});
  for (const IntentReportRow& r : rows) {
    w.write_row({std::to_string(r.agent), format_time(r.t_on_s), format_time(r.t_peak_s),
                 format_time(r.t_off_s), std::to_string(goal_to_file(r.true_goal)),
                 std::to_string(goal_to_file(r.classified_goal)), num(r.confidence)});
  }
  w.close();
}

void write_batch_manifest(const std::string& path, const BatchManifest& manifest) {
  Config cfg;
  cfg.set_int("batch", "schema_version", manifest.schema_version);
  cfg.set_uint64("batch", "seed", manifest.seed);
  cfg.set_int("batch", "count", static_cast<long long>(manifest.sessions.size()));
  for (const BatchSession& s : manifest.sessions) {
    cfg.set("sessions", s.id, std::string(interaction_token(s.cell)));
  }
  cfg.write_file(path);
}

BatchManifest read_batch_manifest(const std::string& path) {
  Config cfg = Config::parse_file(path);
  BatchManifest m;
  long long version = cfg.require_int("batch", "schema_version");
  check_schema_version(version, path);
  m.schema_version = static_cast<int>(version);
  m.seed = cfg.get_uint64("batch", "seed", 0);
  long long count = cfg.require_int("batch", "count");
  auto entries = cfg.section_entries("sessions");
  if (static_cast<long long>(entries.size()) != count) {
    throw DataError(path + ": session count mismatch");
  }
  std::uint64_t index = 0;
  for (const auto& [id, cell] : entries) {
    m.sessions.push_back({id, interaction_from_token(cell), derive_seed(m.seed, index)});
    ++index;
  }
  return m;
}

std::vector<std::string> list_batch_sessions(const std::string& root) {
  BatchManifest m = read_batch_manifest(root + "/batch_manifest.txt");
  std::vector<std::string> dirs;
  dirs.reserve(m.sessions.size());
  for (const auto& s : m.sessions) dirs.push_back(root + "/" + s.id);
  return dirs;
}

}  // namespace dyad
