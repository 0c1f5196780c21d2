#include "dyad/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "dyad/config.hpp"
#include "dyad/csv.hpp"
#include "dyad/intent.hpp"
#include "dyad/plots.hpp"
#include "dyad/stats.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dyad {

namespace fs = std::filesystem;

namespace {

int guard(const char* what, const std::function<int()>& body) {
  try {
    return body();
  } catch (const DataError& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return kExitData;
  } catch (const std::domain_error& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << what << ": internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

// Scene/noise/policy overrides shared by every session of a batch.
struct SimulatePlanConfig {
  SceneConfig scene;
  std::vector<BatchRequest> requests;
  std::vector<std::pair<std::string, double>> policy_overrides;
};

void apply_policy_override(AgentPolicy& p, const std::string& key, double value) {
  if (key == "push_gain_n") {
    p.push_gain_n = value;
  } else if (key == "servo_band_mps") {
    p.servo_band_mps = value;
  } else if (key == "target_speed_mps") {
    p.target_speed_mps = value;
  } else if (key == "approach_distance_m") {
    p.approach_distance_m = value;
  } else if (key == "stop_distance_m") {
    p.stop_distance_m = value;
  } else if (key == "load_droop_mps_per_n") {
    p.load_droop_mps_per_n = value;
  } else if (key == "reaction_delay_s") {
    p.reaction_delay_s = value;
  } else if (key == "attack_s") {
    p.attack_s = value;
  } else if (key == "concession_threshold_ws") {
    if (std::isfinite(p.concession_threshold_ws)) p.concession_threshold_ws = value;
  } else if (key == "concession_leak_s") {
    p.concession_leak_s = value;
  } else if (key == "concession_transition_s") {
    p.concession_transition_s = value;
  } else if (key == "opposition_floor_n") {
    p.opposition_floor_n = value;
  } else if (key == "grasp_preload_n") {
    p.grasp_preload_n = value;
  } else if (key == "walk_amplitude_n") {
    p.walk_amplitude_n = value;
  } else if (key == "walk_frequency_hz") {
    p.walk_frequency_hz = value;
  } else if (key == "walk_transverse_fraction") {
    p.walk_transverse_fraction = value;
  } else if (key == "arm_damping") {
    p.arm_damping = value;
  } else {
    throw DataError("unknown key 'policy." + key + "'");
  }
}

SimulatePlanConfig load_simulate_config(const SimulateOptions& opts) {
  SimulatePlanConfig plan;
  std::map<std::string, int> counts;
  std::vector<std::string> order;
  auto add_cell = [&](const std::string& token, int count) {
    interaction_from_token(token);  // validates
    if (counts.find(token) == counts.end()) order.push_back(token);
    counts[token] += count;
  };

  if (!opts.config_path.empty()) {
    Config cfg = Config::parse_file(opts.config_path);
    SceneConfig& s = plan.scene;
    s.object.mass_kg = cfg.get_double("scene", "mass_kg", s.object.mass_kg);
    double length = cfg.get_double("scene", "length_m", s.object.dimensions_m.x());
    double width = cfg.get_double("scene", "width_m", s.object.dimensions_m.y());
    s.object.dimensions_m = Vec2(length, width);
    double offset = cfg.get_double("scene", "handle_offset_m", s.object.handles.q1.x());
    s.object.handles.q1 = Vec3(offset, 0, 0);
    s.object.handles.q2 = Vec3(-offset, 0, 0);
    long long goal_count = cfg.get_int("scene", "goal_count", s.layout.count());
    double goal_radius = cfg.get_double("scene", "goal_radius_m", 2.4);
    double goal_spacing = cfg.get_double("scene", "goal_spacing_deg", 40.0);
    if (goal_count != s.layout.count() || cfg.has("scene", "goal_radius_m") ||
        cfg.has("scene", "goal_spacing_deg")) {
      s.layout = GoalLayout::standard_three(Vec2::Zero(), goal_radius, goal_spacing,
                                            static_cast<int>(goal_count));
    }
    s.start_position = Vec2(cfg.get_double("scene", "start_x_m", s.start_position.x()),
                            cfg.get_double("scene", "start_y_m", s.start_position.y()));
    s.start_yaw_rad = cfg.get_double("scene", "start_yaw_rad", s.start_yaw_rad);
    s.t_start_s = cfg.get_double("scene", "t_start_s", s.t_start_s);
    s.duration_s = cfg.get_double("scene", "duration_s", s.duration_s);
    s.ft_rate_hz = cfg.get_double("scene", "ft_rate_hz", s.ft_rate_hz);
    s.imu_rate_hz = cfg.get_double("scene", "imu_rate_hz", s.imu_rate_hz);
    s.physics_rate_hz = cfg.get_double("scene", "physics_rate_hz", s.physics_rate_hz);
    s.truth_rate_hz = cfg.get_double("scene", "truth_rate_hz", s.truth_rate_hz);
    s.linear_damping = cfg.get_double("scene", "linear_damping", s.linear_damping);
    s.angular_damping = cfg.get_double("scene", "angular_damping", s.angular_damping);
    s.coulomb_force_n = cfg.get_double("scene", "coulomb_force_n", s.coulomb_force_n);
    s.coulomb_torque_nm = cfg.get_double("scene", "coulomb_torque_nm", s.coulomb_torque_nm);
    s.yaw_stiffness = cfg.get_double("scene", "yaw_stiffness", s.yaw_stiffness);
    s.yaw_damping = cfg.get_double("scene", "yaw_damping", s.yaw_damping);
    s.yaw_authority_nm = cfg.get_double("scene", "yaw_authority_nm", s.yaw_authority_nm);
    s.behavior_jitter = cfg.get_double("scene", "behavior_jitter", s.behavior_jitter);
    NoiseConfig& n = s.noise;
    n.force_sigma_n = cfg.get_double("noise", "force_sigma_n", n.force_sigma_n);
    n.torque_sigma_nm = cfg.get_double("noise", "torque_sigma_nm", n.torque_sigma_nm);
    n.accel_sigma_mps2 = cfg.get_double("noise", "accel_sigma_mps2", n.accel_sigma_mps2);
    n.gyro_sigma_rps = cfg.get_double("noise", "gyro_sigma_rps", n.gyro_sigma_rps);
    n.gyro_bias_sigma_rps = cfg.get_double("noise", "gyro_bias_sigma_rps", n.gyro_bias_sigma_rps);
    n.camera_pos_sigma_m = cfg.get_double("noise", "camera_pos_sigma_m", n.camera_pos_sigma_m);
    n.camera_yaw_sigma_rad =
        cfg.get_double("noise", "camera_yaw_sigma_rad", n.camera_yaw_sigma_rad);
    n.camera_rate_hz = cfg.get_double("noise", "camera_rate_hz", n.camera_rate_hz);
    n.camera_dropout_rate = cfg.get_double("noise", "camera_dropout_rate", n.camera_dropout_rate);
    n.camera_gap_duration_s =
        cfg.get_double("noise", "camera_gap_duration_s", n.camera_gap_duration_s);
    for (const auto& [key, value] : cfg.section_entries("batch")) {
      long long count = 0;
      try {
        count = parse_int(value, "batch." + key);
      } catch (const DataError&) {
        throw DataError(opts.config_path + ": key 'batch." + key +
                        "' must map a cell token to a session count");
      }
      if (count < 0) throw DataError(opts.config_path + ": key 'batch." + key + "' is negative");
      add_cell(key, static_cast<int>(count));
    }
    for (const auto& [key, value] : cfg.section_entries("policy")) {
      const char* begin = value.c_str();
      char* end = nullptr;
      double parsed = std::strtod(begin, &end);
      if (end == begin || *end != '\0') {
        throw DataError(opts.config_path + ": key 'policy." + key + "' has malformed number '" +
                        value + "'");
      }
      plan.policy_overrides.emplace_back(key, parsed);
    }
    cfg.reject_unknown_keys();
  }

  for (const std::string& spec : opts.cell_specs) {
    size_t eq = spec.find('=');
    if (eq == std::string::npos) {
      add_cell(spec, opts.default_count);
    } else {
      std::string token = spec.substr(0, eq);
      long long count = parse_int(spec.substr(eq + 1), "--cell " + spec);
      if (count < 0) throw DataError("--cell " + spec + ": count is negative");
      add_cell(token, static_cast<int>(count));
    }
  }

  if (opts.duration_s > 0) plan.scene.duration_s = opts.duration_s;
  if (opts.noiseless) plan.scene.noise = NoiseConfig::zero();
  plan.scene.validate();

  for (const std::string& token : order) {
    plan.requests.push_back({interaction_from_token(token), counts[token]});
  }
  return plan;
}

void echo_analysis_manifest(const std::string& path, const std::string& session_id,
                            const AnalysisConfig& c) {
  Config cfg;
  cfg.set_int("analysis", "schema_version", kSchemaVersion);
  cfg.set("analysis", "session_id", session_id);
  cfg.set_double("filter", "cutoff_hz", c.filter.cutoff_hz);
  cfg.set_double("filter", "output_rate_hz", c.filter.output_rate_hz);
  cfg.set("filter", "mode", c.filter.mode == FilterMode::ZeroPhase ? "zero_phase" : "causal");
  cfg.set_double("filter", "gravity", c.filter.gravity);
  cfg.set_double("filter", "ekf_gyro_noise", c.filter.ekf_gyro_noise);
  cfg.set_double("filter", "ekf_orientation_noise", c.filter.ekf_orientation_noise);
  cfg.set_double("filter", "kf_accel_noise", c.filter.kf_accel_noise);
  cfg.set_double("filter", "kf_position_noise", c.filter.kf_position_noise);
  cfg.set_double("deadband", "force_n", c.deadband.force_n);
  cfg.set_double("deadband", "speed_mps", c.deadband.speed_mps);
  cfg.set_double("segmenter", "epsilon_m", c.segmenter.epsilon_m);
  cfg.set_double("segmenter", "v_min_mps", c.segmenter.v_min_mps);
  cfg.set_double("segmenter", "arrival_radius_m", c.segmenter.arrival_radius_m);
  cfg.set_double("segmenter", "power_threshold_w", c.segmenter.power_threshold_w);
  cfg.set_double("segmenter", "threshold_floor_w", c.segmenter.threshold_floor_w);
  cfg.set_double("segmenter", "threshold_fraction", c.segmenter.threshold_fraction);
  cfg.set_double("segmenter", "min_peak_separation_s", c.segmenter.min_peak_separation_s);
  cfg.set_double("segmenter", "merge_window_s", c.segmenter.merge_window_s);
  cfg.set_double("segmenter", "min_action_duration_s", c.segmenter.min_action_duration_s);
  cfg.write_file(path);
}

std::vector<std::string> resolve_analyze_targets(const std::string& target) {
  if (fs::exists(fs::path(target) / "manifest.txt")) return {target};
  if (fs::exists(fs::path(target) / "batch_manifest.txt")) return list_batch_sessions(target);
  throw DataError(target + ": neither manifest.txt nor batch_manifest.txt found");
}

struct LabeledFeatures {
  std::vector<ActionFeatureVector> features;
  std::vector<int> labels;
  std::vector<ActionSegment> segments;
};

LabeledFeatures collect_labeled_actions(const std::vector<std::string>& dirs, double min_iou) {
  LabeledFeatures out;
  for (const std::string& dir : dirs) {
    SessionPaths paths(dir);
    SessionManifest manifest = read_manifest(paths.manifest());
    if (!fs::exists(paths.processed()) || !fs::exists(paths.segments())) {
      throw DataError(dir + ": missing pipeline artifacts (run analyze first)");
    }
    auto states = read_processed(paths.processed());
    auto segments = read_segments(paths.segments(), manifest.layout.count());
    if (!fs::exists(paths.truth())) {
      throw DataError(dir + ": missing truth.csv, cannot label actions");
    }
    auto epochs = read_truth_epochs(paths.truth(), manifest.layout.count());
    GoalLayout layout = manifest.layout;
    for (const ActionSegment& seg : segments) {
      int goal = match_epoch_goal(seg, epochs, min_iou);
      if (goal < 0) continue;
      out.features.push_back(extract_features(seg, states, layout));
      out.labels.push_back(goal);
      out.segments.push_back(seg);
    }
  }
  return out;
}

}  // namespace

AnalysisConfig analysis_config_from_file(const std::string& path) {
  AnalysisConfig c;
  if (path.empty()) return c;
  Config cfg = Config::parse_file(path);
  FilterConfig& f = c.filter;
  f.cutoff_hz = cfg.get_double("filter", "cutoff_hz", f.cutoff_hz);
  f.output_rate_hz = cfg.get_double("filter", "output_rate_hz", f.output_rate_hz);
  std::string mode = cfg.get_string("filter", "mode", "zero_phase");
  if (mode == "zero_phase") {
    f.mode = FilterMode::ZeroPhase;
  } else if (mode == "causal") {
    f.mode = FilterMode::Causal;
  } else {
    throw DataError(path + ": key 'filter.mode' must be causal or zero_phase, got '" + mode + "'");
  }
  f.gravity = cfg.get_double("filter", "gravity", f.gravity);
  f.ekf_gyro_noise = cfg.get_double("filter", "ekf_gyro_noise", f.ekf_gyro_noise);
  f.ekf_orientation_noise =
      cfg.get_double("filter", "ekf_orientation_noise", f.ekf_orientation_noise);
  f.kf_accel_noise = cfg.get_double("filter", "kf_accel_noise", f.kf_accel_noise);
  f.kf_position_noise = cfg.get_double("filter", "kf_position_noise", f.kf_position_noise);
  c.deadband.force_n = cfg.get_double("deadband", "force_n", c.deadband.force_n);
  c.deadband.speed_mps = cfg.get_double("deadband", "speed_mps", c.deadband.speed_mps);
  SegmenterConfig& s = c.segmenter;
  s.epsilon_m = cfg.get_double("segmenter", "epsilon_m", s.epsilon_m);
  s.v_min_mps = cfg.get_double("segmenter", "v_min_mps", s.v_min_mps);
  s.arrival_radius_m = cfg.get_double("segmenter", "arrival_radius_m", s.arrival_radius_m);
  s.power_threshold_w = cfg.get_double("segmenter", "power_threshold_w", s.power_threshold_w);
  s.threshold_floor_w = cfg.get_double("segmenter", "threshold_floor_w", s.threshold_floor_w);
  s.threshold_fraction = cfg.get_double("segmenter", "threshold_fraction", s.threshold_fraction);
  s.min_peak_separation_s =
      cfg.get_double("segmenter", "min_peak_separation_s", s.min_peak_separation_s);
  s.merge_window_s = cfg.get_double("segmenter", "merge_window_s", s.merge_window_s);
  s.min_action_duration_s =
      cfg.get_double("segmenter", "min_action_duration_s", s.min_action_duration_s);
  cfg.reject_unknown_keys();
  c.filter.validate();
  c.segmenter.validate();
  return c;
}

AnalysisResult analyze_session(const std::string& dir, const AnalysisConfig& config) {
  SessionPaths paths(dir);
  SceneConfig scene = scene_from_manifest(paths.manifest());
  RawStreams raw = read_raw_streams(dir);
  AnalysisResult result;
  result.states = align(raw, config.filter, scene.object.handles);
  result.power = power_series(result.states, scene.layout, config.deadband);
  result.segments = detect_actions(result.power, config.segmenter);
  std::vector<TrajectorySample> traj;
  traj.reserve(result.states.size());
  for (const FusedState& s : result.states) {
    traj.push_back({s.t, planar(s.pose.position), planar(s.twist.linear)});
  }
  result.boundary = detect_boundary(traj, scene.layout, scene.t_start_s, config.segmenter);
  return result;
}

int match_epoch_goal(const ActionSegment& segment, const std::vector<TruthEpoch>& epochs,
                     double min_iou) {
  double best = min_iou;
  int goal = -1;
  for (const TruthEpoch& e : epochs) {
    if (e.agent != segment.agent) continue;
    double inter = std::min(segment.t_off_s, e.t_off_s) - std::max(segment.t_on_s, e.t_on_s);
    if (inter <= 0) continue;
    double uni = std::max(segment.t_off_s, e.t_off_s) - std::min(segment.t_on_s, e.t_on_s);
    double iou = inter / uni;
    if (iou >= best) {
      best = iou;
      goal = e.goal;
    }
  }
  return goal;
}

int cmd_simulate(const SimulateOptions& opts) {
  return guard("simulate", [&]() {
    if (opts.out_dir.empty()) {
      std::cerr << "simulate: --out is required\n";
      return kExitUsage;
    }
    SimulatePlanConfig plan = load_simulate_config(opts);
    if (plan.requests.empty()) {
      std::cerr << "simulate: no cells requested (use --cell or a [batch] config section)\n";
      return kExitUsage;
    }
#ifdef _OPENMP
    if (opts.threads > 0) omp_set_num_threads(opts.threads);
#endif
    std::vector<BatchSession> sessions = plan_batch(plan.requests, opts.seed);
    fs::create_directories(opts.out_dir);

    std::string first_error;
    const auto n = static_cast<long long>(sessions.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
      try {
        const BatchSession& bs = sessions[static_cast<size_t>(i)];
        CellRealization cell = realize_cell(plan.scene, bs.cell, bs.seed);
        for (const auto& [key, value] : plan.policy_overrides) {
          apply_policy_override(cell.agent1, key, value);
          apply_policy_override(cell.agent2, key, value);
        }
        SimulatedSession session =
            simulate(plan.scene, cell.agent1, cell.agent2, cell.kcg, bs.seed);
        write_session(opts.out_dir + "/" + bs.id, plan.scene, cell.agent1, cell.agent2, cell.kcg,
                      bs.seed, bs.id, session);
      } catch (const std::exception& e) {
#pragma omp critical
        if (first_error.empty()) first_error = e.what();
      }
    }
    if (!first_error.empty()) throw DataError(first_error);

    BatchManifest manifest;
    manifest.seed = opts.seed;
    manifest.sessions = sessions;
    write_batch_manifest(opts.out_dir + "/batch_manifest.txt", manifest);
    std::cout << "wrote " << sessions.size() << " sessions to " << opts.out_dir << "\n";
    return kExitOk;
  });
}

int cmd_analyze(const AnalyzeOptions& opts) {
  return guard("analyze", [&]() {
    AnalysisConfig config = analysis_config_from_file(opts.config_path);
    IntentModel model;
    if (!opts.model_path.empty()) model = load_intent_model(opts.model_path);

    for (const std::string& dir : resolve_analyze_targets(opts.target)) {
      SessionPaths paths(dir);
      SessionManifest manifest = read_manifest(paths.manifest());
      AnalysisResult result = analyze_session(dir, config);

      if (model.fitted()) {
        for (ActionSegment& seg : result.segments) {
          auto [goal, confidence] =
              classify(model, extract_features(seg, result.states, manifest.layout));
          seg.classified_goal = goal;
          seg.confidence = confidence;
        }
      }

      std::vector<TruthEpoch> epochs;
      if (fs::exists(paths.truth())) {
        epochs = read_truth_epochs(paths.truth(), manifest.layout.count());
      }
      std::vector<IntentReportRow> report;
      report.reserve(result.segments.size());
      for (const ActionSegment& seg : result.segments) {
        IntentReportRow row;
        row.agent = seg.agent;
        row.t_on_s = seg.t_on_s;
        row.t_peak_s = seg.t_peak_s;
        row.t_off_s = seg.t_off_s;
        row.true_goal = match_epoch_goal(seg, epochs, 0.3);
        row.classified_goal = seg.classified_goal;
        row.confidence = seg.confidence;
        report.push_back(row);
      }

      write_processed(paths.processed(), result.states);
      write_features(paths.features(), result.power, manifest.layout.count());
      write_segments(paths.segments(), result.segments);
      write_boundary(paths.boundary(), result.boundary, config.segmenter);
      write_intent_report(paths.intent_report(), report);
      echo_analysis_manifest(dir + "/analysis_manifest.txt", manifest.id, config);

      std::cout << "analyzed " << manifest.id << ": segments=" << result.segments.size()
                << " consensus=" << (result.boundary.consensus ? "yes" : "no");
      if (result.boundary.consensus) {
        std::cout << " t_dec=" << to_shortest(result.boundary.t_dec_s)
                  << " goal=" << goal_to_file(result.boundary.settled_goal);
      }
      std::cout << "\n";
    }
    return kExitOk;
  });
}

int cmd_stats(const StatsOptions& opts) {
  return guard("stats", [&]() {
    std::vector<std::string> dirs = list_batch_sessions(opts.dataset_dir);
    std::vector<NegotiationSample> samples;
    int total = 0;
    for (const std::string& dir : dirs) {
      SessionPaths paths(dir);
      SessionManifest manifest = read_manifest(paths.manifest());
      PhaseBoundary boundary = read_boundary(paths.boundary());
      ++total;
      if (boundary.consensus) {
        samples.push_back({manifest.id, manifest.cell, boundary.negotiation_duration_s});
      }
    }
    std::set<InteractionType> types;
    for (const auto& s : samples) types.insert(s.type);
    if (types.size() < 2) {
      throw DataError("dataset has " + std::to_string(types.size()) +
                      " interaction type(s) with consensus; need at least 2");
    }

    std::vector<TypeSummary> summary = negotiation_summary(samples);
    {
      CsvWriter w(opts.dataset_dir + "/stats_summary.csv",
                  {"type", "count", "mean_s", "q1_s", "median_s", "q3_s", "whisker_low_s",
                   "whisker_high_s", "outlier_count"});
      for (const TypeSummary& ts : summary) {
        w.write_row({std::string(interaction_token(ts.type)), std::to_string(ts.box.count),
                     to_shortest(ts.box.mean), to_shortest(ts.box.q1), to_shortest(ts.box.median),
                     to_shortest(ts.box.q3), to_shortest(ts.box.whisker_low),
                     to_shortest(ts.box.whisker_high), std::to_string(ts.box.outliers.size())});
      }
      w.close();
    }

    std::vector<std::vector<double>> groups;
    std::vector<InteractionType> group_types;
    std::vector<InteractionType> skipped;
    for (const TypeSummary& ts : summary) {
      std::vector<double> g;
      for (const auto& s : samples) {
        if (s.type == ts.type) g.push_back(s.duration_s);
      }
      if (g.size() >= 2) {
        groups.push_back(std::move(g));
        group_types.push_back(ts.type);
      } else {
        skipped.push_back(ts.type);
      }
    }

    std::ostringstream rep;
    rep << "sessions=" << total << " consensus=" << samples.size() << "\n";
    for (const TypeSummary& ts : summary) {
      rep << "type " << interaction_token(ts.type) << ": n=" << ts.box.count
          << " mean=" << to_shortest(ts.box.mean) << " median=" << to_shortest(ts.box.median)
          << "\n";
    }
    for (InteractionType t : skipped) {
      rep << "skipped " << interaction_token(t) << ": fewer than 2 consensus sessions\n";
    }
    if (groups.size() >= 2) {
      AnovaResult a = anova(groups);
      rep << "anova: F=" << to_shortest(a.f_statistic) << " p=" << to_shortest(a.p_value)
          << " df_between=" << a.df_between << " df_within=" << a.df_within << "\n";
      TukeyResult tk = tukey_hsd(groups);
      rep << "tukey: alpha=" << to_shortest(tk.alpha) << "\n";
      for (const TukeyPair& pr : tk.pairs) {
        rep << "pair " << interaction_token(group_types[static_cast<size_t>(pr.group_a)]) << " vs "
            << interaction_token(group_types[static_cast<size_t>(pr.group_b)])
            << ": diff=" << to_shortest(pr.mean_difference) << " q=" << to_shortest(pr.q_statistic)
            << " p=" << to_shortest(pr.p_adjusted)
            << " significant=" << (pr.significant ? "true" : "false") << "\n";
      }
    } else {
      rep << "anova: skipped (need two groups with n >= 2)\n";
    }

    std::ofstream out(opts.dataset_dir + "/stats_report.txt", std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open stats_report.txt for writing");
    out << rep.str();
    out.close();
    std::cout << rep.str();
    return kExitOk;
  });
}

int cmd_intent_fit(const IntentFitOptions& opts) {
  return guard("intent-fit", [&]() {
    std::vector<std::string> dirs = resolve_analyze_targets(opts.dataset_dir);
    LabeledFeatures data = collect_labeled_actions(dirs, opts.min_label_iou);
    if (data.features.empty()) {
      throw DataError("no labeled actions found in " + opts.dataset_dir);
    }
    IntentModel model = fit_lda(data.features, data.labels);
    save_intent_model(opts.model_path, model);

    int correct = 0;
    std::vector<Vec2> embedded;
    embedded.reserve(data.features.size());
    for (size_t i = 0; i < data.features.size(); ++i) {
      auto [goal, confidence] = classify(model, data.features[i]);
      (void)confidence;
      if (goal == data.labels[i]) ++correct;
      embedded.push_back(embed(model, data.features[i]));
    }
    double accuracy = static_cast<double>(correct) / static_cast<double>(data.features.size());
    ClusteringScores scores = clustering_scores(embedded, data.labels);
    std::cout << "fitted intent model on " << data.features.size() << " actions ("
              << model.classes.size() << " classes): training accuracy="
              << to_shortest(accuracy) << " silhouette=" << to_shortest(scores.silhouette)
              << "\n";
    return kExitOk;
  });
}

int cmd_plot(const PlotOptions& opts) {
  return guard("plot", [&]() {
    bool want_power = opts.kind == "power" || opts.kind == "all";
    bool want_projected = opts.kind == "projected" || opts.kind == "all";
    bool want_embedding = opts.kind == "embedding" || opts.kind == "all";
    if (!want_power && !want_projected && !want_embedding) {
      std::cerr << "plot: unknown kind '" << opts.kind
                << "' (expected power, projected, embedding, or all)\n";
      return kExitUsage;
    }
    SessionPaths paths(opts.session_dir);
    SessionManifest manifest = read_manifest(paths.manifest());
    int goals = manifest.layout.count();

    if (want_power || want_projected) {
      auto power = read_features(paths.features(), goals);
      auto segments = read_segments(paths.segments(), goals);
      if (want_power) {
        render_power_svg(opts.session_dir + "/plot_power.svg", power, segments);
        std::cout << "wrote " << opts.session_dir << "/plot_power.svg\n";
      }
      if (want_projected) {
        render_projected_svg(opts.session_dir + "/plot_projected.svg", power, goals, segments);
        std::cout << "wrote " << opts.session_dir << "/plot_projected.svg\n";
      }
    }
    if (want_embedding) {
      if (opts.model_path.empty()) {
        throw DataError("embedding plot requires --model");
      }
      IntentModel model = load_intent_model(opts.model_path);
      auto states = read_processed(paths.processed());
      auto segments = read_segments(paths.segments(), goals);
      std::vector<Vec2> points;
      std::vector<int> labels;
      for (const ActionSegment& seg : segments) {
        ActionFeatureVector fv = extract_features(seg, states, manifest.layout);
        points.push_back(embed(model, fv));
        labels.push_back(classify(model, fv).first);
      }
      render_embedding_svg(opts.session_dir + "/plot_embedding.svg", points, labels);
      std::cout << "wrote " << opts.session_dir << "/plot_embedding.svg\n";
    }
    return kExitOk;
  });
}

}  // namespace dyad
