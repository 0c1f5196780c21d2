// End-to-end acceptance checks. Each check prints one [PASS]/[FAIL] line;
// the exit code is the number of failures.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dyad/features.hpp"
#include "dyad/filters.hpp"
#include "dyad/fusion.hpp"
#include "dyad/geometry.hpp"
#include "dyad/intent.hpp"
#include "dyad/segmentation.hpp"
#include "dyad/simulator.hpp"
#include "dyad/stats.hpp"
#include "dyad/taxonomy.hpp"

namespace fs = std::filesystem;
using namespace dyad;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Check {
  int number;
  const char* name;
  double budget_s;
  Outcome (*run)();
};

void note(Outcome& out, bool ok, const std::string& msg) {
  if (!ok) {
    out.ok = false;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += msg;
  }
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

// ---------------------------------------------------------------- check 1

Outcome check_kinematics() {
  Outcome out;
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> vel(-1.0, 1.0);
  std::uniform_real_distribution<double> ang(-3.0, 3.0);
  std::uniform_real_distribution<double> pt(-0.5, 0.5);
  std::normal_distribution<double> unit;

  const double h = 1e-5;
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    Pose pose;
    pose.position = Vec3(pos(rng), pos(rng), pos(rng));
    Quat q(unit(rng), unit(rng), unit(rng), unit(rng));
    q.normalize();
    pose.orientation = q;
    Twist twist;
    twist.linear = Vec3(vel(rng), vel(rng), vel(rng));
    twist.angular = Vec3(ang(rng), ang(rng), ang(rng));
    const Vec3 point(pt(rng), pt(rng), pt(rng));

    const Vec3 v = handle_velocity(pose, twist, point);

    // Central difference of the point trajectory under the same motion.
    auto at = [&](double s) {
      Quat dq(Eigen::AngleAxisd(s * twist.angular.norm(),
                                twist.angular.norm() > 0
                                    ? Vec3(twist.angular.normalized())
                                    : Vec3::UnitZ()));
      return Vec3((q * dq) * point + pose.position + s * twist.linear);
    };
    const Vec3 fd = (at(h) - at(-h)) / (2.0 * h);
    worst = std::max(worst, (v - fd).norm());
  }
  note(out, worst < 1e-6, fmt("fd mismatch %.3e m/s", worst));

  // Pure translation: the handle moves exactly with the body.
  bool translation_exact = true;
  for (int k = 0; k < 200; ++k) {
    Pose pose;
    pose.position = Vec3(pos(rng), pos(rng), pos(rng));
    Quat q(unit(rng), unit(rng), unit(rng), unit(rng));
    q.normalize();
    pose.orientation = q;
    Twist twist;
    twist.linear = Vec3(vel(rng), vel(rng), vel(rng));
    const Vec3 point(pt(rng), pt(rng), pt(rng));
    const Vec3 v = handle_velocity(pose, twist, point);
    if (v != twist.linear) translation_exact = false;
  }
  note(out, translation_exact, "pure translation not exact");

  // Rigidity: relative velocity of two body points has no component
  // along their separation (zero to machine precision).
  double rigid = 0.0;
  for (int k = 0; k < 200; ++k) {
    Pose pose;
    Quat q(unit(rng), unit(rng), unit(rng), unit(rng));
    q.normalize();
    pose.orientation = q;
    Twist twist;
    twist.linear = Vec3(vel(rng), vel(rng), vel(rng));
    twist.angular = Vec3(ang(rng), ang(rng), ang(rng));
    const Vec3 a(pt(rng), pt(rng), pt(rng));
    const Vec3 b(pt(rng), pt(rng), pt(rng));
    const Vec3 dv = handle_velocity(pose, twist, a) - handle_velocity(pose, twist, b);
    const Vec3 dr = pose.orientation * (a - b);
    rigid = std::max(rigid, std::abs(dv.dot(dr)));
  }
  note(out, rigid < 1e-12, fmt("rigidity residual %.3e", rigid));

  if (out.ok) out.detail = fmt("max fd error %.2e m/s", worst);
  return out;
}

// ---------------------------------------------------------------- check 2

Outcome check_filter() {
  Outcome out;
  const std::pair<double, double> designs[] = {
      {12.5, 100.0}, {5.0, 200.0}, {1.0, 50.0}, {20.0, 1000.0}};
  double worst_dc = 0.0;
  for (auto [fc, fs] : designs) {
    ButterworthLowpass f(fc, fs);
    worst_dc = std::max(worst_dc, std::abs(f.dc_gain() - 1.0));
  }
  note(out, worst_dc < 1e-6, fmt("dc gain off by %.3e", worst_dc));

  // Attenuation at twice the cutoff, measured on the zero-phase output.
  const double fs = 100.0, fc = 5.0;
  const int n = 4000;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = std::sin(2.0 * M_PI * 2.0 * fc * i / fs);
  std::vector<double> y = lowpass_zero_phase(x, fc, fs);
  double num = 0, den = 0;
  for (int i = 500; i < n - 500; ++i) {
    num += y[i] * y[i];
    den += x[i] * x[i];
  }
  const double gain = std::sqrt(num / den);
  const double atten_db = -20.0 * std::log10(gain);
  note(out, atten_db >= 20.0, fmt("only %.2f dB at 2x cutoff", atten_db));

  // Symmetric input stays symmetric through the zero-phase path.
  const int m = 1001;
  std::vector<double> pulse(m);
  for (int i = 0; i < m; ++i) {
    const double u = (i - 500.0) / 50.0;
    pulse[i] = std::exp(-0.5 * u * u);
  }
  std::vector<double> filtered = lowpass_zero_phase(pulse, 12.5, 100.0);
  double asym = 0.0;
  for (int i = 0; i < m; ++i)
    asym = std::max(asym, std::abs(filtered[i] - filtered[m - 1 - i]));
  note(out, asym < 1e-9, fmt("zero-phase asymmetry %.3e", asym));

  if (out.ok) out.detail = fmt("dc %.1e, %.1f dB at 2x cutoff", worst_dc, atten_db);
  return out;
}

// ---------------------------------------------------------------- check 3

Vec2 truth_velocity_at(const std::vector<TruthState>& states, double t) {
  auto it = std::lower_bound(states.begin(), states.end(), t,
                             [](const TruthState& s, double v) { return s.t < v; });
  if (it == states.begin()) return it->velocity;
  if (it == states.end()) return states.back().velocity;
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double u = (t - a.t) / (b.t - a.t);
  return a.velocity + u * (b.velocity - a.velocity);
}

Outcome check_fusion_beats_raw() {
  Outcome out;
  const InteractionType cells[] = {
      InteractionType::KCG, InteractionType::NonConflictingHH,
      InteractionType::NonConflictingHS, InteractionType::NoGoalVsHard,
      InteractionType::NonConflictingSS};
  SceneConfig scene;
  int wins = 0;
  for (int run = 0; run < 50; ++run) {
    SimulatedSession s = simulate_cell(scene, cells[run % 5], 300 + run);
    std::vector<FusedState> fused = align(s.raw, FilterConfig{}, scene.object.handles);

    const double lo = 1.0, hi = scene.duration_s - 0.1;
    double se_fused = 0;
    int n_fused = 0;
    for (const auto& f : fused) {
      if (f.t < lo || f.t > hi) continue;
      se_fused += (planar(f.twist.linear) - truth_velocity_at(s.truth.states, f.t))
                      .squaredNorm();
      ++n_fused;
    }
    double se_fd = 0;
    int n_fd = 0;
    for (size_t i = 1; i < s.raw.pose_obs.size(); ++i) {
      const auto& a = s.raw.pose_obs[i - 1];
      const auto& b = s.raw.pose_obs[i];
      const double tm = 0.5 * (a.t + b.t);
      if (tm < lo || tm > hi || b.t - a.t <= 0) continue;
      const Vec2 v = planar(b.position - a.position) / (b.t - a.t);
      se_fd += (v - truth_velocity_at(s.truth.states, tm)).squaredNorm();
      ++n_fd;
    }
    if (n_fused == 0 || n_fd == 0) continue;
    const double rmse_fused = std::sqrt(se_fused / n_fused);
    const double rmse_fd = std::sqrt(se_fd / n_fd);
    if (rmse_fused < rmse_fd) ++wins;
  }
  note(out, wins >= 48, fmt("fused beat raw in %.0f/50 runs (need 48)", wins));
  if (out.ok) out.detail = fmt("fused beat raw in %.0f/50 runs", wins);
  return out;
}

// ---------------------------------------------------------------- check 4

Outcome check_power_budget() {
  Outcome out;
  SceneConfig scene;
  scene.noise = NoiseConfig::zero();
  const InteractionType all_cells[] = {
      InteractionType::KCG,
      InteractionType::NoGoalVsNoGoal,
      InteractionType::NoGoalVsSoft,
      InteractionType::NoGoalVsHard,
      InteractionType::NonConflictingHH,
      InteractionType::NonConflictingHS,
      InteractionType::NonConflictingSS,
      InteractionType::ConflictingHS,
      InteractionType::ConflictingSS,
      InteractionType::ConflictingHH,
  };
  double worst_rel = 0.0;
  double worst_triangle = 0.0;
  for (InteractionType cell : all_cells) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      SimulatedSession s = simulate_cell(scene, cell, 400 + seed);
      double integral = 0.0;
      const auto& st = s.truth.states;
      for (size_t i = 1; i < st.size(); ++i) {
        const double pa = st[i - 1].p1_w + st[i - 1].p2_w;
        const double pb = st[i].p1_w + st[i].p2_w;
        integral += 0.5 * (pa + pb) * (st[i].t - st[i - 1].t);
      }
      const double rhs = s.truth.delta_ke_j + s.truth.dissipation_j;
      const double rel = std::abs(integral - rhs) / std::max(std::abs(rhs), 1e-6);
      worst_rel = std::max(worst_rel, rel);
      for (const auto& state : st) {
        const double lhs = (state.f1 + state.f2).norm();
        const double bound = state.f1.norm() + state.f2.norm();
        worst_triangle = std::max(worst_triangle, lhs - bound);
      }
    }
  }
  note(out, worst_rel <= 1e-3, fmt("energy closure off by %.3e relative", worst_rel));
  note(out, worst_triangle <= 1e-12,
       fmt("force triangle inequality violated by %.3e N", worst_triangle));
  if (out.ok) out.detail = fmt("worst closure %.2e relative", worst_rel);
  return out;
}

// ---------------------------------------------------------------- check 5

std::vector<TrajectorySample> truth_trajectory(const GroundTruth& truth) {
  std::vector<TrajectorySample> traj;
  traj.reserve(truth.states.size());
  for (const auto& s : truth.states) traj.push_back({s.t, s.position, s.velocity});
  return traj;
}

Outcome check_boundary() {
  Outcome out;
  SceneConfig scene;
  scene.noise = NoiseConfig::zero();
  scene.duration_s = 12.0;
  struct Mix {
    InteractionType cell;
    int count;
  };
  const Mix mix[] = {
      {InteractionType::KCG, 13},
      {InteractionType::NoGoalVsSoft, 12},
      {InteractionType::NoGoalVsHard, 13},
      {InteractionType::NonConflictingHH, 13},
      {InteractionType::NonConflictingHS, 12},
      {InteractionType::NonConflictingSS, 12},
      {InteractionType::ConflictingHS, 12},
      {InteractionType::ConflictingSS, 13},
  };
  int total = 0, hits = 0, no_truth = 0;
  std::uint64_t seed = 500;
  double worst_err = 0.0;
  for (const Mix& m : mix) {
    for (int i = 0; i < m.count; ++i, ++seed) {
      ++total;
      SimulatedSession s = simulate_cell(scene, m.cell, seed);
      if (!s.truth.consensus) {
        ++no_truth;
        continue;
      }
      PhaseBoundary b = detect_boundary(truth_trajectory(s.truth),
                                        scene.layout, s.truth.t_start_s);
      if (!b.consensus || b.settled_goal != s.truth.settled_goal) continue;
      const double err = std::abs(b.t_dec_s - s.truth.consensus_time_s);
      worst_err = std::max(worst_err, err);
      if (err <= 0.2) ++hits;
    }
  }
  note(out, hits >= 95,
       fmt("boundary within 0.2 s in %.0f/100 (unsettled truth: %.0f)",
           hits, no_truth));

  // Straight run onto the goal from the first sample: zero-length negotiation.
  GoalLayout layout = GoalLayout::standard_three();
  const Vec2 goal = layout.goals[1];
  std::vector<TrajectorySample> straight;
  for (int i = 0;; ++i) {
    const double t = 0.01 * i;
    const Vec2 p = Vec2(0.0, 0.0) + 0.4 * t * Vec2(0.0, 1.0);
    straight.push_back({t, p, Vec2(0.0, 0.4)});
    if ((p - goal).norm() <= 0.15) break;
  }
  PhaseBoundary pb = detect_boundary(straight, layout, 0.0);
  note(out, pb.consensus && pb.negotiation_duration_s <= 1e-9,
       "exact-heading case did not give zero-length negotiation");

  // Circling the goal with tangential velocity, final sample inside the
  // arrival radius: heading never points at the goal, so no consensus.
  std::vector<TrajectorySample> circle;
  for (int i = 0; i <= 600; ++i) {
    const double t = 0.01 * i;
    const double ang = 0.8 * t;
    const Vec2 p = goal + 0.5 * Vec2(std::cos(ang), std::sin(ang));
    const Vec2 v = 0.5 * 0.8 * Vec2(-std::sin(ang), std::cos(ang));
    circle.push_back({t, p, v});
  }
  circle.push_back({6.01, goal + Vec2(0.05, 0.0), circle.back().velocity});
  PhaseBoundary nc = detect_boundary(circle, layout, 0.0);
  note(out, !nc.consensus, "perpendicular-heading case reported consensus");

  if (out.ok)
    out.detail = fmt("%.0f/100 within 0.2 s, worst matched error %.3f s",
                     hits, worst_err);
  return out;
}

// ---------------------------------------------------------------- check 6

struct MatchCounts {
  int detected = 0;
  int truth = 0;
  int matched = 0;
};

double interval_iou(double a0, double a1, double b0, double b1) {
  const double inter = std::min(a1, b1) - std::max(a0, b0);
  if (inter <= 0) return 0.0;
  const double uni = std::max(a1, b1) - std::min(a0, b0);
  return inter / uni;
}

// Greedy one-to-one matching, best IoU first.
MatchCounts match_segments(const std::vector<ActionSegment>& detected,
                           const std::vector<TruthEpoch>& epochs,
                           double min_iou) {
  MatchCounts c;
  c.detected = static_cast<int>(detected.size());
  c.truth = static_cast<int>(epochs.size());
  struct Cand {
    double iou;
    size_t d, e;
  };
  std::vector<Cand> cands;
  for (size_t d = 0; d < detected.size(); ++d) {
    for (size_t e = 0; e < epochs.size(); ++e) {
      if (detected[d].agent != epochs[e].agent) continue;
      const double iou = interval_iou(detected[d].t_on_s, detected[d].t_off_s,
                                      epochs[e].t_on_s, epochs[e].t_off_s);
      if (iou >= min_iou) cands.push_back({iou, d, e});
    }
  }
  std::sort(cands.begin(), cands.end(),
            [](const Cand& x, const Cand& y) { return x.iou > y.iou; });
  std::vector<char> used_d(detected.size(), 0), used_e(epochs.size(), 0);
  for (const Cand& cd : cands) {
    if (used_d[cd.d] || used_e[cd.e]) continue;
    used_d[cd.d] = used_e[cd.e] = 1;
    ++c.matched;
  }
  return c;
}

Outcome check_action_detection() {
  Outcome out;
  SceneConfig scene;  // default noise: 0.3 N force sigma
  const InteractionType cells[] = {
      InteractionType::KCG, InteractionType::NonConflictingHH,
      InteractionType::NonConflictingHS, InteractionType::NonConflictingSS,
      InteractionType::ConflictingHS, InteractionType::ConflictingSS};
  const int per_cell = 17;
  const int n_sessions = 6 * per_cell;

  std::vector<MatchCounts> counts(n_sessions);
  std::vector<std::string> errors(n_sessions);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_sessions; ++i) {
    try {
      SimulatedSession s =
          simulate_cell(scene, cells[i / per_cell], 700 + i);
      std::vector<FusedState> fused =
          align(s.raw, FilterConfig{}, scene.object.handles);
      std::vector<PowerSample> series = power_series(fused, scene.layout);
      std::vector<ActionSegment> segs = detect_actions(series, SegmenterConfig{});
      counts[i] = match_segments(segs, s.truth.epochs, 0.5);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) {
      note(out, false, "session failed: " + e);
      return out;
    }
  }
  int detected = 0, truth = 0, matched = 0;
  for (const auto& c : counts) {
    detected += c.detected;
    truth += c.truth;
    matched += c.matched;
  }
  const double precision = detected > 0 ? double(matched) / detected : 0.0;
  const double recall = truth > 0 ? double(matched) / truth : 0.0;
  note(out, truth >= 200, fmt("only %.0f ground-truth epochs (need 200)", truth));
  note(out, precision >= 0.9, fmt("precision %.3f (need 0.90)", precision));
  note(out, recall >= 0.9, fmt("recall %.3f (need 0.90)", recall));
  if (out.ok)
    out.detail = fmt("precision %.3f, recall %.3f", precision, recall) +
                 fmt(" over %.0f epochs", truth);
  return out;
}

// ---------------------------------------------------------------- check 7

Outcome check_intent() {
  Outcome out;
  SceneConfig scene;
  const int per_goal = 35;
  const int n_sessions = 3 * per_goal;

  std::vector<std::vector<ActionFeatureVector>> feats(n_sessions);
  std::vector<std::vector<int>> labels(n_sessions);
  std::vector<std::string> errors(n_sessions);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n_sessions; ++i) {
    try {
      const int goal = i / per_goal;
      AgentPolicy p1 = default_policy(AgentGoal::hard(goal), false);
      AgentPolicy p2 = default_policy(AgentGoal::hard(goal), false);
      SimulatedSession s = simulate(scene, p1, p2, false, 900 + i);
      std::vector<FusedState> fused =
          align(s.raw, FilterConfig{}, scene.object.handles);
      std::vector<PowerSample> series = power_series(fused, scene.layout);
      for (const ActionSegment& seg : detect_actions(series, SegmenterConfig{})) {
        double best = 0.0;
        for (const TruthEpoch& e : s.truth.epochs) {
          if (e.agent != seg.agent) continue;
          best = std::max(best, interval_iou(seg.t_on_s, seg.t_off_s,
                                             e.t_on_s, e.t_off_s));
        }
        if (best < 0.5) continue;
        feats[i].push_back(extract_features(seg, fused, scene.layout));
        labels[i].push_back(goal);
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) {
      note(out, false, "session failed: " + e);
      return out;
    }
  }
  std::vector<ActionFeatureVector> all_feats;
  std::vector<int> all_labels;
  int per_class[3] = {0, 0, 0};
  for (int i = 0; i < n_sessions; ++i) {
    for (size_t j = 0; j < feats[i].size(); ++j) {
      all_feats.push_back(feats[i][j]);
      all_labels.push_back(labels[i][j]);
      ++per_class[labels[i][j]];
    }
  }
  const int min_class = *std::min_element(per_class, per_class + 3);
  note(out, min_class >= 60,
       fmt("smallest class has %.0f labeled actions (need 60)", min_class));
  if (!out.ok) return out;

  std::vector<size_t> idx(all_feats.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), std::mt19937_64(7));
  const size_t n_train = idx.size() * 7 / 10;
  std::vector<ActionFeatureVector> train_f, test_f;
  std::vector<int> train_l, test_l;
  for (size_t k = 0; k < idx.size(); ++k) {
    if (k < n_train) {
      train_f.push_back(all_feats[idx[k]]);
      train_l.push_back(all_labels[idx[k]]);
    } else {
      test_f.push_back(all_feats[idx[k]]);
      test_l.push_back(all_labels[idx[k]]);
    }
  }
  IntentModel model = fit_lda(train_f, train_l);
  int correct = 0;
  for (size_t k = 0; k < test_f.size(); ++k) {
    if (classify(model, test_f[k]).first == test_l[k]) ++correct;
  }
  const double accuracy = double(correct) / double(test_f.size());
  note(out, accuracy >= 0.85, fmt("test accuracy %.3f (need 0.85)", accuracy));

  std::vector<Vec2> points;
  for (const auto& f : all_feats) points.push_back(embed(model, f));
  const double sil = clustering_scores(points, all_labels).silhouette;
  note(out, sil >= 0.5, fmt("embedding silhouette %.3f (need 0.50)", sil));

  if (out.ok)
    out.detail = fmt("accuracy %.3f, silhouette %.3f, %.0f actions",
                     accuracy, sil, double(all_feats.size()));
  return out;
}

// ---------------------------------------------------------------- check 8

Outcome check_taxonomy_stats() {
  Outcome out;
  SceneConfig scene;
  scene.noise = NoiseConfig::zero();
  scene.duration_s = 12.0;
  const InteractionType cells[] = {
      InteractionType::KCG,
      InteractionType::NoGoalVsSoft,
      InteractionType::NoGoalVsHard,
      InteractionType::NonConflictingHH,
      InteractionType::NonConflictingHS,
      InteractionType::NonConflictingSS,
      InteractionType::ConflictingHS,
      InteractionType::ConflictingSS,
  };
  std::vector<std::vector<double>> durations(8);
  std::uint64_t seed = 1100;
  for (int c = 0; c < 8; ++c) {
    for (int i = 0; i < 10; ++i, ++seed) {
      SimulatedSession s = simulate_cell(scene, cells[c], seed);
      PhaseBoundary b = detect_boundary(truth_trajectory(s.truth),
                                        scene.layout, s.truth.t_start_s);
      if (b.consensus) durations[c].push_back(b.negotiation_duration_s);
    }
  }
  std::vector<double> means(8);
  for (int c = 0; c < 8; ++c) {
    if (durations[c].empty()) {
      note(out, false, std::string("no settled sessions for ") +
                           std::string(interaction_token(cells[c])));
      return out;
    }
    means[c] = std::accumulate(durations[c].begin(), durations[c].end(), 0.0) /
               double(durations[c].size());
  }
  bool kcg_smallest = true;
  for (int c = 1; c < 8; ++c) {
    if (!(means[0] < means[c])) kcg_smallest = false;
  }
  note(out, kcg_smallest, fmt("kcg mean %.2f s not strictly smallest", means[0]));
  // Conflicting means must exceed every non-conflicting cell that involves
  // a hard goal: no_goal_vs_hard, non_conflicting_hh, non_conflicting_hs.
  for (int conflict : {6, 7}) {
    for (int other : {2, 3, 4}) {
      if (!(means[conflict] > means[other])) {
        note(out, false,
             std::string(interaction_token(cells[conflict])) + " mean " +
                 fmt("%.2f not above ", means[conflict]) +
                 std::string(interaction_token(cells[other])) +
                 fmt(" mean %.2f", means[other]));
      }
    }
  }

  // Dispersion machinery against hand-computed sums of squares.
  AnovaResult a = anova({{1, 2, 3}, {2, 3, 4}, {5, 6, 7}});
  note(out, std::abs(a.ss_between - 26.0) < 1e-9, "anova ss_between != 26");
  note(out, std::abs(a.ss_within - 6.0) < 1e-9, "anova ss_within != 6");
  note(out, std::abs(a.f_statistic - 13.0) < 1e-9, "anova F != 13");
  TukeyResult t = tukey_hsd({{1, 2, 3}, {2, 3, 4}, {5, 6, 7}});
  const double expected_q[3] = {1.7320508075688774, 6.92820323027551,
                                5.196152422706632};
  if (t.pairs.size() != 3) {
    note(out, false, "tukey pair count != 3");
  } else {
    for (int i = 0; i < 3; ++i) {
      note(out, std::abs(t.pairs[i].q_statistic - expected_q[i]) < 1e-9,
           fmt("tukey q[%1.0f] mismatch", i));
    }
  }

  AnovaResult batch = anova(durations);
  if (out.ok)
    out.detail = fmt("kcg %.2f s smallest; batch F=%.1f", means[0],
                     batch.f_statistic);
  return out;
}

// ---------------------------------------------------------------- check 9

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DYAD_CLI_PATH) + " " + args +
                          " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc < 0 ? rc : WEXITSTATUS(rc);
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    files[fs::relative(entry.path(), root).string()] = body.str();
  }
  return files;
}

Outcome check_determinism() {
  Outcome out;
  const fs::path work = fs::current_path() / "acceptance_work";
  fs::remove_all(work);
  fs::create_directories(work);
  std::ofstream(work / "scene.cfg") << "[scene]\nduration_s = 6\n";

  const std::string common = "--config " + (work / "scene.cfg").string() +
                             " --cell kcg=2 --cell conflicting_ss=1 --seed 42";
  const fs::path a = work / "a", b = work / "b";
  int rc = run_cli("simulate --out " + a.string() + " " + common + " --threads 2");
  note(out, rc == 0, fmt("first simulate exited %.0f", rc));
  rc = run_cli("simulate --out " + b.string() + " " + common + " --threads 2");
  note(out, rc == 0, fmt("second simulate exited %.0f", rc));
  if (!out.ok) return out;

  auto sa = snapshot(a), sb = snapshot(b);
  note(out, sa == sb && !sa.empty(), "repeated simulate outputs differ");

  rc = run_cli("analyze " + a.string());
  note(out, rc == 0, fmt("first analyze exited %.0f", rc));
  auto first = snapshot(a);
  rc = run_cli("analyze " + a.string());
  note(out, rc == 0, fmt("second analyze exited %.0f", rc));
  auto second = snapshot(a);
  note(out, first == second, "repeated analyze outputs differ");
  note(out, first.size() > sa.size(), "analyze produced no artifacts");

  if (out.ok)
    out.detail = fmt("%.0f files byte-identical across reruns",
                     double(second.size()));
  fs::remove_all(work);
  return out;
}

// --------------------------------------------------------------- check 10

struct OracleScores {
  double ch, db, sil;
};

OracleScores brute_force_scores(const std::vector<Vec2>& x,
                                const std::vector<int>& labels, int k) {
  const int n = static_cast<int>(x.size());
  std::vector<Vec2> centroid(k, Vec2::Zero());
  std::vector<int> size(k, 0);
  Vec2 overall = Vec2::Zero();
  for (int i = 0; i < n; ++i) {
    centroid[labels[i]] += x[i];
    ++size[labels[i]];
    overall += x[i];
  }
  overall /= double(n);
  for (int c = 0; c < k; ++c) centroid[c] /= double(size[c]);

  double between = 0, within = 0;
  for (int c = 0; c < k; ++c)
    between += size[c] * (centroid[c] - overall).squaredNorm();
  for (int i = 0; i < n; ++i)
    within += (x[i] - centroid[labels[i]]).squaredNorm();
  const double ch = (between / (k - 1)) / (within / (n - k));

  std::vector<double> spread(k, 0.0);
  for (int i = 0; i < n; ++i)
    spread[labels[i]] += (x[i] - centroid[labels[i]]).norm();
  for (int c = 0; c < k; ++c) spread[c] /= double(size[c]);
  double db = 0;
  for (int c = 0; c < k; ++c) {
    double worst = 0;
    for (int d = 0; d < k; ++d) {
      if (d == c) continue;
      worst = std::max(worst, (spread[c] + spread[d]) /
                                  (centroid[c] - centroid[d]).norm());
    }
    db += worst;
  }
  db /= double(k);

  double sil = 0;
  for (int i = 0; i < n; ++i) {
    double a_i = 0;
    std::vector<double> other(k, 0.0);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dist = (x[i] - x[j]).norm();
      if (labels[j] == labels[i])
        a_i += dist;
      else
        other[labels[j]] += dist;
    }
    a_i /= double(size[labels[i]] - 1);
    double b_i = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == labels[i] || size[c] == 0) continue;
      b_i = std::min(b_i, other[c] / double(size[c]));
    }
    sil += (b_i - a_i) / std::max(a_i, b_i);
  }
  sil /= double(n);
  return {ch, db, sil};
}

Outcome check_clustering_metrics() {
  Outcome out;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 2 + trial % 3;
    std::uniform_int_distribution<int> n_draw(std::max(8, 2 * k + 2), 30);
    const int n = n_draw(rng);
    std::vector<Vec2> x(n);
    std::vector<int> labels(n);
    // Every cluster gets at least two members.
    for (int i = 0; i < n; ++i) {
      x[i] = Vec2(coord(rng), coord(rng));
      labels[i] = (i < 2 * k) ? i / 2 : int(rng() % k);
    }
    std::shuffle(labels.begin(), labels.end(), rng);

    const OracleScores oracle = brute_force_scores(x, labels, k);
    const ClusteringScores got = clustering_scores(x, labels);
    worst = std::max({worst, std::abs(oracle.ch - got.calinski_harabasz),
                      std::abs(oracle.db - got.davies_bouldin),
                      std::abs(oracle.sil - got.silhouette)});
  }
  note(out, worst < 1e-9, fmt("metric mismatch %.3e vs oracle", worst));
  if (out.ok) out.detail = fmt("worst oracle deviation %.2e", worst);
  return out;
}

}  // namespace

int main() {
  const Check checks[] = {
      {1, "kinematics identities", 5.0, check_kinematics},
      {2, "filter contract", 5.0, check_filter},
      {3, "fusion beats raw poses", 30.0, check_fusion_beats_raw},
      {4, "power budget closure", 30.0, check_power_budget},
      {5, "negotiation boundary", 60.0, check_boundary},
      {6, "action detection", 60.0, check_action_detection},
      {7, "intent classification", 60.0, check_intent},
      {8, "taxonomy statistics", 120.0, check_taxonomy_stats},
      {9, "pipeline determinism", 60.0, check_determinism},
      {10, "clustering metrics", 5.0, check_clustering_metrics},
  };
  int failures = 0;
  for (const Check& c : checks) {
    const auto begin = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - begin)
            .count();
    if (elapsed >= c.budget_s) {
      out.ok = false;
      out.detail += fmt(" [over %.0f s budget]", c.budget_s);
    }
    std::printf("[%s] %2d. %-24s %6.1f s  %s\n", out.ok ? "PASS" : "FAIL",
                c.number, c.name, elapsed, out.detail.c_str());
    if (!out.ok) ++failures;
  }
  std::printf("acceptance: %d/10 passed\n", 10 - failures);
  return failures;
}
