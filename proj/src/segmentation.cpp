#include "dyad/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dyad/common.hpp"

namespace dyad {
namespace {

double percentile95(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = 0.95 * (static_cast<double>(v.size()) - 1.0);
  const size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[lo + 1] - v[lo]);
}

// Distance from point g to the ray p + lambda*v, lambda >= 0.
double ray_distance(const Vec2& g, const Vec2& p, const Vec2& v) {
  const Vec2 d = g - p;
  const double vv = v.squaredNorm();
  if (vv <= 0.0) return d.norm();
  const double lambda = d.dot(v) / vv;
  if (lambda <= 0.0) return d.norm();
  return (d - lambda * v).norm();
}

void check_trajectory(const std::vector<TrajectorySample>& traj) {
  if (traj.empty()) throw DataError("boundary detection: empty trajectory");
  for (size_t i = 1; i < traj.size(); ++i) {
    if (!(traj[i].t > traj[i - 1].t)) {
      throw DataError("boundary detection: timestamps not strictly increasing");
    }
  }
}

// Index of the first sample inside the arrival radius, or -1.
long long first_arrival(const std::vector<TrajectorySample>& traj,
                        const Vec2& goal, double radius) {
  for (size_t i = 0; i < traj.size(); ++i) {
    if ((traj[i].position - goal).norm() <= radius) {
      return static_cast<long long>(i);
    }
  }
  return -1;
}

PhaseBoundary no_consensus(const std::vector<TrajectorySample>& traj,
                           double t_start) {
  PhaseBoundary b;
  b.t_start_s = t_start;
  b.t_dec_s = traj.back().t;
  b.negotiation_duration_s = b.t_dec_s - t_start;
  b.settled_goal = -1;
  b.consensus = false;
  return b;
}

}  // namespace

void SegmenterConfig::validate() const {
  const bool positive =
      epsilon_m > 0 && v_min_mps > 0 && threshold_floor_w > 0 &&
      threshold_fraction > 0 && min_peak_separation_s > 0 &&
      merge_window_s > 0 && min_action_duration_s > 0 && arrival_radius_m > 0;
  if (!positive || power_threshold_w < 0) {
    throw DataError("segmenter config: parameters must be positive");
  }
  if (threshold_fraction > 1.0) {
    throw DataError("segmenter config: threshold_fraction must be in (0, 1]");
  }
  if (min_peak_separation_s > merge_window_s) {
    throw DataError(
        "segmenter config: min_peak_separation must not exceed merge_window");
  }
}

double resolve_power_threshold(const std::vector<double>& power,
                               const SegmenterConfig& cfg) {
  cfg.validate();
  if (cfg.power_threshold_w > 0.0) return cfg.power_threshold_w;
  std::vector<double> mag(power.size());
  std::transform(power.begin(), power.end(), mag.begin(),
                 [](double p) { return std::abs(p); });
  return std::max(cfg.threshold_floor_w,
                  cfg.threshold_fraction * percentile95(std::move(mag)));
}

PhaseBoundary detect_negotiation_end(const std::vector<TrajectorySample>& traj,
                                     const GoalLayout& layout, int goal,
                                     double t_start,
                                     const SegmenterConfig& cfg) {
  cfg.validate();
  check_trajectory(traj);
  if (!layout.valid_index(goal)) {
    throw DataError("boundary detection: goal index out of range");
  }
  const Vec2 g = layout.goals[goal];
  const long long arrive = first_arrival(traj, g, cfg.arrival_radius_m);
  if (arrive < 0) return no_consensus(traj, t_start);

  PhaseBoundary b;
  b.settled_goal = goal;
  b.t_start_s = t_start;
  b.consensus = true;
  if (arrive == 0) {
    b.t_dec_s = std::max(traj.front().t, t_start);
    b.negotiation_duration_s = b.t_dec_s - t_start;
    return b;
  }

  auto holds = [&](long long i) {
    const auto& s = traj[static_cast<size_t>(i)];
    return s.velocity.norm() >= cfg.v_min_mps &&
           ray_distance(g, s.position, s.velocity) < cfg.epsilon_m;
  };

  // Longest suffix of pre-arrival samples on which the heading condition
  // holds without interruption.
  long long j = arrive;
  while (j > 0 && holds(j - 1)) --j;
  if (j == arrive) return no_consensus(traj, t_start);

  b.t_dec_s = std::max(traj[static_cast<size_t>(j)].t, t_start);
  b.negotiation_duration_s = b.t_dec_s - t_start;
  return b;
}

PhaseBoundary detect_boundary(const std::vector<TrajectorySample>& traj,
                              const GoalLayout& layout, double t_start,
                              const SegmenterConfig& cfg) {
  cfg.validate();
  check_trajectory(traj);
  long long best_idx = -1;
  int best_goal = -1;
  for (int g = 0; g < layout.count(); ++g) {
    const long long i = first_arrival(traj, layout.goals[g], cfg.arrival_radius_m);
    if (i >= 0 && (best_idx < 0 || i < best_idx)) {
      best_idx = i;
      best_goal = g;
    }
  }
  if (best_goal < 0) return no_consensus(traj, t_start);
  return detect_negotiation_end(traj, layout, best_goal, t_start, cfg);
}

std::vector<ActionSegment> detect_actions(const std::vector<double>& t,
                                          const std::vector<double>& power,
                                          int agent,
                                          const SegmenterConfig& cfg) {
  cfg.validate();
  if (t.size() != power.size()) {
    throw DataError("detect_actions: time and power lengths differ");
  }
  const size_t n = t.size();
  if (n < 3) return {};
  const double dt = (t.back() - t.front()) / static_cast<double>(n - 1);
  if (!(dt > 0)) throw DataError("detect_actions: non-increasing timeline");
  for (size_t i = 1; i < n; ++i) {
    if (std::abs((t[i] - t[i - 1]) - dt) > 1e-6 * std::max(1.0, dt)) {
      throw DataError("detect_actions: non-uniform timeline");
    }
  }

  const double theta = resolve_power_threshold(power, cfg);
  std::vector<double> a(n);
  std::transform(power.begin(), power.end(), a.begin(),
                 [](double p) { return std::abs(p); });

  // Maximal runs above threshold, sample spans inclusive.
  struct Run {
    size_t lo, hi;
  };
  std::vector<Run> regions;
  size_t i = 0;
  while (i < n) {
    if (a[i] > theta) {
      size_t j = i;
      while (j + 1 < n && a[j + 1] > theta) ++j;
      // A dip shorter than the merge window does not end the action.
      if (!regions.empty() &&
          t[i] - t[regions.back().hi] < cfg.merge_window_s) {
        regions.back().hi = j;
      } else {
        regions.push_back({i, j});
      }
      i = j + 1;
    } else {
      ++i;
    }
  }

  std::vector<ActionSegment> segments;
  segments.reserve(regions.size());
  for (const Run& r : regions) {
    size_t p = r.lo;
    for (size_t k = r.lo; k <= r.hi; ++k) {
      if (a[k] > a[p]) p = k;
    }
    ActionSegment s;
    s.agent = agent;
    s.t_peak_s = t[p];
    s.peak_power_w = a[p];
    s.peak_sign = power[p] >= 0.0 ? 1 : -1;
    if (r.lo == 0) {
      s.t_on_s = t[0];
    } else {
      s.t_on_s = t[r.lo - 1] +
                 dt * (theta - a[r.lo - 1]) / (a[r.lo] - a[r.lo - 1]);
    }
    if (r.hi + 1 == n) {
      s.t_off_s = t[n - 1];
    } else {
      s.t_off_s = t[r.hi] + dt * (a[r.hi] - theta) / (a[r.hi] - a[r.hi + 1]);
    }
    if (s.t_off_s - s.t_on_s >= cfg.min_action_duration_s) {
      segments.push_back(s);
    }
  }
  return segments;
}

std::vector<ActionSegment> detect_actions(
    const std::vector<PowerSample>& samples, const SegmenterConfig& cfg) {
  std::vector<double> t(samples.size()), p1(samples.size()), p2(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    t[i] = samples[i].t;
    p1[i] = samples[i].p1_w;
    p2[i] = samples[i].p2_w;
  }
  auto s1 = detect_actions(t, p1, 1, cfg);
  auto s2 = detect_actions(t, p2, 2, cfg);
  std::vector<ActionSegment> all;
  all.reserve(s1.size() + s2.size());
  std::merge(s1.begin(), s1.end(), s2.begin(), s2.end(),
             std::back_inserter(all),
             [](const ActionSegment& x, const ActionSegment& y) {
               return x.t_on_s < y.t_on_s ||
                      (x.t_on_s == y.t_on_s && x.agent < y.agent);
             });
  return all;
}

PhaseSplit phase_split(const std::vector<ActionSegment>& actions,
                       double session_begin, double session_end,
                       const PhaseBoundary& boundary) {
  const double tol = 1e-9;
  if (boundary.t_start_s < session_begin - tol ||
      boundary.t_dec_s > session_end + tol ||
      boundary.t_dec_s < boundary.t_start_s - tol) {
    throw DataError("phase_split: boundary outside session span");
  }
  PhaseSplit out;
  out.negotiation = {boundary.t_start_s, boundary.t_dec_s};
  out.execution = {boundary.t_dec_s, session_end};
  for (const auto& a : actions) {
    if (a.t_peak_s <= boundary.t_dec_s) {
      out.negotiation_actions.push_back(a);
    } else {
      out.execution_actions.push_back(a);
    }
  }
  return out;
}

}  // namespace dyad
