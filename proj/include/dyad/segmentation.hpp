#pragma once

#include <utility>
#include <vector>

#include "dyad/features.hpp"
#include "dyad/geometry.hpp"

namespace dyad {

struct SegmenterConfig {
  double epsilon_m = 0.2;        // heading-ray tolerance
  double v_min_mps = 0.05;       // consensus speed gate
  double power_threshold_w = 0;  // 0 selects the relative rule below
  double threshold_floor_w = 0.5;
  double threshold_fraction = 0.2;  // of the 95th percentile of |P|
  double min_peak_separation_s = 0.15;
  double merge_window_s = 0.25;
  double min_action_duration_s = 0.1;
  double arrival_radius_m = 0.2;

  void validate() const;
};

struct PhaseBoundary {
  double t_start_s = 0.0;
  double t_dec_s = 0.0;
  double negotiation_duration_s = 0.0;
  int settled_goal = -1;  // -1 when no consensus was reached
  bool consensus = false;
};

struct ActionSegment {
  int agent = 1;  // 1 or 2
  double t_on_s = 0.0;
  double t_peak_s = 0.0;
  double t_off_s = 0.0;
  double peak_power_w = 0.0;  // |P| at the peak
  int peak_sign = 1;          // sign of P at the peak
  int label = -1;             // ground-truth goal, if known
  int classified_goal = -1;
  double confidence = 0.0;
};

struct TrajectorySample {
  double t;
  Vec2 position;
  Vec2 velocity;
};

// Absolute detection threshold for one power stream: the configured value,
// or max(floor, fraction * p95(|P|)) when the configured value is zero.
double resolve_power_threshold(const std::vector<double>& power,
                               const SegmenterConfig& cfg);

// Earliest time from which the object keeps moving (speed >= v_min) with its
// velocity ray passing within epsilon of the goal, all the way to arrival.
// The scan runs backward from the first entry into the arrival radius; if the
// object never arrives or the condition never holds, the result carries
// consensus = false.
PhaseBoundary detect_negotiation_end(const std::vector<TrajectorySample>& traj,
                                     const GoalLayout& layout, int goal,
                                     double t_start,
                                     const SegmenterConfig& cfg = {});

// Same, but the settled goal is inferred: the goal whose arrival radius the
// trajectory enters first.
PhaseBoundary detect_boundary(const std::vector<TrajectorySample>& traj,
                              const GoalLayout& layout, double t_start,
                              const SegmenterConfig& cfg = {});

// Push-pull actions of one agent from its power stream: maximal spans of
// |P| above the threshold, with dips shorter than merge_window bridged so
// nearby peaks collapse into one segment. Onset and offset are the
// interpolated threshold crossings; the peak is the tallest sample inside.
std::vector<ActionSegment> detect_actions(const std::vector<double>& t,
                                          const std::vector<double>& power,
                                          int agent,
                                          const SegmenterConfig& cfg = {});

// Both agents of a feature stream.
std::vector<ActionSegment> detect_actions(
    const std::vector<PowerSample>& samples, const SegmenterConfig& cfg = {});

struct PhaseSplit {
  std::pair<double, double> negotiation;  // [t_start, t_dec]
  std::pair<double, double> execution;    // (t_dec, session end]
  std::vector<ActionSegment> negotiation_actions;
  std::vector<ActionSegment> execution_actions;
};

// Assigns each action to a phase by its peak time (peak at or before t_dec
// counts as negotiation).
PhaseSplit phase_split(const std::vector<ActionSegment>& actions,
                       double session_begin, double session_end,
                       const PhaseBoundary& boundary);

}  // namespace dyad
