#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dyad/config.hpp"
#include "dyad/features.hpp"
#include "dyad/fusion.hpp"
#include "dyad/intent.hpp"
#include "dyad/segmentation.hpp"
#include "dyad/simulator.hpp"
#include "dyad/taxonomy.hpp"

namespace dyad {

// Goal indices are 0-based in memory and 1-based in every file; 0 in a file
// means "none".
int goal_to_file(int goal);
int goal_from_file(long long value, int goal_count, const std::string& context);

struct SessionPaths {
  std::string root;

  explicit SessionPaths(std::string dir) : root(std::move(dir)) {}
  std::string manifest() const { return root + "/manifest.txt"; }
  std::string raw_ft() const { return root + "/raw_ft.csv"; }
  std::string raw_imu() const { return root + "/raw_imu.csv"; }
  std::string raw_pose() const { return root + "/raw_pose.csv"; }
  std::string truth() const { return root + "/truth.csv"; }
  std::string truth_state() const { return root + "/truth_state.csv"; }
  std::string processed() const { return root + "/processed.csv"; }
  std::string features() const { return root + "/features.csv"; }
  std::string segments() const { return root + "/segments.csv"; }
  std::string boundary() const { return root + "/boundary.json"; }
  std::string intent_report() const { return root + "/intent_report.csv"; }
};

struct SessionManifest {
  int schema_version = kSchemaVersion;
  std::string id;
  InteractionType cell = InteractionType::NoGoalVsNoGoal;
  bool kcg = false;
  GoalAssignment assignment;
  std::uint64_t seed = 0;
  double t_start_s = 0;
  double duration_s = 0;
  bool consensus = false;
  double consensus_time_s = -1;
  int settled_goal = -1;
  GoalLayout layout;
  double ft_rate_hz = 0;
  double imu_rate_hz = 0;
  double camera_rate_hz = 0;
};

void write_session(const std::string& dir, const SceneConfig& scene, const AgentPolicy& agent1,
                   const AgentPolicy& agent2, bool kcg, std::uint64_t seed,
                   const std::string& session_id, const SimulatedSession& session);

SessionManifest read_manifest(const std::string& path);
SceneConfig scene_from_manifest(const std::string& path);

RawStreams read_raw_streams(const std::string& dir);

std::vector<TruthEpoch> read_truth_epochs(const std::string& path, int goal_count);
std::vector<TruthState> read_truth_states(const std::string& path);

void write_processed(const std::string& path, const std::vector<FusedState>& states);
std::vector<FusedState> read_processed(const std::string& path);

void write_features(const std::string& path, const std::vector<PowerSample>& samples,
                    int goal_count);
std::vector<PowerSample> read_features(const std::string& path, int goal_count);

void write_segments(const std::string& path, const std::vector<ActionSegment>& segments);
std::vector<ActionSegment> read_segments(const std::string& path, int goal_count);

void write_boundary(const std::string& path, const PhaseBoundary& boundary,
                    const SegmenterConfig& config);
PhaseBoundary read_boundary(const std::string& path);

void save_intent_model(const std::string& path, const IntentModel& model);
IntentModel load_intent_model(const std::string& path);

struct IntentReportRow {
  int agent = 1;
  double t_on_s = 0;
  double t_peak_s = 0;
  double t_off_s = 0;
  int true_goal = -1;
  int classified_goal = -1;
  double confidence = 0;
};

void write_intent_report(const std::string& path, const std::vector<IntentReportRow>& rows);

// Dataset-level bookkeeping for generated batches.
struct BatchManifest {
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 0;
  std::vector<BatchSession> sessions;
};

void write_batch_manifest(const std::string& path, const BatchManifest& manifest);
BatchManifest read_batch_manifest(const std::string& path);

std::vector<std::string> list_batch_sessions(const std::string& root);

}  // namespace dyad
