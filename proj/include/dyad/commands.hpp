#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dyad/features.hpp"
#include "dyad/fusion.hpp"
#include "dyad/segmentation.hpp"
#include "dyad/session_io.hpp"
#include "dyad/simulator.hpp"

namespace dyad {

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

struct SimulateOptions {
  std::string out_dir;
  std::string config_path;                 // optional
  std::vector<std::string> cell_specs;     // "token" or "token=count"
  int default_count = 1;
  std::uint64_t seed = 0;
  double duration_s = 0;                   // 0 = keep scene default
  bool noiseless = false;
  int threads = 0;                         // 0 = library default
};

struct AnalyzeOptions {
  std::string target;         // session dir or batch root
  std::string config_path;    // optional
  std::string model_path;     // optional intent model
};

struct StatsOptions {
  std::string dataset_dir;
};

struct IntentFitOptions {
  std::string dataset_dir;
  std::string model_path;     // output
  double min_label_iou = 0.3;
};

struct PlotOptions {
  std::string session_dir;
  std::string kind;           // power | projected | embedding | all
  std::string model_path;     // for embedding
};

int cmd_simulate(const SimulateOptions& opts);
int cmd_analyze(const AnalyzeOptions& opts);
int cmd_stats(const StatsOptions& opts);
int cmd_intent_fit(const IntentFitOptions& opts);
int cmd_plot(const PlotOptions& opts);

// Pipeline pieces shared by commands and tests.
struct AnalysisConfig {
  FilterConfig filter;
  QuadrantDeadband deadband;
  SegmenterConfig segmenter;
};

AnalysisConfig analysis_config_from_file(const std::string& path);

struct AnalysisResult {
  std::vector<FusedState> states;
  std::vector<PowerSample> power;
  std::vector<ActionSegment> segments;
  PhaseBoundary boundary;
};

AnalysisResult analyze_session(const std::string& dir, const AnalysisConfig& config);

// Temporal-overlap label transfer from ground-truth epochs to a detected
// action; returns the goal of the best match or -1 below the IoU cutoff.
int match_epoch_goal(const ActionSegment& segment, const std::vector<TruthEpoch>& epochs,
                     double min_iou);

}  // namespace dyad
