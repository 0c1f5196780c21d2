#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "dyad/features.hpp"
#include "dyad/fusion.hpp"
#include "dyad/segmentation.hpp"
#include "dyad/taxonomy.hpp"

namespace dyad {

// Per-action aggregate over [t_on, t_off]. Layout: for each goal the block
// [mean p_proj, peak p_proj, mean f_proj, force impulse, displacement toward
// goal], then [duration, peak |P|, mean force magnitude].
struct ActionFeatureVector {
  Eigen::VectorXd values;
  int goal_count = 0;

  static int dimension(int goals) { return 5 * goals + 3; }
};

ActionFeatureVector extract_features(const ActionSegment& segment,
                                     const std::vector<FusedState>& fused,
                                     const GoalLayout& layout);

// Two-component discriminant reduction with nearest-centroid classes.
struct IntentModel {
  std::vector<int> classes;    // ascending goal indices
  Eigen::VectorXd mean;        // per-feature standardization offset
  Eigen::VectorXd scale;       // per-feature standardization divisor
  Eigen::MatrixXd projection;  // d x 2
  Eigen::MatrixXd centroids;   // classes x 2

  bool fitted() const { return projection.size() > 0; }
};

IntentModel fit_lda(const std::vector<ActionFeatureVector>& features,
                    const std::vector<int>& labels);

Vec2 embed(const IntentModel& model, const ActionFeatureVector& feature);

// Nearest centroid in the reduced space; ties go to the lowest goal index.
// Confidence is a softmin over squared centroid distances.
std::pair<int, double> classify(const IntentModel& model,
                                const ActionFeatureVector& feature);

struct ClusteringScores {
  double calinski_harabasz;
  double davies_bouldin;
  double silhouette;
};

ClusteringScores clustering_scores(const std::vector<Vec2>& points,
                                   const std::vector<int>& labels);

std::string serialize(const IntentModel& model);
IntentModel deserialize_intent_model(const std::string& text);

}  // namespace dyad
