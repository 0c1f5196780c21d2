#pragma once

#include <string>
#include <vector>

#include "dyad/taxonomy.hpp"

namespace dyad {

struct NegotiationSample {
  std::string session_id;
  InteractionType type;
  double duration_s;
};

struct AnovaResult {
  double f_statistic;
  double p_value;
  int df_between;
  int df_within;
  double ss_between;
  double ss_within;
  std::vector<double> group_means;
  std::vector<int> group_counts;
};

// One-way fixed-effects ANOVA. Zero within-variance with distinct means
// reports F = +inf, p = 0; zero between-variance reports F = 0, p = 1.
AnovaResult anova(const std::vector<std::vector<double>>& groups);

struct TukeyPair {
  int group_a;
  int group_b;
  double mean_difference;  // mean_a - mean_b
  double q_statistic;
  double p_adjusted;
  bool significant;
};

struct TukeyResult {
  std::vector<TukeyPair> pairs;
  double alpha;
  int df_within;
  double ms_within;
};

// Pairwise comparisons with the Tukey-Kramer standard error for unequal
// group sizes.
TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups,
                      double alpha = 0.05);

// Linear interpolation between order statistics; p in [0, 100].
double percentile(std::vector<double> values, double p);

struct BoxSummary {
  int count;
  double mean;
  double q1;
  double median;
  double q3;
  double whisker_low;   // smallest value inside the 1.5 IQR fence
  double whisker_high;  // largest value inside the fence
  std::vector<double> outliers;
};

BoxSummary box_summary(std::vector<double> values);

struct TypeSummary {
  InteractionType type;
  BoxSummary box;
};

// Per-interaction-type box summaries, ordered by the enum.
std::vector<TypeSummary> negotiation_summary(
    const std::vector<NegotiationSample>& samples);

}  // namespace dyad
