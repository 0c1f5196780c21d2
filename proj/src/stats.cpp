#include "dyad/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "dyad/common.hpp"
#include "dyad/special_functions.hpp"

namespace dyad {
namespace {

void check_groups(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) {
    throw DataError("anova: need at least 2 groups");
  }
  for (const auto& g : groups) {
    if (g.size() < 2) {
      throw DataError("anova: every group needs >= 2 samples");
    }
    for (double v : g) {
      if (!std::isfinite(v)) {
        throw DataError("anova: non-finite sample");
      }
    }
  }
}

}  // namespace

AnovaResult anova(const std::vector<std::vector<double>>& groups) {
  check_groups(groups);
  AnovaResult r;
  const int k = static_cast<int>(groups.size());
  int n = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    double sum = 0.0;
    for (double v : g) sum += v;
    r.group_means.push_back(sum / static_cast<double>(g.size()));
    r.group_counts.push_back(static_cast<int>(g.size()));
    grand += sum;
    n += static_cast<int>(g.size());
  }
  grand /= static_cast<double>(n);

  r.ss_between = 0.0;
  r.ss_within = 0.0;
  for (int i = 0; i < k; ++i) {
    const double dm = r.group_means[static_cast<size_t>(i)] - grand;
    r.ss_between += r.group_counts[static_cast<size_t>(i)] * dm * dm;
    for (double v : groups[static_cast<size_t>(i)]) {
      const double d = v - r.group_means[static_cast<size_t>(i)];
      r.ss_within += d * d;
    }
  }
  r.df_between = k - 1;
  r.df_within = n - k;

  if (r.ss_within > 0.0) {
    r.f_statistic = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
    r.p_value = f_distribution_sf(r.f_statistic, r.df_between, r.df_within);
  } else if (r.ss_between > 0.0) {
    r.f_statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
  } else {
    r.f_statistic = 0.0;
    r.p_value = 1.0;
  }
  return r;
}

TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups,
                      double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DataError("tukey: alpha outside (0, 1)");
  }
  const AnovaResult base = anova(groups);
  TukeyResult r;
  r.alpha = alpha;
  r.df_within = base.df_within;
  r.ms_within = base.ss_within / base.df_within;

  const int k = static_cast<int>(groups.size());
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      TukeyPair p;
      p.group_a = i;
      p.group_b = j;
      p.mean_difference = base.group_means[static_cast<size_t>(i)] -
                          base.group_means[static_cast<size_t>(j)];
      const double se =
          std::sqrt(r.ms_within / 2.0 *
                    (1.0 / base.group_counts[static_cast<size_t>(i)] +
                     1.0 / base.group_counts[static_cast<size_t>(j)]));
      if (se > 0.0) {
        p.q_statistic = std::abs(p.mean_difference) / se;
        p.p_adjusted =
            1.0 - studentized_range_cdf(p.q_statistic, k, base.df_within);
      } else if (p.mean_difference != 0.0) {
        p.q_statistic = std::numeric_limits<double>::infinity();
        p.p_adjusted = 0.0;
      } else {
        p.q_statistic = 0.0;
        p.p_adjusted = 1.0;
      }
      p.significant = p.p_adjusted < alpha;
      r.pairs.push_back(p);
    }
  }
  return r;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw DataError("percentile: empty input");
  if (!(p >= 0.0 && p <= 100.0)) {
    throw DataError("percentile: p outside [0, 100]");
  }
  std::sort(values.begin(), values.end());
  const double pos = p / 100.0 * (static_cast<double>(values.size()) - 1.0);
  const size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

BoxSummary box_summary(std::vector<double> values) {
  if (values.empty()) throw DataError("box_summary: empty input");
  std::sort(values.begin(), values.end());
  BoxSummary b;
  b.count = static_cast<int>(values.size());
  b.mean = 0.0;
  for (double v : values) b.mean += v;
  b.mean /= static_cast<double>(values.size());
  b.q1 = percentile(values, 25.0);
  b.median = percentile(values, 50.0);
  b.q3 = percentile(values, 75.0);
  const double iqr = b.q3 - b.q1;
  const double fence_low = b.q1 - 1.5 * iqr;
  const double fence_high = b.q3 + 1.5 * iqr;
  b.whisker_low = b.q1;
  b.whisker_high = b.q3;
  for (double v : values) {
    if (v < fence_low || v > fence_high) {
      b.outliers.push_back(v);
    }
  }
  for (double v : values) {
    if (v >= fence_low) {
      b.whisker_low = v;
      break;
    }
  }
  for (auto it = values.rbegin(); it != values.rend(); ++it) {
    if (*it <= fence_high) {
      b.whisker_high = *it;
      break;
    }
  }
  return b;
}

std::vector<TypeSummary> negotiation_summary(
    const std::vector<NegotiationSample>& samples) {
  if (samples.empty()) {
    throw DataError("negotiation_summary: empty input");
  }
  std::map<InteractionType, std::vector<double>> by_type;
  for (const auto& s : samples) {
    if (!(s.duration_s >= 0.0)) {
      throw DataError("negotiation_summary: negative duration");
    }
    by_type[s.type].push_back(s.duration_s);
  }
  std::vector<TypeSummary> out;
  for (auto& [type, durations] : by_type) {
    out.push_back({type, box_summary(std::move(durations))});
  }
  return out;
}

}  // namespace dyad
