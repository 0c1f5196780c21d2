#include "dyad/intent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dyad/common.hpp"

namespace dyad {
namespace {

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double acc = 0.0;
  for (size_t i = 1; i < t.size(); ++i) {
    acc += 0.5 * (y[i] + y[i - 1]) * (t[i] - t[i - 1]);
  }
  return acc;
}

}  // namespace

ActionFeatureVector extract_features(const ActionSegment& segment,
                                     const std::vector<FusedState>& fused,
                                     const GoalLayout& layout) {
  if (segment.agent != 1 && segment.agent != 2) {
    throw DataError("extract_features: agent must be 1 or 2");
  }
  const double tol = 1e-9;
  size_t i0 = 0;
  while (i0 < fused.size() && fused[i0].t < segment.t_on_s - tol) ++i0;
  size_t i1 = i0;
  while (i1 < fused.size() && fused[i1].t <= segment.t_off_s + tol) ++i1;
  if (i1 - i0 < 2) {
    throw DataError("extract_features: empty segment window");
  }

  const size_t m = i1 - i0;
  std::vector<double> t(m);
  std::vector<Vec3> f(m), v(m);
  std::vector<Vec2> pos(m);
  for (size_t i = 0; i < m; ++i) {
    const FusedState& s = fused[i0 + i];
    t[i] = s.t;
    f[i] = segment.agent == 1 ? s.f1 : s.f2;
    v[i] = segment.agent == 1 ? s.v1 : s.v2;
    pos[i] = planar(s.pose.position);
  }
  const double span = t.back() - t.front();

  const int goals = layout.count();
  ActionFeatureVector out;
  out.goal_count = goals;
  out.values.resize(ActionFeatureVector::dimension(goals));

  std::vector<double> fp(m), vp(m), pp(m);
  for (int g = 0; g < goals; ++g) {
    for (size_t i = 0; i < m; ++i) {
      const Vec2 dir = goal_direction(pos[i], layout, g);
      const auto proj = projected_features(f[i], v[i], dir);
      fp[i] = proj.f_proj_n;
      vp[i] = proj.v_proj_mps;
      pp[i] = proj.p_proj_w;
    }
    const int base = 5 * g;
    out.values[base + 0] = trapezoid(t, pp) / span;
    out.values[base + 1] = *std::max_element(pp.begin(), pp.end());
    out.values[base + 2] = trapezoid(t, fp) / span;
    out.values[base + 3] = trapezoid(t, fp);
    out.values[base + 4] = trapezoid(t, vp);
  }

  std::vector<double> fmag(m), pabs(m);
  for (size_t i = 0; i < m; ++i) {
    fmag[i] = f[i].norm();
    pabs[i] = std::abs(f[i].dot(v[i]));
  }
  const int tail = 5 * goals;
  out.values[tail + 0] = segment.t_off_s - segment.t_on_s;
  out.values[tail + 1] = *std::max_element(pabs.begin(), pabs.end());
  out.values[tail + 2] = trapezoid(t, fmag) / span;

  if (!out.values.allFinite()) {
    throw DataError("extract_features: non-finite aggregate");
  }
  return out;
}

IntentModel fit_lda(const std::vector<ActionFeatureVector>& features,
                    const std::vector<int>& labels) {
  if (features.size() != labels.size()) {
    throw DataError("fit_lda: feature/label count mismatch");
  }
  const auto n = static_cast<Eigen::Index>(features.size());
  if (n < 4) throw DataError("fit_lda: too few samples");
  const Eigen::Index d = features[0].values.size();
  if (d < 2) throw DataError("fit_lda: need at least 2 features");

  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (features[static_cast<size_t>(i)].values.size() != d) {
      throw DataError("fit_lda: inconsistent feature dimensions");
    }
    x.row(i) = features[static_cast<size_t>(i)].values.transpose();
  }

  std::map<int, int> counts;
  for (int l : labels) ++counts[l];
  if (counts.size() < 2) {
    throw DataError("fit_lda: need at least 2 classes");
  }
  for (const auto& [cls, cnt] : counts) {
    if (cnt < 2) {
      throw DataError("fit_lda: every class needs >= 2 samples");
    }
  }

  IntentModel model;
  for (const auto& [cls, cnt] : counts) model.classes.push_back(cls);

  model.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - model.mean.transpose();
  const Eigen::VectorXd var =
      centered.array().square().colwise().sum().transpose().matrix() /
      static_cast<double>(n);
  model.scale = var.array().sqrt().matrix();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (model.scale[j] < 1e-12) model.scale[j] = 1.0;
  }

  const Eigen::MatrixXd xs = centered * model.scale.cwiseInverse().asDiagonal();

  const Eigen::RowVectorXd global_mean = xs.colwise().mean();
  Eigen::MatrixXd sw = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd sb = Eigen::MatrixXd::Zero(d, d);
  for (size_t ci = 0; ci < model.classes.size(); ++ci) {
    const int cls = model.classes[ci];
    Eigen::RowVectorXd mc = Eigen::RowVectorXd::Zero(d);
    int nc = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (labels[static_cast<size_t>(i)] == cls) {
        mc += xs.row(i);
        ++nc;
      }
    }
    mc /= static_cast<double>(nc);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (labels[static_cast<size_t>(i)] == cls) {
        const Eigen::RowVectorXd r = xs.row(i) - mc;
        sw += r.transpose() * r;
      }
    }
    const Eigen::RowVectorXd b = mc - global_mean;
    sb += static_cast<double>(nc) * b.transpose() * b;
  }

  double ridge = 1e-6 * sw.trace() / static_cast<double>(d);
  if (!(ridge > 0.0)) ridge = 1e-6;
  sw += ridge * Eigen::MatrixXd::Identity(d, d);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(sb, sw);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("fit_lda: eigenproblem failed to converge");
  }

  model.projection.resize(d, 2);
  model.projection.col(0) = solver.eigenvectors().col(d - 1);
  model.projection.col(1) = solver.eigenvectors().col(d - 2);
  for (int c = 0; c < 2; ++c) {
    Eigen::Index imax = 0;
    model.projection.col(c).cwiseAbs().maxCoeff(&imax);
    if (model.projection(imax, c) < 0.0) model.projection.col(c) *= -1.0;
  }

  model.centroids.resize(static_cast<Eigen::Index>(model.classes.size()), 2);
  for (size_t ci = 0; ci < model.classes.size(); ++ci) {
    Eigen::RowVectorXd mc = Eigen::RowVectorXd::Zero(d);
    int nc = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (labels[static_cast<size_t>(i)] == model.classes[ci]) {
        mc += xs.row(i);
        ++nc;
      }
    }
    mc /= static_cast<double>(nc);
    model.centroids.row(static_cast<Eigen::Index>(ci)) = mc * model.projection;
  }
  return model;
}

Vec2 embed(const IntentModel& model, const ActionFeatureVector& feature) {
  if (!model.fitted()) throw std::logic_error("embed: model not fitted");
  if (feature.values.size() != model.mean.size()) {
    throw DataError("embed: feature dimension mismatch");
  }
  const Eigen::RowVectorXd xs =
      ((feature.values - model.mean).array() / model.scale.array())
          .matrix()
          .transpose();
  const Eigen::RowVector2d y = xs * model.projection;
  return Vec2(y[0], y[1]);
}

std::pair<int, double> classify(const IntentModel& model,
                                const ActionFeatureVector& feature) {
  const Vec2 y = embed(model, feature);
  const Eigen::Index k = model.centroids.rows();
  Eigen::VectorXd d2(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    d2[i] = (y.transpose() - model.centroids.row(i)).squaredNorm();
  }
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < k; ++i) {
    if (d2[i] < d2[best]) best = i;
  }
  const double dmin = d2[best];
  double total = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) total += std::exp(-(d2[i] - dmin));
  return {model.classes[static_cast<size_t>(best)], 1.0 / total};
}

ClusteringScores clustering_scores(const std::vector<Vec2>& points,
                                   const std::vector<int>& labels) {
  const size_t n = points.size();
  if (labels.size() != n) {
    throw DataError("clustering_scores: point/label mismatch");
  }
  if (n < 3) throw DataError("clustering_scores: need >= 3 points");

  std::map<int, std::vector<size_t>> clusters;
  for (size_t i = 0; i < n; ++i) clusters[labels[i]].push_back(i);
  const size_t k = clusters.size();
  if (k < 2) throw DataError("clustering_scores: need >= 2 clusters");
  if (k >= n) {
    throw DataError(
        "clustering_scores: silhouette undefined for singleton-only labeling");
  }

  std::vector<Vec2> centroids;
  std::vector<size_t> sizes;
  Vec2 global = Vec2::Zero();
  for (const auto& [cls, idx] : clusters) {
    Vec2 c = Vec2::Zero();
    for (size_t i : idx) c += points[i];
    c /= static_cast<double>(idx.size());
    centroids.push_back(c);
    sizes.push_back(idx.size());
  }
  for (const auto& p : points) global += p;
  global /= static_cast<double>(n);

  double between = 0.0, within = 0.0;
  {
    size_t ci = 0;
    for (const auto& [cls, idx] : clusters) {
      between +=
          static_cast<double>(idx.size()) * (centroids[ci] - global).squaredNorm();
      for (size_t i : idx) within += (points[i] - centroids[ci]).squaredNorm();
      ++ci;
    }
  }
  const double ch =
      within > 0.0
          ? (between / static_cast<double>(k - 1)) /
                (within / static_cast<double>(n - k))
          : std::numeric_limits<double>::infinity();

  std::vector<double> sigma(k, 0.0);
  {
    size_t ci = 0;
    for (const auto& [cls, idx] : clusters) {
      for (size_t i : idx) sigma[ci] += (points[i] - centroids[ci]).norm();
      sigma[ci] /= static_cast<double>(idx.size());
      ++ci;
    }
  }
  double db = 0.0;
  for (size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const double dij = (centroids[i] - centroids[j]).norm();
      double r;
      if (dij > 0.0) {
        r = (sigma[i] + sigma[j]) / dij;
      } else {
        r = sigma[i] + sigma[j] > 0.0
                ? std::numeric_limits<double>::infinity()
                : 0.0;
      }
      worst = std::max(worst, r);
    }
    db += worst;
  }
  db /= static_cast<double>(k);

  std::vector<int> cluster_of(n);
  std::vector<int> cluster_ids;
  {
    int ci = 0;
    for (const auto& [cls, idx] : clusters) {
      for (size_t i : idx) cluster_of[i] = ci;
      cluster_ids.push_back(cls);
      ++ci;
    }
  }
  std::vector<double> s(n, 0.0);
  const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const size_t i = static_cast<size_t>(ii);
    const int own = cluster_of[i];
    if (sizes[static_cast<size_t>(own)] == 1) {
      s[i] = 0.0;
      continue;
    }
    std::vector<double> mean_dist(k, 0.0);
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      mean_dist[static_cast<size_t>(cluster_of[j])] +=
          (points[i] - points[j]).norm();
    }
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < k; ++c) {
      if (static_cast<int>(c) == own) {
        a = mean_dist[c] / static_cast<double>(sizes[c] - 1);
      } else {
        b = std::min(b, mean_dist[c] / static_cast<double>(sizes[c]));
      }
    }
    const double denom = std::max(a, b);
    s[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  }
  double sil = 0.0;
  for (double v : s) sil += v;
  sil /= static_cast<double>(n);

  return {ch, db, sil};
}

std::string serialize(const IntentModel& model) {
  if (!model.fitted()) throw std::logic_error("serialize: model not fitted");
  std::ostringstream out;
  out << "intent_model " << kSchemaVersion << "\n";
  out << "classes " << model.classes.size() << "\n";
  for (size_t i = 0; i < model.classes.size(); ++i) {
    out << (i ? " " : "") << model.classes[i];
  }
  out << "\n";
  out << "dim " << model.mean.size() << "\n";
  auto write_row = [&out](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      out << (i ? " " : "") << to_shortest(v[i]);
    }
    out << "\n";
  };
  out << "mean\n";
  write_row(model.mean);
  out << "scale\n";
  write_row(model.scale);
  out << "projection\n";
  for (Eigen::Index r = 0; r < model.projection.rows(); ++r) {
    out << to_shortest(model.projection(r, 0)) << " "
        << to_shortest(model.projection(r, 1)) << "\n";
  }
  out << "centroids\n";
  for (Eigen::Index r = 0; r < model.centroids.rows(); ++r) {
    out << to_shortest(model.centroids(r, 0)) << " "
        << to_shortest(model.centroids(r, 1)) << "\n";
  }
  return out.str();
}

IntentModel deserialize_intent_model(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "intent_model") {
    throw DataError("intent model: bad header");
  }
  if (version != kSchemaVersion) {
    throw DataError("intent model: unsupported version");
  }
  size_t k = 0;
  if (!(in >> word >> k) || word != "classes" || k < 2) {
    throw DataError("intent model: bad class count");
  }
  IntentModel model;
  model.classes.resize(k);
  for (size_t i = 0; i < k; ++i) {
    if (!(in >> model.classes[i])) throw DataError("intent model: bad classes");
  }
  Eigen::Index d = 0;
  if (!(in >> word >> d) || word != "dim" || d < 2) {
    throw DataError("intent model: bad dimension");
  }
  auto read_vector = [&in, d](const char* tag) {
    std::string w;
    Eigen::VectorXd v(d);
    if (!(in >> w) || w != tag) {
      throw DataError(std::string("intent model: expected ") + tag);
    }
    for (Eigen::Index i = 0; i < d; ++i) {
      if (!(in >> v[i])) {
        throw DataError(std::string("intent model: bad ") + tag);
      }
    }
    return v;
  };
  model.mean = read_vector("mean");
  model.scale = read_vector("scale");
  if (!(in >> word) || word != "projection") {
    throw DataError("intent model: expected projection");
  }
  model.projection.resize(d, 2);
  for (Eigen::Index r = 0; r < d; ++r) {
    if (!(in >> model.projection(r, 0) >> model.projection(r, 1))) {
      throw DataError("intent model: bad projection");
    }
  }
  if (!(in >> word) || word != "centroids") {
    throw DataError("intent model: expected centroids");
  }
  model.centroids.resize(static_cast<Eigen::Index>(k), 2);
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(k); ++r) {
    if (!(in >> model.centroids(r, 0) >> model.centroids(r, 1))) {
      throw DataError("intent model: bad centroids");
    }
  }
  return model;
}

}  // namespace dyad
