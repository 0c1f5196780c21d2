#include "dyad/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dyad {
namespace {

template <typename T>
void check_stream(const std::vector<T>& s, const char* name) {
  if (s.empty()) throw DataError(std::string("align: empty stream: ") + name);
  for (size_t i = 1; i < s.size(); ++i) {
    if (!(s[i].t > s[i - 1].t)) {
      throw DataError(std::string("align: timestamps not strictly increasing: ") +
                      name);
    }
  }
}

template <typename T>
double stream_rate(const std::vector<T>& s) {
  if (s.size() < 2) return 0.0;
  return (static_cast<double>(s.size()) - 1.0) / (s.back().t - s.front().t);
}

// Linear interpolation over a (t, value) series, clamped at the ends.
class Interp {
 public:
  Interp(std::vector<double> t, std::vector<Vec3> v)
      : t_(std::move(t)), v_(std::move(v)) {}

  Vec3 at(double t) const {
    if (t <= t_.front()) return v_.front();
    if (t >= t_.back()) return v_.back();
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    const size_t i = static_cast<size_t>(it - t_.begin());
    const double a = (t - t_[i - 1]) / (t_[i] - t_[i - 1]);
    return (1.0 - a) * v_[i - 1] + a * v_[i];
  }

 private:
  std::vector<double> t_;
  std::vector<Vec3> v_;
};

// Filter one Vec3 channel of a uniform-rate stream.
template <typename T, typename Getter>
Interp filtered_channel(const std::vector<T>& s, Getter get, double cutoff,
                        double mode_rate_hint, FilterMode mode) {
  std::vector<double> t(s.size());
  std::vector<double> x(s.size()), y(s.size()), z(s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    t[i] = s[i].t;
    const Vec3 v = get(s[i]);
    x[i] = v.x();
    y[i] = v.y();
    z[i] = v.z();
  }
  const double fs = mode_rate_hint > 0.0 ? mode_rate_hint : stream_rate(s);
  const double fc = std::min(cutoff, 0.45 * fs);
  x = lowpass(x, fc, fs, mode);
  y = lowpass(y, fc, fs, mode);
  z = lowpass(z, fc, fs, mode);
  std::vector<Vec3> out(s.size());
  for (size_t i = 0; i < s.size(); ++i) out[i] = Vec3(x[i], y[i], z[i]);
  return Interp(std::move(t), std::move(out));
}

}  // namespace

void FilterConfig::validate() const {
  if (!(cutoff_hz > 0.0) || !(output_rate_hz > 0.0) ||
      cutoff_hz >= output_rate_hz / 2.0) {
    throw DataError("filter config: cutoff must be below output Nyquist");
  }
  for (double v : {ekf_gyro_noise, ekf_orientation_noise, kf_accel_noise,
                   kf_position_noise}) {
    if (!(v > 0.0)) throw DataError("filter config: variances must be positive");
  }
}

Quat orientation_at(const std::vector<OrientationEstimate>& stream, double t) {
  if (stream.empty()) throw DataError("orientation stream empty");
  if (t <= stream.front().t) return stream.front().orientation;
  if (t >= stream.back().t) return stream.back().orientation;
  const auto it = std::upper_bound(
      stream.begin(), stream.end(), t,
      [](double tt, const OrientationEstimate& e) { return tt < e.t; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double a = (t - lo.t) / (hi.t - lo.t);
  return lo.orientation.slerp(a, hi.orientation);
}

std::vector<OrientationEstimate> fuse_orientation(
    const std::vector<ImuSample>& imu,
    const std::vector<PoseObservation>& pose_obs,
    const OrientationEkf::Config& cfg, const std::vector<double>& ticks) {
  if (pose_obs.empty()) {
    throw DataError("orientation fusion: no orientation observations");
  }
  OrientationEkf ekf(cfg);
  std::vector<OrientationEstimate> trace;
  trace.reserve(imu.size() + pose_obs.size());

  size_t io = 0;
  Vec3 held_gyro = Vec3::Zero();
  for (size_t ii = 0; ii <= imu.size(); ++ii) {
    const double t_imu =
        ii < imu.size() ? imu[ii].t : std::numeric_limits<double>::infinity();
    while (io < pose_obs.size() && pose_obs[io].t <= t_imu) {
      const auto& obs = pose_obs[io++];
      if (!ekf.initialized()) {
        ekf.initialize(obs.t, obs.orientation);
      } else {
        ekf.predict(obs.t, held_gyro);
        ekf.update(obs.orientation);
      }
      trace.push_back({ekf.time(), ekf.orientation(), ekf.bias()});
    }
    if (ii == imu.size()) break;
    held_gyro = imu[ii].gyro;
    if (ekf.initialized()) {
      ekf.predict(t_imu, held_gyro);
      trace.push_back({ekf.time(), ekf.orientation(), ekf.bias()});
    }
  }
  if (trace.empty()) throw DataError("orientation fusion: nothing to estimate");

  std::vector<OrientationEstimate> out;
  out.reserve(ticks.size());
  for (double t : ticks) {
    Quat q = orientation_at(trace, t);
    // bias: piecewise-constant from the most recent estimate
    auto it = std::upper_bound(
        trace.begin(), trace.end(), t,
        [](double tt, const OrientationEstimate& e) { return tt < e.t; });
    const Vec3 bias = it == trace.begin() ? trace.front().gyro_bias
                                          : (it - 1)->gyro_bias;
    out.push_back({t, q, bias});
  }
  return out;
}

std::vector<PvEstimate> fuse_position(
    const std::vector<ImuSample>& imu,
    const std::vector<PoseObservation>& pose_obs,
    const std::vector<OrientationEstimate>& orientation,
    const PositionKf::Config& cfg, double gravity,
    const std::vector<double>& ticks) {
  if (pose_obs.empty()) {
    throw DataError("position fusion: no position observations");
  }
  PositionKf kf(cfg);
  std::vector<double> tr_t;
  std::vector<Vec3> tr_p, tr_v;

  auto record = [&](double t, const Vec3& p, const Vec3& v) {
    tr_t.push_back(t);
    tr_p.push_back(p);
    tr_v.push_back(v);
  };

  size_t io = 0;
  Vec3 held_accel = Vec3::Zero();
  const Vec3 g_comp(0.0, 0.0, -gravity);
  auto spatial_accel = [&](double t, const Vec3& body_specific_force) -> Vec3 {
    return orientation_at(orientation, t) * body_specific_force + g_comp;
  };

  for (size_t ii = 0; ii <= imu.size(); ++ii) {
    const double t_imu =
        ii < imu.size() ? imu[ii].t : std::numeric_limits<double>::infinity();
    while (io < pose_obs.size() && pose_obs[io].t <= t_imu) {
      const auto& obs = pose_obs[io++];
      if (!kf.initialized()) {
        kf.initialize(obs.t, obs.position);
      } else {
        kf.predict(obs.t, spatial_accel(kf.time(), held_accel));
        kf.update(obs.position);
      }
      record(kf.time(), kf.position(), kf.velocity());
    }
    if (ii == imu.size()) break;
    held_accel = imu[ii].accel;
    if (kf.initialized()) {
      kf.predict(t_imu, spatial_accel(t_imu, held_accel));
      record(kf.time(), kf.position(), kf.velocity());
    }
  }
  if (tr_t.empty()) throw DataError("position fusion: nothing to estimate");

  Interp pi(tr_t, tr_p);
  Interp vi(std::move(tr_t), std::move(tr_v));
  std::vector<PvEstimate> out;
  out.reserve(ticks.size());
  for (double t : ticks) out.push_back({t, pi.at(t), vi.at(t)});
  return out;
}

std::vector<FusedState> align(const RawStreams& raw, const FilterConfig& cfg,
                              const HandleGeometry& geometry) {
  cfg.validate();
  check_stream(raw.ft1, "ft1");
  check_stream(raw.ft2, "ft2");
  check_stream(raw.imu, "imu");
  check_stream(raw.pose_obs, "pose");

  const double t_begin = std::max(
      {raw.ft1.front().t, raw.ft2.front().t, raw.imu.front().t,
       raw.pose_obs.front().t});
  const double t_end = std::min({raw.ft1.back().t, raw.ft2.back().t,
                                 raw.imu.back().t, raw.pose_obs.back().t});
  if (!(t_end - t_begin >= 1.0)) {
    throw DataError("align: streams overlap less than 1 s");
  }

  // Uniform grid snapped to integer multiples of the output period.
  const double rate = cfg.output_rate_hz;
  const long long i0 =
      static_cast<long long>(std::ceil(t_begin * rate - 1e-9));
  const long long i1 = static_cast<long long>(std::floor(t_end * rate + 1e-9));
  std::vector<double> ticks;
  ticks.reserve(static_cast<size_t>(i1 - i0 + 1));
  for (long long i = i0; i <= i1; ++i) {
    ticks.push_back(static_cast<double>(i) / rate);
  }

  const double ft_rate = stream_rate(raw.ft1);
  const double imu_rate = stream_rate(raw.imu);

  Interp f1 = filtered_channel(
      raw.ft1, [](const WrenchSample& s) { return s.force; }, cfg.cutoff_hz,
      ft_rate, cfg.mode);
  Interp f2 = filtered_channel(
      raw.ft2, [](const WrenchSample& s) { return s.force; }, cfg.cutoff_hz,
      ft_rate, cfg.mode);
  Interp gyro = filtered_channel(
      raw.imu, [](const ImuSample& s) { return s.gyro; }, cfg.cutoff_hz,
      imu_rate, cfg.mode);

  // The estimators consume filtered inertial data; band-limiting first keeps
  // every downstream signal inside the same bandwidth.
  std::vector<ImuSample> imu_filtered = raw.imu;
  {
    Interp accel = filtered_channel(
        raw.imu, [](const ImuSample& s) { return s.accel; }, cfg.cutoff_hz,
        imu_rate, cfg.mode);
    for (auto& s : imu_filtered) {
      s.accel = accel.at(s.t);
      s.gyro = gyro.at(s.t);
    }
  }

  OrientationEkf::Config ecfg;
  ecfg.gyro_noise = cfg.ekf_gyro_noise;
  ecfg.orientation_noise = cfg.ekf_orientation_noise;
  const auto orientation =
      fuse_orientation(imu_filtered, raw.pose_obs, ecfg, ticks);

  PositionKf::Config pcfg;
  pcfg.accel_noise = cfg.kf_accel_noise;
  pcfg.position_noise = cfg.kf_position_noise;
  const auto pv = fuse_position(imu_filtered, raw.pose_obs, orientation, pcfg,
                                cfg.gravity, ticks);

  std::vector<FusedState> out(ticks.size());
  for (size_t i = 0; i < ticks.size(); ++i) {
    FusedState& s = out[i];
    s.t = ticks[i];
    s.pose.position = pv[i].position;
    s.pose.orientation = orientation[i].orientation;
    s.twist.linear = pv[i].velocity;
    s.twist.angular = gyro.at(ticks[i]) - orientation[i].gyro_bias;
    const Quat r = s.pose.orientation;
    s.f1 = r * (cfg.mount1 * f1.at(ticks[i]));
    s.f2 = r * (cfg.mount2 * f2.at(ticks[i]));
    s.v1 = handle_velocity(s.pose, s.twist, geometry.q1);
    s.v2 = handle_velocity(s.pose, s.twist, geometry.q2);
  }
  return out;
}

}  // namespace dyad
