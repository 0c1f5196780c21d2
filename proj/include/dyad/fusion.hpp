#pragma once

#include <vector>

#include "dyad/filters.hpp"
#include "dyad/geometry.hpp"
#include "dyad/kalman.hpp"

namespace dyad {

struct WrenchSample {
  double t;
  Vec3 force;   // N, handle sensor frame
  Vec3 torque;  // N*m, unused downstream
};

struct ImuSample {
  double t;
  Vec3 accel;  // m/s^2, body frame specific force
  Vec3 gyro;   // rad/s, body frame
};

struct PoseObservation {
  double t;
  int camera_id;
  Vec3 position;
  Quat orientation;
};

// Raw multirate session: two handle wrench streams, one inertial stream,
// irregular camera poses. Timestamps strictly increasing per stream.
struct RawStreams {
  std::vector<WrenchSample> ft1, ft2;
  std::vector<ImuSample> imu;
  std::vector<PoseObservation> pose_obs;
};

// One tick of the fused, band-limited, uniform-rate state stream.
struct FusedState {
  double t;
  Pose pose;
  Twist twist;
  Vec3 f1, f2;  // handle forces, spatial frame
  Vec3 v1, v2;  // handle velocities, spatial frame
};

struct FilterConfig {
  double cutoff_hz = 12.5;
  double output_rate_hz = 100.0;
  FilterMode mode = FilterMode::ZeroPhase;
  double ekf_gyro_noise = 1e-4;
  double ekf_orientation_noise = 1e-4;
  double kf_accel_noise = 4e-2;
  double kf_position_noise = 1e-4;
  Quat mount1 = Quat::Identity();  // handle sensor frame -> body frame
  Quat mount2 = Quat::Identity();
  double gravity = 9.80665;

  void validate() const;
};

struct OrientationEstimate {
  double t;
  Quat orientation;
  Vec3 gyro_bias;
};

struct PvEstimate {
  double t;
  Vec3 position;
  Vec3 velocity;
};

// Attitude stream on the given ticks from gyro prediction + camera
// orientation corrections. Gaps in observations are bridged by
// prediction alone.
std::vector<OrientationEstimate> fuse_orientation(
    const std::vector<ImuSample>& imu,
    const std::vector<PoseObservation>& pose_obs,
    const OrientationEkf::Config& cfg, const std::vector<double>& ticks);

// Position/velocity stream from gravity-compensated acceleration and
// camera position fixes. Needs the attitude stream to rotate the
// body-frame acceleration.
std::vector<PvEstimate> fuse_position(
    const std::vector<ImuSample>& imu,
    const std::vector<PoseObservation>& pose_obs,
    const std::vector<OrientationEstimate>& orientation,
    const PositionKf::Config& cfg, double gravity,
    const std::vector<double>& ticks);

// Full alignment: filter every stream at its native rate, fuse, and
// resample everything onto one uniform timeline.
std::vector<FusedState> align(const RawStreams& raw, const FilterConfig& cfg,
                              const HandleGeometry& geometry);

// Attitude lookup with spherical interpolation between estimates.
Quat orientation_at(const std::vector<OrientationEstimate>& stream, double t);

}  // namespace dyad
