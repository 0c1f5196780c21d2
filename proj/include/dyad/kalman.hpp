#pragma once

#include <Eigen/Dense>

#include "dyad/geometry.hpp"

namespace dyad {

using Mat6 = Eigen::Matrix<double, 6, 6>;

// Quaternion attitude estimator with gyro-bias state. Error state is
// (body-frame attitude error, bias error); the quaternion itself stays on
// the manifold via multiplicative correction.
class OrientationEkf {
 public:
  struct Config {
    double gyro_noise = 1e-4;         // per-sample rate variance, (rad/s)^2
    double bias_walk = 1e-9;          // bias random-walk variance, (rad/s)^2 per s
    double orientation_noise = 1e-4;  // observation variance, rad^2
    double init_angle_var = 1e-2;
    double init_bias_var = 1e-4;
  };

  OrientationEkf();
  explicit OrientationEkf(const Config& cfg);

  bool initialized() const { return initialized_; }
  void initialize(double t, const Quat& q0);
  // Advance to time t using the measured body rate. No-op for t <= current.
  void predict(double t, const Vec3& gyro);
  void update(const Quat& q_obs);

  double time() const { return t_; }
  const Quat& orientation() const { return q_; }
  const Vec3& bias() const { return bias_; }
  const Mat6& covariance() const { return cov_; }

 private:
  Config cfg_;
  bool initialized_ = false;
  double t_ = 0.0;
  Quat q_ = Quat::Identity();
  Vec3 bias_ = Vec3::Zero();
  Mat6 cov_ = Mat6::Zero();
};

// Constant-velocity position filter driven by spatial-frame,
// gravity-compensated acceleration, corrected by position fixes.
class PositionKf {
 public:
  struct Config {
    double accel_noise = 4e-2;     // per-sample accel variance, (m/s^2)^2
    double position_noise = 1e-4;  // observation variance, m^2
    double init_pos_var = 1e-2;
    double init_vel_var = 1e-1;
  };

  PositionKf();
  explicit PositionKf(const Config& cfg);

  bool initialized() const { return initialized_; }
  void initialize(double t, const Vec3& p0);
  void predict(double t, const Vec3& accel_spatial);
  void update(const Vec3& p_obs);

  double time() const { return t_; }
  const Vec3& position() const { return p_; }
  const Vec3& velocity() const { return v_; }
  const Mat6& covariance() const { return cov_; }

 private:
  Config cfg_;
  bool initialized_ = false;
  double t_ = 0.0;
  Vec3 p_ = Vec3::Zero();
  Vec3 v_ = Vec3::Zero();
  Mat6 cov_ = Mat6::Zero();
};

}  // namespace dyad
