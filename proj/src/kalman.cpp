#include "dyad/kalman.hpp"

#include <cmath>

#include "dyad/common.hpp"

namespace dyad {
namespace {

using Mat3 = Eigen::Matrix3d;

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Quat exp_quat(const Vec3& rotvec) {
  const double angle = rotvec.norm();
  if (angle < 1e-12) return Quat::Identity();
  return Quat(Eigen::AngleAxisd(angle, rotvec / angle));
}

void symmetrize(Mat6& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace

OrientationEkf::OrientationEkf() : OrientationEkf(Config{}) {}

OrientationEkf::OrientationEkf(const Config& cfg) : cfg_(cfg) {}

void OrientationEkf::initialize(double t, const Quat& q0) {
  t_ = t;
  q_ = q0.normalized();
  bias_.setZero();
  cov_.setZero();
  cov_.topLeftCorner<3, 3>() = cfg_.init_angle_var * Mat3::Identity();
  cov_.bottomRightCorner<3, 3>() = cfg_.init_bias_var * Mat3::Identity();
  initialized_ = true;
}

void OrientationEkf::predict(double t, const Vec3& gyro) {
  if (!initialized_) throw DataError("orientation filter: not initialized");
  const double dt = t - t_;
  if (dt <= 0.0) return;
  const Vec3 w = gyro - bias_;
  q_ = (q_ * exp_quat(w * dt)).normalized();

  Mat6 f = Mat6::Identity();
  f.topLeftCorner<3, 3>() -= skew(w) * dt;
  f.topRightCorner<3, 3>() = -dt * Mat3::Identity();

  Mat6 qn = Mat6::Zero();
  qn.topLeftCorner<3, 3>() = cfg_.gyro_noise * dt * dt * Mat3::Identity();
  qn.bottomRightCorner<3, 3>() = cfg_.bias_walk * dt * Mat3::Identity();

  cov_ = f * cov_ * f.transpose() + qn;
  symmetrize(cov_);
  t_ = t;
}

void OrientationEkf::update(const Quat& q_obs) {
  if (!initialized_) throw DataError("orientation filter: not initialized");
  Quat err = q_.conjugate() * q_obs.normalized();
  if (err.w() < 0.0) err.coeffs() *= -1.0;
  const Vec3 residual = 2.0 * err.vec();

  const Mat3 s = cov_.topLeftCorner<3, 3>() +
                 cfg_.orientation_noise * Mat3::Identity();
  const Eigen::Matrix<double, 6, 3> k =
      cov_.leftCols<3>() * s.ldlt().solve(Mat3::Identity());
  const Eigen::Matrix<double, 6, 1> dx = k * residual;

  q_ = (q_ * exp_quat(dx.head<3>())).normalized();
  bias_ += dx.tail<3>();

  Mat6 ikh = Mat6::Identity();
  ikh.leftCols<3>() -= k;
  cov_ = ikh * cov_ * ikh.transpose() +
         k * (cfg_.orientation_noise * Mat3::Identity()) * k.transpose();
  symmetrize(cov_);
}

PositionKf::PositionKf() : PositionKf(Config{}) {}

PositionKf::PositionKf(const Config& cfg) : cfg_(cfg) {}

void PositionKf::initialize(double t, const Vec3& p0) {
  t_ = t;
  p_ = p0;
  v_.setZero();
  cov_.setZero();
  cov_.topLeftCorner<3, 3>() = cfg_.init_pos_var * Mat3::Identity();
  cov_.bottomRightCorner<3, 3>() = cfg_.init_vel_var * Mat3::Identity();
  initialized_ = true;
}

void PositionKf::predict(double t, const Vec3& accel_spatial) {
  if (!initialized_) throw DataError("position filter: not initialized");
  const double dt = t - t_;
  if (dt <= 0.0) return;
  p_ += v_ * dt + 0.5 * dt * dt * accel_spatial;
  v_ += dt * accel_spatial;

  Mat6 f = Mat6::Identity();
  f.topRightCorner<3, 3>() = dt * Mat3::Identity();

  Eigen::Matrix<double, 6, 3> g;
  g.topRows<3>() = 0.5 * dt * dt * Mat3::Identity();
  g.bottomRows<3>() = dt * Mat3::Identity();
  Mat6 qn = cfg_.accel_noise * g * g.transpose();
  qn.diagonal().array() += 1e-12;  // keep strictly positive definite

  cov_ = f * cov_ * f.transpose() + qn;
  symmetrize(cov_);
  t_ = t;
}

void PositionKf::update(const Vec3& p_obs) {
  if (!initialized_) throw DataError("position filter: not initialized");
  const Vec3 residual = p_obs - p_;
  const Mat3 s = cov_.topLeftCorner<3, 3>() +
                 cfg_.position_noise * Mat3::Identity();
  const Eigen::Matrix<double, 6, 3> k =
      cov_.leftCols<3>() * s.ldlt().solve(Mat3::Identity());
  const Eigen::Matrix<double, 6, 1> dx = k * residual;
  p_ += dx.head<3>();
  v_ += dx.tail<3>();

  Mat6 ikh = Mat6::Identity();
  ikh.leftCols<3>() -= k;
  cov_ = ikh * cov_ * ikh.transpose() +
         k * (cfg_.position_noise * Mat3::Identity()) * k.transpose();
  symmetrize(cov_);
}

}  // namespace dyad
