// Copyright 2026 The aggroute Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "aggroute/tracking.hpp"

#include <cmath>
#include <stdexcept>

namespace aggroute {

namespace {

// Matrix square root of a symmetric PSD matrix, tolerant of zero blocks.
template <int N>
Eigen::Matrix<double, N, N> psd_sqrt(const Eigen::Matrix<double, N, N>& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> es(m);
  Eigen::Matrix<double, N, 1> root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

template <int N>
Eigen::Matrix<double, N, 1> standard_normal(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix<double, N, 1> v;
  for (int k = 0; k < N; ++k) v(k) = normal(rng);
  return v;
}

bool is_diagonal(const Matrix2& m) { return m(0, 1) == 0.0 && m(1, 0) == 0.0; }

}  // namespace

Vector4 FilterState::estimate() const { return info_matrix.ldlt().solve(info); }

Vec2 FilterState::position() const {
  const Vector4 x = estimate();
  return Vec2{x(0), x(1)};
}

Matrix4 constant_velocity_transition(double dt) {
  Matrix4 F = Matrix4::Identity();
  F(0, 2) = dt;
  F(1, 3) = dt;
  return F;
}

Observation position_observation() {
  Observation H = Observation::Zero();
  H(0, 0) = 1.0;
  H(1, 1) = 1.0;
  return H;
}

double sensing_distance(Vec2 sensor, Vec2 target) {
  return std::max(distance(sensor, target), kMinSensingDistance);
}

TargetState target_step(const TargetState& state, const Matrix4& F, const Matrix4& Q,
                        std::mt19937_64& rng) {
  TargetState next;
  next.x = F * state.x;
  if (!Q.isZero(0.0)) next.x += psd_sqrt<4>(Q) * standard_normal<4>(rng);
  return next;
}

Matrix2 measurement_noise_cov(const SensorModel& model, double distance) {
  if (!(distance > 0.0))
    throw std::invalid_argument("measurement noise needs a positive sensor-target distance");
  return model.K * std::pow(distance, model.beta);
}

double info_contribution(std::span<const double> distances, const SensorModel& model) {
  double pi = 0.0;
  for (double d : distances) {
    const Matrix2 R = measurement_noise_cov(model, d);
    if (!is_diagonal(R))
      throw std::invalid_argument("information contribution needs a diagonal noise covariance");
    Matrix2 log_info = Matrix2::Zero();
    log_info(0, 0) = -std::log(R(0, 0));
    log_info(1, 1) = -std::log(R(1, 1));
    pi += (model.H.transpose() * log_info * model.H).trace();
  }
  return pi;
}

Measurement measure(const TargetState& truth, const SensorModel& model, double distance,
                    std::mt19937_64& rng) {
  Measurement m;
  m.R = measurement_noise_cov(model, distance);
  m.z = model.H * truth.x + psd_sqrt<2>(m.R) * standard_normal<2>(rng);
  return m;
}

FilterState filter_predict(const FilterState& filter, const Matrix4& F, const Matrix4& Q) {
  Eigen::FullPivLU<Matrix4> lu(filter.info_matrix);
  if (!lu.isInvertible()) throw std::runtime_error("information matrix is singular");
  const Matrix4 P = lu.inverse();
  const Matrix4 predicted_cov = F * P * F.transpose() + Q;
  Eigen::FullPivLU<Matrix4> lu_pred(predicted_cov);
  if (!lu_pred.isInvertible()) throw std::runtime_error("predicted covariance is singular");
  FilterState next;
  next.info_matrix = lu_pred.inverse();
  next.info_matrix = 0.5 * (next.info_matrix + next.info_matrix.transpose());
  next.info = next.info_matrix * F * P * filter.info;
  return next;
}

FilterState filter_update_multi(const FilterState& filter, const Observation& H,
                                std::span<const Measurement> measurements) {
  FilterState next = filter;
  for (const Measurement& m : measurements) {
    const Matrix2 R_inv = m.R.inverse();
    next.info += H.transpose() * R_inv * m.z;
    next.info_matrix += H.transpose() * R_inv * H;
  }
  return next;
}

}  // namespace aggroute
