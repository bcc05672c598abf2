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


#pragma once

// Target motion, distance-dependent sensing and the information filter used to
// fuse measurements from several UAVs.

#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aggroute/model.hpp"

namespace aggroute {

using Vector2 = Eigen::Vector2d;
using Vector4 = Eigen::Vector4d;
using Matrix2 = Eigen::Matrix2d;
using Matrix4 = Eigen::Matrix4d;
using Observation = Eigen::Matrix<double, 2, 4>;

/// Position and velocity (x, y, vx, vy) of the tracked target.
struct TargetState {
  Vector4 x = Vector4::Zero();

  Vec2 position() const { return Vec2{x(0), x(1)}; }
};

/// Information form: information vector and matrix (inverse covariance).
struct FilterState {
  Vector4 info = Vector4::Zero();
  Matrix4 info_matrix = Matrix4::Identity();

  Vector4 estimate() const;
  Vec2 position() const;
};

/// Linear position sensor whose noise covariance grows with distance:
/// R = K * d^beta.
struct SensorModel {
  Observation H = Observation::Zero();
  Matrix2 K = Matrix2::Identity();
  double beta = 2.0;
};

struct Measurement {
  Vector2 z = Vector2::Zero();
  Matrix2 R = Matrix2::Identity();
};

/// Constant-velocity transition over `dt` seconds.
Matrix4 constant_velocity_transition(double dt);
Observation position_observation();

/// Distances below this floor are clamped before computing R.
inline constexpr double kMinSensingDistance = 1.0;
double sensing_distance(Vec2 sensor, Vec2 target);

/// X+ = F X + w with w ~ N(0, Q). Q may be singular (e.g. zero).
TargetState target_step(const TargetState& state, const Matrix4& F, const Matrix4& Q,
                        std::mt19937_64& rng);

/// R = K d^beta. Throws std::invalid_argument when d <= 0.
Matrix2 measurement_noise_cov(const SensorModel& model, double distance);

/// Sum over sensors of tr(H^T ln(R^-1) H). R must be diagonal; an R entry
/// at or above 1 contributes a non-positive term and is reported as-is.
double info_contribution(std::span<const double> distances, const SensorModel& model);

/// Simulated measurement of the true state, Z = H X + v, v ~ N(0, R).
Measurement measure(const TargetState& truth, const SensorModel& model, double distance,
                    std::mt19937_64& rng);

/// Throws std::runtime_error when the information matrix is singular.
FilterState filter_predict(const FilterState& filter, const Matrix4& F, const Matrix4& Q);

/// Additive multi-sensor update; an empty set leaves the filter unchanged.
FilterState filter_update_multi(const FilterState& filter, const Observation& H,
                                std::span<const Measurement> measurements);

}  // namespace aggroute
