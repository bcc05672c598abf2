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


#include <stdexcept>
#include <cmath>
#include <random>

#include "aggroute/tracking.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace aggroute;
using fixtures::tracking_sensor;

namespace {

// Covariance-form Kalman filter used as the reference.
struct Kalman {
  Vector4 x;
  Matrix4 P;

  void predict(const Matrix4& F, const Matrix4& Q) {
    x = F * x;
    P = F * P * F.transpose() + Q;
  }
  void update(const Observation& H, const Measurement& m) {
    const Matrix2 S = H * P * H.transpose() + m.R;
    const Eigen::Matrix<double, 4, 2> K = P * H.transpose() * S.inverse();
    x = x + K * (m.z - H * x);
    P = (Matrix4::Identity() - K * H) * P;
    P = 0.5 * (P + P.transpose());
  }
};

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-300);
}

Matrix4 cv_process_noise() { return Vector4(2, 2, 0.04, 0.04).asDiagonal(); }

}  // namespace

TEST_SUITE("tracking") {
  TEST_CASE("target motion") {
    std::mt19937_64 rng(1);
    TargetState s;
    s.x << 20, 20, 10, 15;
    const TargetState next = target_step(s, constant_velocity_transition(1.0), Matrix4::Zero(), rng);
    CHECK(next.x(0) == 30.0);
    CHECK(next.x(1) == 35.0);
    CHECK(next.x(2) == 10.0);
    CHECK(next.x(3) == 15.0);
    CHECK(target_step(s, Matrix4::Identity(), Matrix4::Zero(), rng).x == s.x);

    std::mt19937_64 a(42), b(42);
    TargetState ta = s, tb = s;
    for (int k = 0; k < 10; ++k) {
      ta = target_step(ta, constant_velocity_transition(1.0), cv_process_noise(), a);
      tb = target_step(tb, constant_velocity_transition(1.0), cv_process_noise(), b);
    }
    CHECK(ta.x == tb.x);
    CHECK(ta.x != s.x);
  }

  TEST_CASE("measurement noise grows with distance") {
    const SensorModel m = tracking_sensor();
    CHECK(measurement_noise_cov(m, 100.0)(0, 0) == doctest::Approx(1e-2).epsilon(1e-12));
    CHECK(measurement_noise_cov(m, 1.0) == m.K);
    CHECK(measurement_noise_cov(m, std::sqrt(6800.0))(1, 1) == doctest::Approx(6.8e-3).epsilon(1e-12));
    CHECK_THROWS_AS(measurement_noise_cov(m, 0.0), std::invalid_argument);
  }

  TEST_CASE("information contribution") {
    const SensorModel m = tracking_sensor();
    const double d = std::sqrt(6800.0);
    const double one[] = {d};
    CHECK(info_contribution(one, m) == doctest::Approx(2.0 * std::log(1.0 / 6.8e-3)).epsilon(1e-12));
    CHECK(info_contribution(one, m) == doctest::Approx(9.98).epsilon(1e-3));
    CHECK(info_contribution(std::span<const double>{}, m) == 0.0);
    const double two[] = {d, d};
    CHECK(info_contribution(two, m) == doctest::Approx(2.0 * info_contribution(one, m)).epsilon(1e-15));
    // At the edge of a 200 m sensing range one sensor still gives 6.44.
    const double edge[] = {200.0};
    CHECK(info_contribution(edge, m) == doctest::Approx(2.0 * std::log(25.0)).epsilon(1e-12));
    SensorModel skew = m;
    skew.K(0, 1) = skew.K(1, 0) = 1e-7;
    CHECK_THROWS_AS(info_contribution(one, skew), std::invalid_argument);
  }

  TEST_CASE("property: single-sensor contribution falls strictly with distance") {
    const SensorModel m = tracking_sensor();
    double previous = INFINITY;
    for (double d = 1.0; d < 2000.0; d *= 1.1) {
      const double ds[] = {d};
      const double pi = info_contribution(ds, m);
      CHECK(pi < previous);
      previous = pi;
    }
  }

  TEST_CASE("prediction with identity dynamics leaves the filter unchanged") {
    FilterState f;
    f.info << 1, 2, 3, 4;
    f.info_matrix = Vector4(2, 3, 4, 5).asDiagonal();
    const FilterState g = filter_predict(f, Matrix4::Identity(), Matrix4::Zero());
    CHECK(rel_diff(g.info_matrix, f.info_matrix) < 1e-15);
    CHECK(rel_diff(g.info, f.info) < 1e-15);
  }

  TEST_CASE("prediction from the initial filter matches the covariance form") {
    const Matrix4 F = constant_velocity_transition(1.0);
    const FilterState g = filter_predict(FilterState{}, F, cv_process_noise());
    const Matrix4 expected = (F * F.transpose() + cv_process_noise()).inverse();
    CHECK(rel_diff(g.info_matrix, expected) < 1e-12);
    CHECK(g.info.norm() == 0.0);
  }

  TEST_CASE("singular information matrix is reported") {
    FilterState f;
    f.info_matrix = Matrix4::Zero();
    CHECK_THROWS_AS(filter_predict(f, Matrix4::Identity(), Matrix4::Zero()), std::runtime_error);
  }

  TEST_CASE("fused update equals sequential single updates") {
    std::mt19937_64 rng(5);
    const SensorModel m = tracking_sensor();
    TargetState truth;
    truth.x << 30, 35, 10, 15;
    const Measurement a = measure(truth, m, 80.0, rng);
    const Measurement b = measure(truth, m, 150.0, rng);
    const Measurement both[] = {a, b};
    const FilterState start = filter_predict(FilterState{}, constant_velocity_transition(1.0), cv_process_noise());
    const FilterState fused = filter_update_multi(start, m.H, both);
    const FilterState seq = filter_update_multi(filter_update_multi(start, m.H, std::span(&a, 1)), m.H, std::span(&b, 1));
    CHECK(rel_diff(fused.info_matrix, seq.info_matrix) < 1e-12);
    CHECK(rel_diff(fused.info, seq.info) < 1e-12);
    CHECK(filter_update_multi(start, m.H, {}).info == start.info);
    // More sensors never lose information.
    CHECK(fused.info_matrix.trace() >= filter_update_multi(start, m.H, std::span(&a, 1)).info_matrix.trace());
  }

  TEST_CASE("property: information filter equals the covariance-form filter over 100 steps") {
    const SensorModel m = tracking_sensor();
    const Matrix4 F = constant_velocity_transition(1.0);
    const Matrix4 Q = cv_process_noise();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> dist(5.0, 200.0);
      std::uniform_int_distribution<int> count(0, 3);
      TargetState truth;
      truth.x << 20, 20, 10, 15;
      FilterState info;
      Kalman kf{Vector4::Zero(), Matrix4::Identity()};
      double worst = 0.0;
      for (int step = 0; step < 100; ++step) {
        truth = target_step(truth, F, Q, rng);
        std::vector<Measurement> ms;
        const int k = count(rng);
        for (int s = 0; s < k; ++s) ms.push_back(measure(truth, m, dist(rng), rng));
        info = filter_update_multi(info, m.H, ms);
        for (const auto& meas : ms) kf.update(m.H, meas);
        worst = std::max(worst, rel_diff(info.estimate(), kf.x));
        worst = std::max(worst, rel_diff(info.info_matrix.inverse(), kf.P));
        info = filter_predict(info, F, Q);
        kf.predict(F, Q);
      }
      CAPTURE(seed);
      CHECK(worst < 1e-9);
    }
  }
}
