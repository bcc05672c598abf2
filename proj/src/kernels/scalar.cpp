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

#include <cmath>
#include <cstddef>
#include <limits>

#include "aggroute/kernels.hpp"

namespace aggroute::kernels::scalar {

void squared_distances_to_point(std::span<const double> ax,
                                std::span<const double> ay, double px,
                                double py, std::span<double> out) {
  const std::size_t n = out.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = ax[k] - px;
    const double dy = ay[k] - py;
    out[k] = dx * dx + dy * dy;
  }
}

void transmit_cost_per_bit(std::span<const double> d2, double eps_t,
                           double eps_rf, double beta, std::span<double> out) {
  const std::size_t n = out.size();
  if (beta == 2.0) {
    for (std::size_t k = 0; k < n; ++k) out[k] = eps_t + eps_rf * d2[k];
  } else if (beta == 4.0) {
    for (std::size_t k = 0; k < n; ++k) out[k] = eps_t + eps_rf * (d2[k] * d2[k]);
  } else {
    const double half = 0.5 * beta;
    for (std::size_t k = 0; k < n; ++k) out[k] = eps_t + eps_rf * std::pow(d2[k], half);
  }
}

void scaled_accumulate(std::span<double> dst, std::span<const double> src,
                       double scale) {
  const std::size_t n = dst.size();
  for (std::size_t k = 0; k < n; ++k) dst[k] = dst[k] + scale * src[k];
}

std::size_t argmin(std::span<const double> values) {
  std::size_t best = values.size();
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (std::isnan(v)) continue;
    if (best == values.size() || v < best_value) {
      best = k;
      best_value = v;
    }
  }
  return best;
}

}  // namespace aggroute::kernels::scalar
