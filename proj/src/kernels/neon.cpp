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

#include <arm_neon.h>

#include <cstddef>
#include <limits>

#include "aggroute/kernels.hpp"

namespace aggroute::kernels::neon {

void squared_distances_to_point(std::span<const double> ax,
                                std::span<const double> ay, double px,
                                double py, std::span<double> out) {
  const std::size_t n = out.size();
  const float64x2_t vpx = vdupq_n_f64(px);
  const float64x2_t vpy = vdupq_n_f64(py);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t dx = vsubq_f64(vld1q_f64(ax.data() + k), vpx);
    const float64x2_t dy = vsubq_f64(vld1q_f64(ay.data() + k), vpy);
    vst1q_f64(out.data() + k, vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
  }
  scalar::squared_distances_to_point(ax.subspan(k), ay.subspan(k), px, py,
                                     out.subspan(k));
}

void transmit_cost_per_bit(std::span<const double> d2, double eps_t,
                           double eps_rf, double beta, std::span<double> out) {
  if (beta != 2.0 && beta != 4.0) {
    scalar::transmit_cost_per_bit(d2, eps_t, eps_rf, beta, out);
    return;
  }
  const std::size_t n = out.size();
  const float64x2_t vt = vdupq_n_f64(eps_t);
  const float64x2_t vrf = vdupq_n_f64(eps_rf);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    float64x2_t p = vld1q_f64(d2.data() + k);
    if (beta == 4.0) p = vmulq_f64(p, p);
    vst1q_f64(out.data() + k, vaddq_f64(vt, vmulq_f64(vrf, p)));
  }
  scalar::transmit_cost_per_bit(d2.subspan(k), eps_t, eps_rf, beta, out.subspan(k));
}

void scaled_accumulate(std::span<double> dst, std::span<const double> src,
                       double scale) {
  const std::size_t n = dst.size();
  const float64x2_t vs = vdupq_n_f64(scale);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t d = vld1q_f64(dst.data() + k);
    vst1q_f64(dst.data() + k, vaddq_f64(d, vmulq_f64(vs, vld1q_f64(src.data() + k))));
  }
  scalar::scaled_accumulate(dst.subspan(k), src.subspan(k), scale);
}

std::size_t argmin(std::span<const double> values) {
  const std::size_t n = values.size();
  const double inf = std::numeric_limits<double>::infinity();
  const float64x2_t vinf = vdupq_n_f64(inf);
  float64x2_t vmin = vinf;
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t v = vld1q_f64(values.data() + k);
    const uint64x2_t ordered = vceqq_f64(v, v);
    vmin = vminq_f64(vmin, vbslq_f64(ordered, v, vinf));
  }
  double best = vminvq_f64(vmin);
  for (std::size_t r = k; r < n; ++r) {
    if (values[r] < best) best = values[r];
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (values[r] == best) return r;
  }
  return n;
}

}  // namespace aggroute::kernels::neon
