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

#include <immintrin.h>

#include <cstddef>
#include <limits>

#include "aggroute/kernels.hpp"

namespace aggroute::kernels::avx2 {

void squared_distances_to_point(std::span<const double> ax,
                                std::span<const double> ay, double px,
                                double py, std::span<double> out) {
  const std::size_t n = out.size();
  const __m256d vpx = _mm256_set1_pd(px);
  const __m256d vpy = _mm256_set1_pd(py);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(ax.data() + k), vpx);
    const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ay.data() + k), vpy);
    const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    _mm256_storeu_pd(out.data() + k, d2);
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
  const __m256d vt = _mm256_set1_pd(eps_t);
  const __m256d vrf = _mm256_set1_pd(eps_rf);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d p = _mm256_loadu_pd(d2.data() + k);
    if (beta == 4.0) p = _mm256_mul_pd(p, p);
    _mm256_storeu_pd(out.data() + k, _mm256_add_pd(vt, _mm256_mul_pd(vrf, p)));
  }
  scalar::transmit_cost_per_bit(d2.subspan(k), eps_t, eps_rf, beta, out.subspan(k));
}

void scaled_accumulate(std::span<double> dst, std::span<const double> src,
                       double scale) {
  const std::size_t n = dst.size();
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_loadu_pd(dst.data() + k);
    const __m256d s = _mm256_loadu_pd(src.data() + k);
    _mm256_storeu_pd(dst.data() + k, _mm256_add_pd(d, _mm256_mul_pd(vs, s)));
  }
  scalar::scaled_accumulate(dst.subspan(k), src.subspan(k), scale);
}

std::size_t argmin(std::span<const double> values) {
  const std::size_t n = values.size();
  const double inf = std::numeric_limits<double>::infinity();
  const __m256d vinf = _mm256_set1_pd(inf);
  __m256d vmin = vinf;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d v = _mm256_loadu_pd(values.data() + k);
    // NaN lanes become +inf so they never win the reduction.
    const __m256d ordered = _mm256_cmp_pd(v, v, _CMP_ORD_Q);
    vmin = _mm256_min_pd(vmin, _mm256_blendv_pd(vinf, v, ordered));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmin);
  double best = inf;
  for (double lane : lanes) best = lane < best ? lane : best;
  for (std::size_t r = k; r < n; ++r) {
    if (values[r] < best) best = values[r];
  }
  for (std::size_t r = 0; r < n; ++r) {
    if (values[r] == best) return r;
  }
  return n;
}

}  // namespace aggroute::kernels::avx2
