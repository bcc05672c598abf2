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

#include <atomic>
#include <stdexcept>
#include <string>

#include "aggroute/kernels.hpp"

namespace aggroute::kernels {
namespace {

constexpr int kAuto = -1;
std::atomic<int> g_forced{kAuto};

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect() {
  if (backend_available(Backend::Avx2)) return Backend::Avx2;
  if (backend_available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

}  // namespace

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return cpu_has_avx2();
#else
      return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced != kAuto) return static_cast<Backend>(forced);
  static const Backend detected = detect();
  return detected;
}

void force_backend(Backend backend) {
  if (!backend_available(backend)) {
    throw std::invalid_argument("kernel backend not available: " +
                                std::string(backend_name(backend)));
  }
  g_forced.store(static_cast<int>(backend), std::memory_order_relaxed);
}

void reset_backend() { g_forced.store(kAuto, std::memory_order_relaxed); }

// Unavailable backends are never selected, so their symbols only need to exist
// where they were compiled.
#if defined(__x86_64__) || defined(_M_X64)
#define AGGROUTE_CASE_AVX2(call) \
  case Backend::Avx2:            \
    return avx2::call;
#else
#define AGGROUTE_CASE_AVX2(call)
#endif
#if defined(__aarch64__)
#define AGGROUTE_CASE_NEON(call) \
  case Backend::Neon:            \
    return neon::call;
#else
#define AGGROUTE_CASE_NEON(call)
#endif

#define AGGROUTE_DISPATCH(call)   \
  switch (active_backend()) {     \
    AGGROUTE_CASE_AVX2(call)      \
    AGGROUTE_CASE_NEON(call)      \
    default:                      \
      return scalar::call;        \
  }

void squared_distances_to_point(std::span<const double> ax,
                                std::span<const double> ay, double px,
                                double py, std::span<double> out) {
  AGGROUTE_DISPATCH(squared_distances_to_point(ax, ay, px, py, out))
}

void transmit_cost_per_bit(std::span<const double> d2, double eps_t,
                           double eps_rf, double beta, std::span<double> out) {
  AGGROUTE_DISPATCH(transmit_cost_per_bit(d2, eps_t, eps_rf, beta, out))
}

void scaled_accumulate(std::span<double> dst, std::span<const double> src,
                       double scale) {
  AGGROUTE_DISPATCH(scaled_accumulate(dst, src, scale))
}

std::size_t argmin(std::span<const double> values) {
  AGGROUTE_DISPATCH(argmin(values))
}

}  // namespace aggroute::kernels
