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

// Batched arithmetic used by the planners: squared distances, per-bit radio
// cost and row accumulation over candidate positions.
//
// Every kernel has a scalar reference and optional SIMD variants selected at
// runtime. All variants evaluate the same operations in the same order
// (no FMA contraction), so their results are bitwise identical.

#include <cstddef>
#include <span>
#include <string_view>

namespace aggroute::kernels {

enum class Backend { Scalar, Avx2, Neon };

std::string_view backend_name(Backend backend);

/// True when the backend was compiled in and the running CPU supports it.
bool backend_available(Backend backend);

/// Backend used by the dispatching entry points below. Defaults to the widest
/// available one.
Backend active_backend();

/// Overrides the dispatch choice (tests and benchmarks). Throws
/// std::invalid_argument if the backend is not available.
void force_backend(Backend backend);

/// Restores the automatic choice.
void reset_backend();

// out[k] = (ax[k]-px)^2 + (ay[k]-py)^2
void squared_distances_to_point(std::span<const double> ax,
                                std::span<const double> ay, double px,
                                double py, std::span<double> out);

// out[k] = eps_t + eps_rf * d2[k]^(beta/2)
void transmit_cost_per_bit(std::span<const double> d2, double eps_t,
                           double eps_rf, double beta, std::span<double> out);

// dst[k] += scale * src[k]
void scaled_accumulate(std::span<double> dst, std::span<const double> src,
                       double scale);

/// Index of the smallest element; first index wins on ties. NaN entries are
/// never selected. Returns values.size() when nothing is selectable.
std::size_t argmin(std::span<const double> values);

// Explicit per-backend entry points, used by the equivalence tests.
namespace scalar {
void squared_distances_to_point(std::span<const double> ax,
                                std::span<const double> ay, double px,
                                double py, std::span<double> out);
void transmit_cost_per_bit(std::span<const double> d2, double eps_t,
                           double eps_rf, double beta, std::span<double> out);
void scaled_accumulate(std::span<double> dst, std::span<const double> src,
                       double scale);
std::size_t argmin(std::span<const double> values);
}  // namespace scalar

namespace avx2 {
void squared_distances_to_point(std::span<const double> ax,
                                std::span<const double> ay, double px,
                                double py, std::span<double> out);
void transmit_cost_per_bit(std::span<const double> d2, double eps_t,
                           double eps_rf, double beta, std::span<double> out);
void scaled_accumulate(std::span<double> dst, std::span<const double> src,
                       double scale);
std::size_t argmin(std::span<const double> values);
}  // namespace avx2

namespace neon {
void squared_distances_to_point(std::span<const double> ax,
                                std::span<const double> ay, double px,
                                double py, std::span<double> out);
void transmit_cost_per_bit(std::span<const double> d2, double eps_t,
                           double eps_rf, double beta, std::span<double> out);
void scaled_accumulate(std::span<double> dst, std::span<const double> src,
                       double scale);
std::size_t argmin(std::span<const double> values);
}  // namespace neon

}  // namespace aggroute::kernels
